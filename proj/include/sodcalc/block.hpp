#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <tuple>
#include <vector>

#include "sodcalc/errors.hpp"
#include "sodcalc/params.hpp"

namespace sodcalc {

// Admissible-subcategory labels. BX/JZ/AZ/AXE are atomic, FYfull/DZfull are
// composite (they stand for a whole pushed/pulled derived category), PHI is
// an opaque image block defined by its mutation word.
enum class BlockKind { BX, JZ, AZ, AXE, FYfull, DZfull, PHI };

struct Block;

// Defining word of a PHI block, composed of left mutations through block
// lists, a weighted pushforward, twists and character twists. Factors are
// stored in composition order: factors[0] is applied last.
struct PhiFactor {
  enum class Op { LMut, PushJ, Twist, Chi };
  Op op;
  std::vector<Block> blocks;  // LMut only
  int arg = 0;                // PushJ weight, Twist amount, Chi amount
};

struct PhiWord {
  std::vector<PhiFactor> factors;
  bool simplified = false;
};

struct Block {
  BlockKind kind = BlockKind::BX;
  int twist = 0;   // unused for FYfull/DZfull/PHI
  int weight = 0;  // unused for AXE
  PhiWord word;    // PHI only
  int origin_step = -1;  // trace step that created a PHI block
};

inline Block bx(const Params& p, int t, int k) { return {BlockKind::BX, t, p.norm_w(k), {}, -1}; }
inline Block jz(const Params& p, int t, int k) { return {BlockKind::JZ, t, p.norm_w(k), {}, -1}; }
inline Block az(const Params& p, int t, int k) { return {BlockKind::AZ, t, p.norm_w(k), {}, -1}; }
inline Block axe(int t) { return {BlockKind::AXE, t, 0, {}, -1}; }
inline Block fy_full(const Params& p, int k) { return {BlockKind::FYfull, 0, p.norm_w(k), {}, -1}; }
inline Block dz_full(const Params& p, int k) { return {BlockKind::DZfull, 0, p.norm_w(k), {}, -1}; }

inline bool is_composite(const Block& b) {
  return b.kind == BlockKind::FYfull || b.kind == BlockKind::DZfull;
}
inline bool is_phi(const Block& b) { return b.kind == BlockKind::PHI; }

// Label identity: the (kind, twist, weight) triple. PHI blocks are identified
// by weight here; word equality is a separate, params-dependent notion.
inline bool label_equal(const Block& a, const Block& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case BlockKind::BX:
    case BlockKind::JZ:
    case BlockKind::AZ: return a.twist == b.twist && a.weight == b.weight;
    case BlockKind::AXE: return a.twist == b.twist;
    case BlockKind::FYfull:
    case BlockKind::DZfull: return a.weight == b.weight;
    case BlockKind::PHI: return a.weight == b.weight;
  }
  return false;
}

inline const char* kind_name(BlockKind k) {
  switch (k) {
    case BlockKind::BX: return "BX";
    case BlockKind::JZ: return "JZ";
    case BlockKind::AZ: return "AZ";
    case BlockKind::AXE: return "AXE";
    case BlockKind::FYfull: return "FY";
    case BlockKind::DZfull: return "DZ";
    case BlockKind::PHI: return "PHI";
  }
  return "?";
}

inline std::string to_string(const Block& b) {
  switch (b.kind) {
    case BlockKind::BX:
    case BlockKind::JZ:
    case BlockKind::AZ:
      return std::string(kind_name(b.kind)) + "(" + std::to_string(b.twist) + "," +
             std::to_string(b.weight) + ")";
    case BlockKind::AXE: return "AXE(" + std::to_string(b.twist) + ")";
    case BlockKind::FYfull:
    case BlockKind::DZfull:
      return std::string(kind_name(b.kind)) + "(" + std::to_string(b.weight) + ")";
    case BlockKind::PHI: return "PHI(" + std::to_string(b.weight) + ")";
  }
  return "?";
}

inline std::string to_string(const std::vector<Block>& blocks) {
  std::string s;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) s += ", ";
    s += to_string(blocks[i]);
  }
  return s;
}

inline std::string to_string(const PhiWord& w) {
  std::string s;
  for (std::size_t i = 0; i < w.factors.size(); ++i) {
    if (i) s += "*";
    const PhiFactor& f = w.factors[i];
    switch (f.op) {
      case PhiFactor::Op::LMut: s += "LMut(" + to_string(f.blocks) + ")"; break;
      case PhiFactor::Op::PushJ: s += "PushJ(" + std::to_string(f.arg) + ")"; break;
      case PhiFactor::Op::Twist: s += "Twist(" + std::to_string(f.arg) + ")"; break;
      case PhiFactor::Op::Chi: s += "Chi(" + std::to_string(f.arg) + ")"; break;
    }
  }
  return s;
}

// Block literal parser, shared by the script language, the CLI and the trace
// reader. Accepts exactly the printed forms above.
inline Block parse_block_literal(const std::string& text, const Params& p) {
  auto bad = [&](const std::string& why) -> Block {
    fail(errc::parse_error, "block literal '" + text + "': " + why);
  };
  std::size_t i = 0;
  while (i < text.size() && text[i] == ' ') ++i;
  std::size_t h = i;
  while (i < text.size() && (std::isalpha(static_cast<unsigned char>(text[i])))) ++i;
  std::string head = text.substr(h, i - h);
  auto parse_args = [&](int want) {
    std::vector<int> args;
    if (i >= text.size() || text[i] != '(') bad("expected '('");
    ++i;
    for (int a = 0; a < want; ++a) {
      if (a) {
        if (i >= text.size() || text[i] != ',') bad("expected ','");
        ++i;
      }
      while (i < text.size() && text[i] == ' ') ++i;
      std::size_t s = i;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (s == i) bad("expected integer");
      args.push_back(std::stoi(text.substr(s, i - s)));
      while (i < text.size() && text[i] == ' ') ++i;
    }
    if (i >= text.size() || text[i] != ')') bad("expected ')'");
    ++i;
    while (i < text.size() && text[i] == ' ') ++i;
    if (i != text.size()) bad("trailing characters");
    return args;
  };
  if (head == "BX") { auto a = parse_args(2); return bx(p, a[0], a[1]); }
  if (head == "JZ") { auto a = parse_args(2); return jz(p, a[0], a[1]); }
  if (head == "AZ") { auto a = parse_args(2); return az(p, a[0], a[1]); }
  if (head == "AXE") { auto a = parse_args(1); return axe(a[0]); }
  if (head == "FY") { auto a = parse_args(1); return fy_full(p, a[0]); }
  if (head == "DZ") { auto a = parse_args(1); return dz_full(p, a[0]); }
  if (head == "PHI") { auto a = parse_args(1); Block b{BlockKind::PHI, 0, p.norm_w(a[0]), {}, -1}; return b; }
  bad("unknown block head '" + head + "'");
  return {};
}

// Expansion of composite blocks:
//   FY(k)  ->  BX(0,k), ..., BX(m-1,k)
//   DZ(k)  ->  AZ(d,k), JZ(d,k), ..., JZ(M-1,k)   (no JZ run when M = d)
inline std::vector<Block> expansion(const Params& p, const Block& b) {
  std::vector<Block> out;
  if (b.kind == BlockKind::FYfull) {
    for (int t = 0; t < p.m; ++t) out.push_back(bx(p, t, b.weight));
  } else if (b.kind == BlockKind::DZfull) {
    out.push_back(az(p, p.d, b.weight));
    for (int t = p.d; t <= p.M - 1; ++t) out.push_back(jz(p, t, b.weight));
  } else {
    fail(errc::not_composite, to_string(b) + " has no expansion");
  }
  return out;
}

// Grid order is twist-major, then weight. This is the canonical ordering
// convention used for every grid comparison and recorded in trace headers.
inline std::vector<Block> grid_blocks(const Params& p, int t_lo, int t_hi, int w_lo, int w_hi) {
  std::vector<Block> out;
  for (int t = t_lo; t <= t_hi; ++t)
    for (int k = w_lo; k <= w_hi; ++k) out.push_back(bx(p, t, k));
  return out;
}

inline std::vector<Block> full_grid(const Params& p) {
  return grid_blocks(p, 0, p.M - 1, 0, p.n - 1);
}

// Sort key realizing grid order; PHI blocks come first, ordered by weight.
inline std::tuple<int, int, int, int> grid_key(const Block& b) {
  if (b.kind == BlockKind::PHI) return {0, b.weight, 0, 0};
  int kind_rank = 0;
  switch (b.kind) {
    case BlockKind::BX: kind_rank = 0; break;
    case BlockKind::JZ: kind_rank = 1; break;
    case BlockKind::AZ: kind_rank = 2; break;
    case BlockKind::AXE: kind_rank = 3; break;
    case BlockKind::FYfull: kind_rank = 4; break;
    case BlockKind::DZfull: kind_rank = 5; break;
    default: kind_rank = 6; break;
  }
  return {1, b.twist, b.weight, kind_rank};
}

// --- PHI word construction and normalization ---------------------------------

inline PhiFactor lmut_factor(std::vector<Block> blocks) {
  PhiFactor f;
  f.op = PhiFactor::Op::LMut;
  f.blocks = std::move(blocks);
  return f;
}
inline PhiFactor push_j_factor(int k) { return {PhiFactor::Op::PushJ, {}, k}; }
inline PhiFactor twist_factor(int c) { return {PhiFactor::Op::Twist, {}, c}; }
inline PhiFactor chi_factor(int c) { return {PhiFactor::Op::Chi, {}, c}; }

// Raw word attached by PHI formation: LMut(C_k) * PushJ(k) * Twist(d).
inline PhiWord raw_phi_word(const Params& p, int k, std::vector<Block> prefix) {
  PhiWord w;
  w.factors.push_back(lmut_factor(std::move(prefix)));
  w.factors.push_back(push_j_factor(p.norm_w(k)));
  w.factors.push_back(twist_factor(p.d));
  w.simplified = false;
  return w;
}

// Simplified word: LMut(BX([0,d-1],k)) * PushJ(k) * Twist(d).
inline PhiWord canonical_phi_word(const Params& p, int k) {
  PhiWord w;
  w.factors.push_back(lmut_factor(grid_blocks(p, 0, p.d - 1, p.norm_w(k), p.norm_w(k))));
  w.factors.push_back(push_j_factor(p.norm_w(k)));
  w.factors.push_back(twist_factor(p.d));
  w.simplified = true;
  return w;
}

inline Block phi_block(const Params& p, int k, PhiWord word, int origin_step) {
  Block b;
  b.kind = BlockKind::PHI;
  b.weight = p.norm_w(k);
  b.word = std::move(word);
  b.origin_step = origin_step;
  return b;
}

inline Block shift_weight(const Params& p, const Block& b, int c) {
  Block out = b;
  if (out.kind != BlockKind::AXE && out.kind != BlockKind::PHI)
    out.weight = p.norm_w(out.weight + c);
  return out;
}

// Word normalization: push Chi factors rightward until absorbed.
//   Chi(c) * LMut(S)  ->  LMut(S with weights shifted by c) * Chi(c)
//   Chi(c) * PushJ(k) ->  PushJ(k+c)
//   Chi(c) * Twist(t) ->  Twist(t) * Chi(c)
//   Chi(a) * Chi(b)   ->  Chi(a+b), Chi(0) drops
inline PhiWord normalize_word(const Params& p, PhiWord w) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < w.factors.size(); ++i) {
      if (w.factors[i].op != PhiFactor::Op::Chi) continue;
      int c = p.norm_w(w.factors[i].arg);
      PhiFactor& next = w.factors[i + 1];
      if (c == 0) {
        w.factors.erase(w.factors.begin() + static_cast<long>(i));
      } else if (next.op == PhiFactor::Op::LMut) {
        for (Block& b : next.blocks) b = shift_weight(p, b, c);
        std::swap(w.factors[i], w.factors[i + 1]);
      } else if (next.op == PhiFactor::Op::PushJ) {
        next.arg = p.norm_w(next.arg + c);
        w.factors.erase(w.factors.begin() + static_cast<long>(i));
      } else if (next.op == PhiFactor::Op::Twist) {
        std::swap(w.factors[i], w.factors[i + 1]);
      } else {  // Chi
        next.arg = p.norm_w(next.arg + c);
        w.factors.erase(w.factors.begin() + static_cast<long>(i));
      }
      changed = true;
      break;
    }
    // trailing Chi(0)
    if (!w.factors.empty() && w.factors.back().op == PhiFactor::Op::Chi &&
        p.norm_w(w.factors.back().arg) == 0) {
      w.factors.pop_back();
      changed = true;
    }
  }
  return w;
}

inline bool word_equal(const Params& p, const PhiWord& a, const PhiWord& b) {
  PhiWord na = normalize_word(p, a);
  PhiWord nb = normalize_word(p, b);
  if (na.factors.size() != nb.factors.size()) return false;
  for (std::size_t i = 0; i < na.factors.size(); ++i) {
    const PhiFactor& fa = na.factors[i];
    const PhiFactor& fb = nb.factors[i];
    if (fa.op != fb.op) return false;
    if (fa.op == PhiFactor::Op::LMut) {
      if (fa.blocks.size() != fb.blocks.size()) return false;
      for (std::size_t j = 0; j < fa.blocks.size(); ++j)
        if (!label_equal(fa.blocks[j], fb.blocks[j])) return false;
    } else if (fa.op == PhiFactor::Op::PushJ || fa.op == PhiFactor::Op::Chi) {
      if (p.norm_w(fa.arg) != p.norm_w(fb.arg)) return false;
    } else {
      if (fa.arg != fb.arg) return false;
    }
  }
  return true;
}

// Structural block equality. PHI blocks compare by weight and normalized
// defining word; the chi-relabeling makes that word canonical.
inline bool block_equal(const Params& p, const Block& a, const Block& b) {
  if (!label_equal(a, b)) return false;
  if (a.kind == BlockKind::PHI) return word_equal(p, a.word, b.word);
  return true;
}

}  // namespace sodcalc
