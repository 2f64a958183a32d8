#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "sodcalc/block.hpp"
#include "sodcalc/params.hpp"

namespace sodcalc {

// An ordered block sequence claiming pairwise semiorthogonality. Values are
// immutable in spirit: every operation returns a fresh Sod.
struct Sod {
  Params params;
  std::vector<Block> blocks;
};

inline Sod make_sod(const Params& p, std::vector<Block> blocks) {
  // no block may appear twice as a label
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = i + 1; j < blocks.size(); ++j)
      if (label_equal(blocks[i], blocks[j]))
        fail(errc::certification_failed, "duplicate block " + to_string(blocks[i]));
  return Sod{p, std::move(blocks)};
}

struct AtomCounts {
  long b_type = 0;
  long a_type = 0;
  bool operator==(const AtomCounts& o) const { return b_type == o.b_type && a_type == o.a_type; }
};

// Composite blocks are counted by their expansion sizes, so counts are stable
// under expansion as well as under every mutation rule.
inline AtomCounts count_atoms(const Sod& s) {
  AtomCounts c;
  for (const Block& b : s.blocks) {
    switch (b.kind) {
      case BlockKind::BX:
      case BlockKind::JZ: c.b_type += 1; break;
      case BlockKind::AZ:
      case BlockKind::AXE:
      case BlockKind::PHI: c.a_type += 1; break;
      case BlockKind::FYfull: c.b_type += s.params.m; break;
      case BlockKind::DZfull:
        c.b_type += s.params.M - s.params.d;
        c.a_type += 1;
        break;
    }
  }
  return c;
}

// A certified-zero predicate: true when the backing oracle guarantees
// Hom(p -> q) = 0. Swaps require it in both directions.
using ZeroFn = std::function<bool(const Block&, const Block&)>;

struct EquivResult {
  bool equivalent = false;
  // adjacent transpositions (positions) transforming a into b
  std::vector<int> witness;
};

namespace detail {

inline bool multiset_equal(const Params& p, std::vector<Block> a, std::vector<Block> b) {
  if (a.size() != b.size()) return false;
  for (const Block& x : a) {
    bool found = false;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (block_equal(p, x, b[j])) {
        b.erase(b.begin() + static_cast<long>(j));
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

inline bool swap_licensed(const ZeroFn& zero, const Block& x, const Block& y) {
  return zero(x, y) && zero(y, x);
}

// Stable bubble sort into grid order using licensed swaps only. Returns the
// swap positions, or nullopt if an out-of-order pair can never be swapped.
inline std::optional<std::vector<int>> licensed_sort(std::vector<Block>& seq, const ZeroFn& zero) {
  std::vector<int> swaps;
  for (;;) {
    bool swapped = false;
    bool sorted = true;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      if (grid_key(seq[i]) > grid_key(seq[i + 1])) {
        sorted = false;
        if (swap_licensed(zero, seq[i], seq[i + 1])) {
          std::swap(seq[i], seq[i + 1]);
          swaps.push_back(static_cast<int>(i));
          swapped = true;
        }
      }
    }
    if (sorted) return swaps;
    if (!swapped) return std::nullopt;
  }
}

inline std::vector<std::size_t> canonical_perm(const Params& p, const std::vector<Block>& ref,
                                               const std::vector<Block>& seq) {
  // map each block of seq to its index among ref (labels are unique in a Sod)
  std::vector<std::size_t> perm;
  perm.reserve(seq.size());
  for (const Block& b : seq)
    for (std::size_t j = 0; j < ref.size(); ++j)
      if (block_equal(p, b, ref[j])) {
        perm.push_back(j);
        break;
      }
  return perm;
}

}  // namespace detail

// Reachability of b from a by adjacent transpositions of completely
// orthogonal pairs. Canonicalizes both sides by a licensed stable sort into
// grid order; falls back to a bounded breadth-first search before giving up.
inline EquivResult sod_equiv(const Sod& a, const Sod& b, const ZeroFn& zero) {
  if (a.params != b.params) fail(errc::param_mismatch, a.params.str() + " vs " + b.params.str());
  EquivResult res;
  if (a.blocks.size() != b.blocks.size()) return res;
  if (!detail::multiset_equal(a.params, a.blocks, b.blocks)) return res;

  // fast path: identical sequences
  bool same = true;
  for (std::size_t i = 0; i < a.blocks.size(); ++i)
    if (!block_equal(a.params, a.blocks[i], b.blocks[i])) { same = false; break; }
  if (same) {
    res.equivalent = true;
    return res;
  }

  std::vector<Block> sa = a.blocks;
  std::vector<Block> sb = b.blocks;
  auto wa = detail::licensed_sort(sa, zero);
  auto wb = detail::licensed_sort(sb, zero);
  if (wa && wb) {
    bool eq = true;
    for (std::size_t i = 0; i < sa.size(); ++i)
      if (!block_equal(a.params, sa[i], sb[i])) { eq = false; break; }
    if (eq) {
      res.equivalent = true;
      res.witness = *wa;
      for (auto it = wb->rbegin(); it != wb->rend(); ++it) res.witness.push_back(*it);
      return res;
    }
  }

  // bounded BFS over licensed-swap reachability, depth <= length^2
  const std::size_t len = a.blocks.size();
  const std::size_t max_depth = len * len;
  const std::size_t max_states = 1u << 17;
  auto target = detail::canonical_perm(a.params, a.blocks, b.blocks);
  std::vector<std::size_t> start(len);
  for (std::size_t i = 0; i < len; ++i) start[i] = i;
  std::set<std::vector<std::size_t>> seen;
  struct Node {
    std::vector<std::size_t> perm;
    std::vector<int> path;
  };
  std::deque<Node> queue;
  queue.push_back({start, {}});
  seen.insert(start);
  while (!queue.empty() && seen.size() < max_states) {
    Node cur = std::move(queue.front());
    queue.pop_front();
    if (cur.perm == target) {
      res.equivalent = true;
      res.witness = cur.path;
      return res;
    }
    if (cur.path.size() >= max_depth) continue;
    for (std::size_t i = 0; i + 1 < len; ++i) {
      const Block& x = a.blocks[cur.perm[i]];
      const Block& y = a.blocks[cur.perm[i + 1]];
      if (!detail::swap_licensed(zero, x, y)) continue;
      Node next = cur;
      std::swap(next.perm[i], next.perm[i + 1]);
      next.path.push_back(static_cast<int>(i));
      if (seen.insert(next.perm).second) queue.push_back(std::move(next));
    }
  }
  return res;
}

}  // namespace sodcalc
