#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sodcalc/block.hpp"
#include "sodcalc/driver.hpp"
#include "sodcalc/mutation.hpp"
#include "sodcalc/params.hpp"
#include "sodcalc/sod.hpp"
#include "sodcalc/window.hpp"

// Script language for decomposition sequences and mutation scripts.
// Files use the .sod extension; '#' starts a line comment.
//
//   params { n=2; d=1; m=4 }
//   let S = sod [ FY(0), DZ(0) ]
//   expand S at FY(0)
//   rmut S at BX(3,0)
//   lmut S at JZ(1,0)
//   phi S at AZ(1,0)
//   assert equiv S grid([0..2],[0..1]) after PHI(0)
//   assert vanishes BX(1,0) BX(0,0)
//
// Range sugar: BX([a..b],k) inside block lists, grid([a..b],[c..e]) as a
// sod expression (twist-major order), optionally prefixed via 'after'.

namespace sodcalc {
namespace dsl {

struct SodExpr {
  enum class Kind { Name, Blocks };
  Kind kind = Kind::Name;
  std::string name;
  std::vector<Block> blocks;
};

struct Stmt {
  enum class Kind { Let, Expand, Rmut, Lmut, Phi, AssertEquiv, AssertVanishes };
  Kind kind = Stmt::Kind::Let;
  std::string name;   // Let/Expand/Rmut/Lmut/Phi
  SodExpr init;       // Let
  Block at;           // Expand/Rmut/Lmut/Phi
  SodExpr lhs, rhs;   // AssertEquiv
  Block p, q;         // AssertVanishes
};

struct Script {
  Params params;
  std::vector<Stmt> stmts;
};

namespace detail {

struct Token {
  enum class Kind { Ident, Int, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  long value = 0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { next(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    next();
    return t;
  }

  [[noreturn]] void err(const std::string& msg) const {
    fail(errc::parse_error, "line " + std::to_string(tok_.line) + ", col " +
                                std::to_string(tok_.col) + ": " + msg);
  }

 private:
  void next() {
    for (;;) {
      while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) advance();
      if (i_ < src_.size() && src_[i_] == '#') {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
        continue;
      }
      break;
    }
    tok_.line = line_;
    tok_.col = col_;
    if (i_ >= src_.size()) {
      tok_.kind = Token::Kind::End;
      tok_.text.clear();
      return;
    }
    char c = src_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (i_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[i_])) || src_[i_] == '_')) {
        s += src_[i_];
        advance();
      }
      tok_.kind = Token::Kind::Ident;
      tok_.text = std::move(s);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && i_ + 1 < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_ + 1])))) {
      std::string s;
      if (c == '-') {
        s += c;
        advance();
      }
      while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) {
        s += src_[i_];
        advance();
      }
      tok_.kind = Token::Kind::Int;
      tok_.text = s;
      try {
        tok_.value = std::stol(s);
      } catch (const std::exception&) {
        fail(errc::parse_error, "line " + std::to_string(tok_.line) + ": integer out of range");
      }
      return;
    }
    if (c == '.' && i_ + 1 < src_.size() && src_[i_ + 1] == '.') {
      tok_.kind = Token::Kind::Punct;
      tok_.text = "..";
      advance();
      advance();
      return;
    }
    static const std::string punct = "{}[]()=;,";
    if (punct.find(c) != std::string::npos) {
      tok_.kind = Token::Kind::Punct;
      tok_.text = std::string(1, c);
      advance();
      return;
    }
    fail(errc::parse_error, "line " + std::to_string(line_) + ", col " + std::to_string(col_) +
                                ": unexpected character '" + std::string(1, c) + "'");
  }

  void advance() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  const std::string& src_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) {}

  Script parse() {
    Script sc;
    sc.params = parse_params();
    while (lex_.peek().kind != Token::Kind::End) sc.stmts.push_back(parse_stmt(sc.params));
    return sc;
  }

 private:
  void expect_punct(const std::string& s) {
    Token t = lex_.take();
    if (t.kind != Token::Kind::Punct || t.text != s)
      fail(errc::parse_error, "line " + std::to_string(t.line) + ", col " + std::to_string(t.col) +
                                  ": expected '" + s + "'");
  }

  void expect_ident(const std::string& s) {
    Token t = lex_.take();
    if (t.kind != Token::Kind::Ident || t.text != s)
      fail(errc::parse_error, "line " + std::to_string(t.line) + ", col " + std::to_string(t.col) +
                                  ": expected '" + s + "'");
  }

  int expect_int() {
    Token t = lex_.take();
    if (t.kind != Token::Kind::Int)
      fail(errc::parse_error,
           "line " + std::to_string(t.line) + ", col " + std::to_string(t.col) +
               ": expected integer");
    return static_cast<int>(t.value);
  }

  std::string expect_name() {
    Token t = lex_.take();
    if (t.kind != Token::Kind::Ident)
      fail(errc::parse_error,
           "line " + std::to_string(t.line) + ", col " + std::to_string(t.col) +
               ": expected name");
    return t.text;
  }

  int parse_field(const char* name) {
    expect_ident(name);
    expect_punct("=");
    return expect_int();
  }

  Params parse_params() {
    expect_ident("params");
    expect_punct("{");
    int n = parse_field("n");
    expect_punct(";");
    int d = parse_field("d");
    expect_punct(";");
    int m = parse_field("m");
    if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == ";") lex_.take();
    expect_punct("}");
    return Params::make(n, d, m);
  }

  bool at_block_head() const {
    if (lex_.peek().kind != Token::Kind::Ident) return false;
    const std::string& s = lex_.peek().text;
    return s == "BX" || s == "JZ" || s == "AZ" || s == "AXE" || s == "FY" || s == "DZ" ||
           s == "PHI";
  }

  std::pair<int, int> parse_range() {
    expect_punct("[");
    int a = expect_int();
    expect_punct("..");
    int b = expect_int();
    expect_punct("]");
    if (a > b) fail(errc::parse_error, "empty range [" + std::to_string(a) + ".." +
                                           std::to_string(b) + "]");
    return {a, b};
  }

  // single block literal (no range sugar)
  Block parse_block(const Params& p) {
    Token head = lex_.take();
    if (head.kind != Token::Kind::Ident)
      fail(errc::parse_error, "line " + std::to_string(head.line) + ": expected block literal");
    auto one_arg = [&]() {
      expect_punct("(");
      int v = expect_int();
      expect_punct(")");
      return v;
    };
    auto two_args = [&]() {
      expect_punct("(");
      int a = expect_int();
      expect_punct(",");
      int b = expect_int();
      expect_punct(")");
      return std::pair<int, int>{a, b};
    };
    if (head.text == "BX") { auto [t, k] = two_args(); return bx(p, t, k); }
    if (head.text == "JZ") { auto [t, k] = two_args(); return jz(p, t, k); }
    if (head.text == "AZ") { auto [t, k] = two_args(); return az(p, t, k); }
    if (head.text == "AXE") return axe(one_arg());
    if (head.text == "FY") return fy_full(p, one_arg());
    if (head.text == "DZ") return dz_full(p, one_arg());
    if (head.text == "PHI") {
      int k = one_arg();
      return phi_block(p, k, canonical_phi_word(p, k), -1);
    }
    fail(errc::parse_error, "line " + std::to_string(head.line) + ": unknown block '" +
                                head.text + "'");
  }

  // block or BX range sugar, appended to out
  void parse_block_item(const Params& p, std::vector<Block>& out) {
    if (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == "BX") {
      // lookahead for BX([a..b],k)
      Token head = lex_.take();
      expect_punct("(");
      if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == "[") {
        auto [a, b] = parse_range();
        expect_punct(",");
        int k = expect_int();
        expect_punct(")");
        for (int t = a; t <= b; ++t) out.push_back(bx(p, t, k));
        return;
      }
      int t = expect_int();
      expect_punct(",");
      int k = expect_int();
      expect_punct(")");
      out.push_back(bx(p, t, k));
      (void)head;
      return;
    }
    out.push_back(parse_block(p));
  }

  std::vector<Block> parse_block_list(const Params& p) {
    std::vector<Block> out;
    parse_block_item(p, out);
    while (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == ",") {
      lex_.take();
      parse_block_item(p, out);
    }
    return out;
  }

  SodExpr parse_sod_expr(const Params& p) {
    SodExpr e;
    if (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == "sod") {
      lex_.take();
      expect_punct("[");
      e.kind = SodExpr::Kind::Blocks;
      e.blocks = parse_block_list(p);
      expect_punct("]");
      return e;
    }
    if (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == "grid") {
      lex_.take();
      expect_punct("(");
      auto [a, b] = parse_range();
      expect_punct(",");
      auto [c, d2] = parse_range();
      expect_punct(")");
      e.kind = SodExpr::Kind::Blocks;
      e.blocks = grid_blocks(p, a, b, c, d2);
      if (lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == "after") {
        lex_.take();
        std::vector<Block> prefix = parse_block_list(p);
        prefix.insert(prefix.end(), e.blocks.begin(), e.blocks.end());
        e.blocks = std::move(prefix);
      }
      return e;
    }
    e.kind = SodExpr::Kind::Name;
    e.name = expect_name();
    return e;
  }

  Stmt parse_stmt(const Params& p) {
    Token t = lex_.peek();
    if (t.kind != Token::Kind::Ident)
      fail(errc::parse_error, "line " + std::to_string(t.line) + ": expected statement");
    Stmt st;
    if (t.text == "let") {
      lex_.take();
      st.kind = Stmt::Kind::Let;
      st.name = expect_name();
      expect_punct("=");
      st.init = parse_sod_expr(p);
      return st;
    }
    if (t.text == "expand" || t.text == "rmut" || t.text == "lmut" || t.text == "phi") {
      lex_.take();
      st.kind = t.text == "expand"  ? Stmt::Kind::Expand
                : t.text == "rmut"  ? Stmt::Kind::Rmut
                : t.text == "lmut"  ? Stmt::Kind::Lmut
                                    : Stmt::Kind::Phi;
      st.name = expect_name();
      expect_ident("at");
      st.at = parse_block(p);
      return st;
    }
    if (t.text == "assert") {
      lex_.take();
      Token what = lex_.take();
      if (what.kind == Token::Kind::Ident && what.text == "equiv") {
        st.kind = Stmt::Kind::AssertEquiv;
        st.lhs = parse_sod_expr(p);
        st.rhs = parse_sod_expr(p);
        return st;
      }
      if (what.kind == Token::Kind::Ident && what.text == "vanishes") {
        st.kind = Stmt::Kind::AssertVanishes;
        st.p = parse_block(p);
        st.q = parse_block(p);
        return st;
      }
      fail(errc::parse_error, "line " + std::to_string(what.line) +
                                  ": expected 'equiv' or 'vanishes'");
    }
    fail(errc::parse_error, "line " + std::to_string(t.line) + ": unknown statement '" +
                                t.text + "'");
  }

  Lexer lex_;
};

}  // namespace detail

inline Script parse(const std::string& text) {
  detail::Parser p(text);
  return p.parse();
}

// --- printing -------------------------------------------------------------------

inline std::string print(const SodExpr& e) {
  if (e.kind == SodExpr::Kind::Name) return e.name;
  return "sod [ " + to_string(e.blocks) + " ]";
}

inline std::string print(const Script& sc) {
  std::ostringstream os;
  os << "params { n=" << sc.params.n << "; d=" << sc.params.d << "; m=" << sc.params.m << " }\n";
  for (const Stmt& st : sc.stmts) {
    switch (st.kind) {
      case Stmt::Kind::Let: os << "let " << st.name << " = " << print(st.init) << "\n"; break;
      case Stmt::Kind::Expand: os << "expand " << st.name << " at " << to_string(st.at) << "\n"; break;
      case Stmt::Kind::Rmut: os << "rmut " << st.name << " at " << to_string(st.at) << "\n"; break;
      case Stmt::Kind::Lmut: os << "lmut " << st.name << " at " << to_string(st.at) << "\n"; break;
      case Stmt::Kind::Phi: os << "phi " << st.name << " at " << to_string(st.at) << "\n"; break;
      case Stmt::Kind::AssertEquiv:
        os << "assert equiv " << print(st.lhs) << " " << print(st.rhs) << "\n";
        break;
      case Stmt::Kind::AssertVanishes:
        os << "assert vanishes " << to_string(st.p) << " " << to_string(st.q) << "\n";
        break;
    }
  }
  return os.str();
}

// Grid-ordered display form of a decomposition.
inline std::string print(const Sod& s) {
  std::vector<Block> sorted = s.blocks;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Block& a, const Block& b) { return grid_key(a) < grid_key(b); });
  return "sod [ " + to_string(sorted) + " ]";
}

// Human-readable trace listing with rule citations.
inline std::string print(const Trace& t) {
  std::ostringstream os;
  os << "trace " << t.params.str() << " schedule \"" << t.schedule << "\"\n";
  for (const TraceStep& s : t.steps) {
    os << "  step " << s.step << " " << rule_name(s.rule) << " @[" << s.lo << "," << s.hi
       << "): " << to_string(s.before) << " -> " << to_string(s.after) << "\n";
    for (const SideCondition& c : s.conds)
      os << "    cond Hom(" << to_string(c.p) << " -> " << to_string(c.q) << ") = Zero  ["
         << c.cite << "]\n";
  }
  return os.str();
}

// --- execution ------------------------------------------------------------------

struct RunResult {
  bool ok = true;
  std::vector<std::string> messages;
};

// Elaborates and executes a script: mutations rebind their target name,
// assertions are checked against the window oracle.
inline RunResult run(const Script& sc) {
  const Params& p = sc.params;
  RunResult res;
  std::map<std::string, Sod> env;
  CertOracle cert = window_certifier(p);
  auto resolve = [&](const SodExpr& e) -> Sod {
    if (e.kind == SodExpr::Kind::Blocks) return make_sod(p, e.blocks);
    auto it = env.find(e.name);
    if (it == env.end()) fail(errc::unbound_name, "unknown decomposition '" + e.name + "'");
    return it->second;
  };
  auto locate = [&](const Sod& s, const Block& b) -> int {
    int at = -1;
    for (std::size_t i = 0; i < s.blocks.size(); ++i)
      if (label_equal(s.blocks[i], b)) {
        if (at >= 0) fail(errc::ambiguous_block, to_string(b) + " occurs more than once");
        at = static_cast<int>(i);
      }
    if (at < 0) fail(errc::unbound_name, to_string(b) + " is not in the decomposition");
    return at;
  };
  int step_id = 0;
  for (const Stmt& st : sc.stmts) {
    switch (st.kind) {
      case Stmt::Kind::Let:
        if (env.count(st.name)) fail(errc::ambiguous_block, "'" + st.name + "' already bound");
        env.emplace(st.name, resolve(st.init));
        break;
      case Stmt::Kind::Expand: {
        if (!env.count(st.name)) fail(errc::unbound_name, st.name);
        Sod& s = env.at(st.name);
        s = expand(s, locate(s, st.at), step_id++).after;
        break;
      }
      case Stmt::Kind::Rmut: {
        if (!env.count(st.name)) fail(errc::unbound_name, st.name);
        Sod& s = env.at(st.name);
        s = right_mutate(s, locate(s, st.at), cert, step_id++).after;
        break;
      }
      case Stmt::Kind::Lmut: {
        if (!env.count(st.name)) fail(errc::unbound_name, st.name);
        Sod& s = env.at(st.name);
        s = left_mutate_step(s, locate(s, st.at), cert, step_id++).after;
        break;
      }
      case Stmt::Kind::Phi: {
        if (!env.count(st.name)) fail(errc::unbound_name, st.name);
        Sod& s = env.at(st.name);
        int at = locate(s, st.at);
        Rewrite r = form_phi(s, at, cert, step_id++);
        // the formed block sits at the front of the rewritten span
        int phi_at = r.step.lo;
        s = simplify_phi_at(r.after, phi_at, cert, step_id++).after;
        break;
      }
      case Stmt::Kind::AssertEquiv: {
        Sod a = resolve(st.lhs);
        Sod b = resolve(st.rhs);
        EquivResult eq = sod_equiv(a, b, window_zero_fn(p));
        if (!eq.equivalent) {
          res.ok = false;
          res.messages.push_back("assert equiv failed: " + print(a) + " vs " + print(b));
        } else {
          res.messages.push_back("assert equiv ok (" + std::to_string(eq.witness.size()) +
                                 " swaps)");
        }
        break;
      }
      case Stmt::Kind::AssertVanishes: {
        if (vanishes(st.p, st.q, p) != Vanish::Guaranteed) {
          res.ok = false;
          res.messages.push_back("assert vanishes failed: Hom(" + to_string(st.p) + " -> " +
                                 to_string(st.q) + ") not guaranteed zero");
        } else {
          res.messages.push_back("assert vanishes ok: " + explain(st.p, st.q, p));
        }
        break;
      }
    }
  }
  return res;
}

inline RunResult run_text(const std::string& text) { return run(parse(text)); }

}  // namespace dsl
}  // namespace sodcalc
