#pragma once

#include <string>
#include <vector>

#include "sodcalc/block.hpp"
#include "sodcalc/params.hpp"

namespace sodcalc {

// Formal atoms living on the base spaces or on the equivariant cover. Atoms
// upstairs remember how they got there: as a pullback from the base, as a
// pushforward from the divisor, or as the primitive residual component.
enum class Space { Y, Z, XEq };
enum class Label { B, A };
enum class XOrigin { None, PulledFromY, PushedFromZ, Primitive };

struct Atom {
  Space space = Space::Y;
  Label label = Label::B;
  int twist = 0;
  int weight = 0;  // character factor on Y/Z atoms, functor index upstairs
  int shift = 0;   // homological bookkeeping only
  XOrigin origin = XOrigin::None;
};

inline Atom y_atom(int twist, int weight = 0, int shift = 0) {
  return {Space::Y, Label::B, twist, weight, shift, XOrigin::None};
}
inline Atom z_atom(Label label, int twist, int weight = 0, int shift = 0) {
  return {Space::Z, label, twist, weight, shift, XOrigin::None};
}
inline Atom xeq_primitive(int twist) {
  return {Space::XEq, Label::A, twist, 0, 0, XOrigin::Primitive};
}

inline std::string to_string(const Atom& a) {
  std::string s;
  switch (a.space) {
    case Space::Y: s = "Y:"; break;
    case Space::Z: s = "Z:"; break;
    case Space::XEq: s = "X:"; break;
  }
  s += (a.label == Label::B ? "B(" : "A(") + std::to_string(a.twist) + ")";
  if (a.weight) s += "<chi^" + std::to_string(a.weight) + ">";
  if (a.shift) s += "[" + std::to_string(a.shift) + "]";
  return s;
}

// A formal filtration; the empty list is the zero object.
struct FormalObject {
  std::vector<Atom> factors;
};

enum class Gen { PullF, PushF, PushJ, PullJ, ShriekJ, ShriekF, PushI, PullI, Twist, Chi, Shift };

struct Generator {
  Gen op;
  int arg = 0;
};

// Generators in application order: gens[0] acts first.
struct FunctorWord {
  std::vector<Generator> gens;
};

inline FunctorWord word(std::initializer_list<Generator> gens) {
  FunctorWord w;
  w.gens.assign(gens);
  return w;
}

enum class Hom { Zero, Nonzero, Unknown };

inline const char* to_string(Hom h) {
  switch (h) {
    case Hom::Zero: return "Zero";
    case Hom::Nonzero: return "Nonzero";
    case Hom::Unknown: return "Unknown";
  }
  return "?";
}

namespace detail {

inline void apply_gen(const Params& p, const Generator& g, const Atom& a,
                      std::vector<Atom>& out) {
  auto wrong_space = [&]() {
    fail(errc::space_mismatch, "generator applied to " + to_string(a));
  };
  switch (g.op) {
    case Gen::Twist: {
      Atom r = a;
      r.twist += g.arg;
      out.push_back(r);
      return;
    }
    case Gen::Shift: {
      Atom r = a;
      r.shift += g.arg;
      out.push_back(r);
      return;
    }
    case Gen::Chi: {
      Atom r = a;
      if (r.origin != XOrigin::Primitive) r.weight = p.norm_w(r.weight + g.arg);
      out.push_back(r);
      return;
    }
    case Gen::PullF: {
      if (a.space != Space::Y) wrong_space();
      Atom r = a;
      r.space = Space::XEq;
      r.origin = XOrigin::PulledFromY;
      r.weight = p.norm_w(a.weight + g.arg);
      out.push_back(r);
      return;
    }
    case Gen::ShriekF: {
      // f^!(F) = f^*(F) twisted by (n-1)d; non-equivariant statement, kept out
      // of equivariant derivations.
      if (a.space != Space::Y) wrong_space();
      Atom r = a;
      r.space = Space::XEq;
      r.origin = XOrigin::PulledFromY;
      r.weight = p.norm_w(a.weight + g.arg);
      r.twist = a.twist + (p.n - 1) * p.d;
      out.push_back(r);
      return;
    }
    case Gen::PushJ: {
      if (a.space != Space::Z) wrong_space();
      Atom r = a;
      r.space = Space::XEq;
      r.origin = XOrigin::PushedFromZ;
      r.weight = p.norm_w(a.weight + g.arg);
      out.push_back(r);
      return;
    }
    case Gen::PullI: {
      if (a.space != Space::Y) wrong_space();
      Atom r = a;
      r.space = Space::Z;
      out.push_back(r);
      return;
    }
    case Gen::PushI: {
      // i_* of a divisor pullback: two-step filtration from the structure
      // sequence of the divisor.
      if (a.space != Space::Z) wrong_space();
      if (a.label != Label::B)
        fail(errc::no_rewrite_rule, "no pushforward rule for " + to_string(a));
      Atom lo = a, hi = a;
      lo.space = Space::Y;
      lo.twist = a.twist - p.n * p.d;
      lo.shift = a.shift + 1;
      hi.space = Space::Y;
      out.push_back(lo);
      out.push_back(hi);
      return;
    }
    case Gen::PushF: {
      if (a.space != Space::XEq) wrong_space();
      if (a.origin == XOrigin::PulledFromY) {
        int step = p.norm_w(g.arg - a.weight);  // a = (k - l) mod n
        Atom r = a;
        r.space = Space::Y;
        r.origin = XOrigin::None;
        r.weight = 0;
        r.twist = a.twist - step * p.d;
        out.push_back(r);
        return;
      }
      if (a.origin == XOrigin::PushedFromZ) {
        if (p.norm_w(g.arg) != a.weight) return;  // zero
        if (a.label != Label::B)
          fail(errc::no_rewrite_rule, "no pushforward rule for " + to_string(a));
        Atom lo = a, hi = a;
        lo.space = Space::Y;
        lo.origin = XOrigin::None;
        lo.weight = 0;
        lo.twist = a.twist - p.n * p.d;
        lo.shift = a.shift + 1;
        hi.space = Space::Y;
        hi.origin = XOrigin::None;
        hi.weight = 0;
        out.push_back(lo);
        out.push_back(hi);
        return;
      }
      fail(errc::no_rewrite_rule, "no pushforward rule for " + to_string(a));
    }
    case Gen::PullJ: {
      if (a.space != Space::XEq) wrong_space();
      if (a.origin == XOrigin::PushedFromZ) {
        int l = p.norm_w(g.arg);
        if (l == a.weight) {
          Atom r = a;
          r.space = Space::Z;
          r.origin = XOrigin::None;
          r.weight = 0;
          out.push_back(r);
        } else if (l == p.norm_w(a.weight + 1)) {
          Atom r = a;
          r.space = Space::Z;
          r.origin = XOrigin::None;
          r.weight = 0;
          r.twist = a.twist - p.d;
          r.shift = a.shift + 1;
          out.push_back(r);
        }
        return;  // zero otherwise
      }
      if (a.origin == XOrigin::PulledFromY) {
        if (p.norm_w(g.arg) == a.weight) {
          Atom r = a;
          r.space = Space::Z;
          r.origin = XOrigin::None;
          r.weight = 0;
          out.push_back(r);
        }
        return;  // zero otherwise
      }
      fail(errc::no_rewrite_rule, "no restriction rule for " + to_string(a));
    }
    case Gen::ShriekJ: {
      if (a.space != Space::XEq) wrong_space();
      if (a.origin == XOrigin::PulledFromY) {
        if (p.norm_w(g.arg) == p.norm_w(a.weight - 1)) {
          Atom r = a;
          r.space = Space::Z;
          r.origin = XOrigin::None;
          r.weight = 0;
          r.twist = a.twist + p.d;
          r.shift = a.shift - 1;
          out.push_back(r);
        }
        return;  // zero otherwise
      }
      fail(errc::no_rewrite_rule, "no shriek rule for " + to_string(a));
    }
  }
}

}  // namespace detail

// Applies a functor word generator by generator to a formal filtration.
inline FormalObject apply(const FunctorWord& w, const FormalObject& x, const Params& p) {
  FormalObject cur = x;
  for (const Generator& g : w.gens) {
    FormalObject next;
    for (const Atom& a : cur.factors) detail::apply_gen(p, g, a, next.factors);
    cur = std::move(next);
  }
  return cur;
}

// Base vanishing windows. Everything outside the cited windows is Unknown;
// Nonzero is asserted only for the identity (equal atom) case.
inline Hom base_hom(const Atom& a, const Atom& b, const Params& p) {
  if (a.space != b.space || a.space == Space::XEq)
    fail(errc::space_mismatch, to_string(a) + " vs " + to_string(b));
  if (a.weight != b.weight) return Hom::Zero;  // character components are orthogonal
  if (a.space == Space::Y) {
    if (a.label == Label::A || b.label == Label::A)
      fail(errc::space_mismatch, "A-type atom on the base: " + to_string(a));
    int diff = a.twist - b.twist;
    if (1 <= diff && diff <= p.m - 1) return Hom::Zero;
    if (diff == 0) return Hom::Nonzero;
    return Hom::Unknown;
  }
  // space Z
  if (!p.bz_defined() && (a.label == Label::B || b.label == Label::B))
    fail(errc::bz_undefined, "m = n*d leaves no B-type component on Z");
  const int w = p.M - p.d;  // number of B-type twists on Z
  if (a.label == Label::B && b.label == Label::B) {
    int diff = a.twist - b.twist;
    if (1 <= diff && diff <= w - 1) return Hom::Zero;
    if (diff == 0) return Hom::Nonzero;
    return Hom::Unknown;
  }
  if (a.label == Label::A && b.label == Label::B) {
    int diff = a.twist - b.twist;
    if (1 <= diff && diff <= w) return Hom::Zero;
    return Hom::Unknown;
  }
  if (a.label == Label::B && b.label == Label::A) {
    int diff = a.twist - b.twist;
    if (0 <= diff && diff <= w - 1) return Hom::Zero;
    return Hom::Unknown;
  }
  // (A, A)
  if (a.twist == b.twist) return Hom::Nonzero;
  return Hom::Unknown;
}

// Conservative combination over filtration factor pairs, mirroring the long
// exact sequences the windows come from. Shifts are ignored: the block
// categories are shift-closed.
inline Hom hom_class(const FormalObject& x, const FormalObject& y, const Params& p) {
  long zero = 0, nonzero = 0, unknown = 0;
  for (const Atom& a : x.factors)
    for (const Atom& b : y.factors) {
      switch (base_hom(a, b, p)) {
        case Hom::Zero: ++zero; break;
        case Hom::Nonzero: ++nonzero; break;
        case Hom::Unknown: ++unknown; break;
      }
    }
  if (nonzero == 0 && unknown == 0) return Hom::Zero;  // includes the vacuous case
  if (nonzero == 1 && unknown == 0) return Hom::Nonzero;
  return Hom::Unknown;
}

namespace detail {

struct BlockGen {
  FormalObject obj;   // generator object on its source space
  int weight = 0;     // functor index (push/pull weight)
  BlockKind kind;
};

inline BlockGen block_generator(const Params&, const Block& b) {
  BlockGen g;
  g.kind = b.kind;
  g.weight = b.weight;
  switch (b.kind) {
    case BlockKind::BX: g.obj.factors.push_back(y_atom(b.twist)); break;
    case BlockKind::JZ: g.obj.factors.push_back(z_atom(Label::B, b.twist)); break;
    case BlockKind::AZ: g.obj.factors.push_back(z_atom(Label::A, b.twist)); break;
    case BlockKind::AXE: g.obj.factors.push_back(xeq_primitive(b.twist)); break;
    default: fail(errc::not_composite, "no generator object for " + to_string(b));
  }
  return g;
}

inline Hom atomic_block_hom(const Block& pb, const Block& qb, const Params& p);

// Composite verdicts force only the vanishing direction; anything short of
// all-Zero stays Unknown.
inline Hom combine_composite(Hom acc, Hom v) {
  if (acc == Hom::Zero && v == Hom::Zero) return Hom::Zero;
  return Hom::Unknown;
}

inline Hom composite_block_hom(const Block& pb, const Block& qb, const Params& p) {
  std::vector<Block> ps = is_composite(pb) ? expansion(p, pb) : std::vector<Block>{pb};
  std::vector<Block> qs = is_composite(qb) ? expansion(p, qb) : std::vector<Block>{qb};
  Hom acc = Hom::Zero;
  for (const Block& x : ps)
    for (const Block& y : qs) acc = combine_composite(acc, atomic_block_hom(x, y, p));
  return acc;
}

inline Hom atomic_block_hom(const Block& pb, const Block& qb, const Params& p) {
  const bool p_axe = pb.kind == BlockKind::AXE;
  const bool q_axe = qb.kind == BlockKind::AXE;
  if (p_axe || q_axe) {
    // The residual component upstairs is governed by its own window family;
    // it does not reduce through push/pull words.
    if (p_axe && q_axe) return pb.twist == qb.twist ? Hom::Nonzero : Hom::Unknown;
    if (p_axe && qb.kind == BlockKind::BX) {
      int diff = pb.twist - qb.twist;
      return (1 <= diff && diff <= p.M) ? Hom::Zero : Hom::Unknown;
    }
    if (q_axe && pb.kind == BlockKind::BX) {
      int diff = pb.twist - qb.twist;
      return (0 <= diff && diff <= p.M - 1) ? Hom::Zero : Hom::Unknown;
    }
    return Hom::Unknown;
  }

  BlockGen P = block_generator(p, pb);
  BlockGen Q = block_generator(p, qb);
  const bool p_push = pb.kind == BlockKind::JZ || pb.kind == BlockKind::AZ;
  const bool q_push = qb.kind == BlockKind::JZ || qb.kind == BlockKind::AZ;

  if (q_push) {
    // Hom(P, j_{l*}G) = Hom(j_l^* P, G): transpose the target's pushforward
    // onto the source and reduce there.
    FunctorWord w;
    if (p_push) w.gens.push_back({Gen::PushJ, P.weight});
    else w.gens.push_back({Gen::PullF, P.weight});
    w.gens.push_back({Gen::PullJ, Q.weight});
    FormalObject reduced = apply(w, P.obj, p);
    return hom_class(reduced, Q.obj, p);
  }
  // target is a pullback: transpose the source word instead
  FunctorWord w;
  w.gens.push_back({Gen::PullF, Q.weight});
  if (p_push) w.gens.push_back({Gen::ShriekJ, P.weight});
  else w.gens.push_back({Gen::PushF, P.weight});
  FormalObject reduced = apply(w, Q.obj, p);
  return hom_class(P.obj, reduced, p);
}

}  // namespace detail

// Derivation-based vanishing verdict for Hom(pblock -> qblock): translate the
// blocks to generator objects, move functors across adjunctions, and evaluate
// the resulting base Homs. Composite blocks evaluate over their expansions.
inline Hom block_hom(const Block& pblock, const Block& qblock, const Params& p) {
  if (is_phi(pblock) || is_phi(qblock))
    fail(errc::phi_block_unsupported, "PHI verdicts come only from trace provenance");
  if (is_composite(pblock) || is_composite(qblock))
    return detail::composite_block_hom(pblock, qblock, p);
  return detail::atomic_block_hom(pblock, qblock, p);
}

}  // namespace sodcalc
