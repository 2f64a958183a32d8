#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sodcalc/adjunction.hpp"
#include "sodcalc/block.hpp"
#include "sodcalc/params.hpp"

namespace sodcalc {

enum class Vanish { Guaranteed, NotGuaranteed };

namespace detail {

struct WindowAnswer {
  bool guaranteed = false;
  std::string cite;     // set when guaranteed
  std::string failure;  // branch that was consulted and did not fire
};

inline std::string rng(const std::string& name, int lo, int v, int hi) {
  return name + ": " + std::to_string(lo) + " <= " + std::to_string(v) +
         " <= " + std::to_string(hi);
}

inline WindowAnswer yes(std::string cite) { return {true, std::move(cite), {}}; }
inline WindowAnswer no(std::string failure) { return {false, {}, std::move(failure)}; }

inline void require_bz(const Params& p, const Block& a, const Block& b) {
  if (!p.bz_defined() && (a.kind == BlockKind::JZ || b.kind == BlockKind::JZ))
    fail(errc::bz_undefined, "m = n*d leaves no B-type component on Z");
}

// Closed-form window for Hom(p -> q) = 0 between atomic blocks. Weight
// comparisons are mod n; twist windows are statements about integers.
inline WindowAnswer atomic_window(const Block& pb, const Block& qb, const Params& p) {
  require_bz(p, pb, qb);
  const int w = p.M - p.d;  // B-type window width on Z
  auto in = [](int lo, int v, int hi) { return lo <= v && v <= hi; };

  switch (pb.kind) {
    case BlockKind::BX: {
      int s = pb.twist, l = pb.weight;
      if (qb.kind == BlockKind::BX) {
        int r = qb.twist, k = qb.weight;
        int a = p.norm_w(l - k);
        int v = s - r + a * p.d;
        if (in(1, v, p.m - 1))
          return yes(a == 0 ? rng("Lefschetz window on Y", 1, v, p.m - 1)
                            : rng("Y-window, weight step a=" + std::to_string(a), 1, v, p.m - 1));
        return no(rng("Y-window misses", 1, v, p.m - 1));
      }
      if (qb.kind == BlockKind::JZ) {
        int r = qb.twist, k = qb.weight;
        if (k != l) return yes("sojf: k != l");
        int v = s - r;
        if (in(1, v, w - 1)) return yes(rng("Z-window, k=l branch", 1, v, w - 1));
        return no("k = l branch of (sojf): " + rng("Z-window misses", 1, v, w - 1));
      }
      if (qb.kind == BlockKind::AZ) {
        int a2 = qb.twist, k = qb.weight;
        if (k != l) return yes("sojf: k != l");
        int v = s - a2;
        if (in(0, v, w - 1)) return yes(rng("A-window on Z, B-side", 0, v, w - 1));
        return no("k = l branch of (sojf): " + rng("A-window on Z misses", 0, v, w - 1));
      }
      if (qb.kind == BlockKind::AXE) {
        int v = s - qb.twist;
        if (in(0, v, p.M - 1)) return yes(rng("equivariant A-window on X, B-side", 0, v, p.M - 1));
        return no(rng("equivariant A-window misses", 0, v, p.M - 1));
      }
      break;
    }
    case BlockKind::JZ: {
      int r = pb.twist, k = pb.weight;
      if (qb.kind == BlockKind::BX) {
        int s = qb.twist, l = qb.weight;
        if (k != p.norm_w(l - 1)) return yes("sofj: k != l-1");
        int v = r - s - p.d;
        if (in(1, v, w - 1)) return yes(rng("Z-window, k=l-1 branch", 1, v, w - 1));
        return no("k = l-1 branch of (sofj): " + rng("Z-window misses", 1, v, w - 1));
      }
      if (qb.kind == BlockKind::JZ || qb.kind == BlockKind::AZ) {
        int s = qb.twist, l = qb.weight;
        bool qa = qb.kind == BlockKind::AZ;
        if (l != k && l != p.norm_w(k + 1)) return yes("sojj: k != l, l+1");
        int v = (l == k) ? r - s : r - p.d - s;
        int lo = qa ? 0 : 1;
        std::string branch = (l == k) ? "k=l" : "k=l+1";
        if (in(lo, v, w - 1))
          return yes(rng((qa ? "A-window on Z, B-side, " : "Z-window, ") + branch + " branch",
                         lo, v, w - 1));
        return no(branch + " branch of (sojj): window misses " + std::to_string(v));
      }
      break;
    }
    case BlockKind::AZ: {
      int a1 = pb.twist, k = pb.weight;
      if (qb.kind == BlockKind::BX) {
        int s = qb.twist, l = qb.weight;
        if (k != p.norm_w(l - 1)) return yes("sofj: k != l-1");
        int v = a1 - s - p.d;
        if (in(1, v, w)) return yes(rng("A-window on Z, A-side, k=l-1 branch", 1, v, w));
        return no("k = l-1 branch of (sofj): " + rng("A-window on Z misses", 1, v, w));
      }
      if (qb.kind == BlockKind::JZ) {
        int s = qb.twist, l = qb.weight;
        if (l != k && l != p.norm_w(k + 1)) return yes("sojj: k != l, l+1");
        int v = (l == k) ? a1 - s : a1 - p.d - s;
        if (in(1, v, w)) return yes(rng("A-window on Z, A-side", 1, v, w));
        return no("window misses " + std::to_string(v));
      }
      if (qb.kind == BlockKind::AZ) {
        int l = qb.weight;
        if (l != k && l != p.norm_w(k + 1)) return yes("sojj: k != l, l+1");
        return no("A-to-A vanishing is not derivable");
      }
      break;
    }
    case BlockKind::AXE: {
      if (qb.kind == BlockKind::BX) {
        int v = pb.twist - qb.twist;
        if (in(1, v, p.M)) return yes(rng("equivariant A-window on X, A-side", 1, v, p.M));
        return no(rng("equivariant A-window misses", 1, v, p.M));
      }
      return no("no window between the residual component and divisor pushforwards");
    }
    default: break;
  }
  return no("no applicable window");
}

inline WindowAnswer window_answer(const Block& pb, const Block& qb, const Params& p) {
  if (is_phi(pb) || is_phi(qb))
    fail(errc::phi_block_unsupported, "PHI blocks are provenance-only");
  if (!is_composite(pb) && !is_composite(qb)) return atomic_window(pb, qb, p);

  // Composite answers are conservative: Guaranteed only when every expansion
  // pair is Guaranteed. The pure weight conditions get the short citations.
  if (pb.kind == BlockKind::DZfull && qb.kind == BlockKind::DZfull) {
    int k = pb.weight, l = qb.weight;
    if (l != k && l != p.norm_w(k + 1)) return yes("sojj: k != l, l+1");
    return no("k = " + std::string(l == k ? "l" : "l-1") + " branch of (sojj)");
  }
  if (pb.kind == BlockKind::FYfull && qb.kind == BlockKind::DZfull) {
    if (qb.weight != pb.weight) return yes("sojf: k != l");
    return no("k = l branch of (sojf)");
  }
  if (pb.kind == BlockKind::DZfull && qb.kind == BlockKind::FYfull) {
    if (pb.weight != p.norm_w(qb.weight - 1)) return yes("sofj: k != l-1");
    return no("k = l-1 branch of (sofj)");
  }
  // weight-only branches for atomic-vs-composite pairs
  bool p_div = pb.kind == BlockKind::JZ || pb.kind == BlockKind::AZ;
  bool q_div = qb.kind == BlockKind::JZ || qb.kind == BlockKind::AZ;
  if (qb.kind == BlockKind::DZfull) {
    if (pb.kind == BlockKind::BX && pb.weight != qb.weight) return yes("sojf: k != l");
    if (p_div && qb.weight != pb.weight && qb.weight != p.norm_w(pb.weight + 1))
      return yes("sojj: k != l, l+1");
  }
  if (pb.kind == BlockKind::DZfull) {
    if (qb.kind == BlockKind::BX && pb.weight != p.norm_w(qb.weight - 1))
      return yes("sofj: k != l-1");
    if (q_div && qb.weight != pb.weight && qb.weight != p.norm_w(pb.weight + 1))
      return yes("sojj: k != l, l+1");
  }
  if (qb.kind == BlockKind::FYfull && p_div && pb.weight != p.norm_w(qb.weight - 1))
    return yes("sofj: k != l-1");
  if (pb.kind == BlockKind::FYfull && q_div && qb.weight != pb.weight)
    return yes("sojf: k != l");
  std::vector<Block> ps = is_composite(pb) ? expansion(p, pb) : std::vector<Block>{pb};
  std::vector<Block> qs = is_composite(qb) ? expansion(p, qb) : std::vector<Block>{qb};
  for (const Block& x : ps)
    for (const Block& y : qs) {
      WindowAnswer a = atomic_window(x, y, p);
      if (!a.guaranteed)
        return no("pair (" + to_string(x) + ", " + to_string(y) + "): " + a.failure);
    }
  return yes("all expansion pairs in window");
}

}  // namespace detail

// Fast-path vanishing check for Hom(pblock -> qblock).
inline Vanish vanishes(const Block& pblock, const Block& qblock, const Params& p) {
  return detail::window_answer(pblock, qblock, p).guaranteed ? Vanish::Guaranteed
                                                             : Vanish::NotGuaranteed;
}

// Names the firing rule; only meaningful after a Guaranteed verdict.
inline std::string explain(const Block& pblock, const Block& qblock, const Params& p) {
  detail::WindowAnswer a = detail::window_answer(pblock, qblock, p);
  if (!a.guaranteed)
    fail(errc::not_guaranteed_no_explanation,
         to_string(pblock) + " -> " + to_string(qblock) + ": " + a.failure);
  return a.cite;
}

// Reason string for a NotGuaranteed verdict (used by the CLI).
inline std::string explain_failure(const Block& pblock, const Block& qblock, const Params& p) {
  detail::WindowAnswer a = detail::window_answer(pblock, qblock, p);
  return a.guaranteed ? std::string("(guaranteed)") : a.failure;
}

struct CrosscheckMismatch {
  Block p, q;
  Vanish window;
  Hom adjunction;
};

struct CrosscheckReport {
  std::vector<CrosscheckMismatch> mismatches;
  long pairs_checked = 0;
  long pairs_skipped = 0;
  bool clean() const { return mismatches.empty(); }
};

// Exhaustive agreement check of the closed-form windows against the
// adjunction-engine reduction over all non-PHI block pairs with twists in
// [t_lo, t_hi]. Queries the adjunction engine rejects (undefined B-component
// on Z) are skipped and counted.
inline CrosscheckReport crosscheck(const Params& p, int t_lo, int t_hi) {
  std::vector<Block> blocks;
  for (int t = t_lo; t <= t_hi; ++t) {
    for (int k = 0; k < p.n; ++k) {
      blocks.push_back(bx(p, t, k));
      blocks.push_back(jz(p, t, k));
      blocks.push_back(az(p, t, k));
    }
    blocks.push_back(axe(t));
  }
  for (int k = 0; k < p.n; ++k) {
    blocks.push_back(fy_full(p, k));
    blocks.push_back(dz_full(p, k));
  }
  CrosscheckReport rep;
  for (const Block& x : blocks)
    for (const Block& y : blocks) {
      Hom h;
      try {
        h = block_hom(x, y, p);
      } catch (const error& e) {
        if (e.code() == errc::bz_undefined) {
          ++rep.pairs_skipped;
          continue;
        }
        throw;
      }
      Vanish v;
      try {
        v = vanishes(x, y, p);
      } catch (const error& e) {
        if (e.code() == errc::bz_undefined) {
          ++rep.pairs_skipped;
          continue;
        }
        throw;
      }
      ++rep.pairs_checked;
      if ((v == Vanish::Guaranteed) != (h == Hom::Zero))
        rep.mismatches.push_back({x, y, v, h});
    }
  return rep;
}

}  // namespace sodcalc
