#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "sodcalc/block.hpp"
#include "sodcalc/mutation.hpp"
#include "sodcalc/params.hpp"
#include "sodcalc/sod.hpp"
#include "sodcalc/trace_io.hpp"
#include "sodcalc/window.hpp"

namespace sodcalc {

// Certified-zero oracle backed by the closed-form windows, with citations.
inline CertOracle window_certifier(const Params& p) {
  return [p](const Block& a, const Block& b) -> std::optional<std::string> {
    try {
      if (vanishes(a, b, p) == Vanish::Guaranteed) return explain(a, b, p);
    } catch (const error&) {
    }
    return std::nullopt;
  };
}

inline ZeroFn window_zero_fn(const Params& p) {
  CertOracle cert = window_certifier(p);
  return [cert](const Block& a, const Block& b) { return cert(a, b).has_value(); };
}

namespace detail {

struct Driver {
  Sod sod;
  Trace trace;
  CertOracle cert;

  explicit Driver(Sod start)
      : sod(std::move(start)), cert(window_certifier(sod.params)) {
    trace.params = sod.params;
    trace.schedule = kSchedule;
  }

  int next_id() const { return static_cast<int>(trace.steps.size()); }

  void push(Rewrite r) {
    trace.steps.push_back(std::move(r.step));
    sod = std::move(r.after);
  }

  int find_unique(const Block& b) const {
    int at = -1;
    for (std::size_t i = 0; i < sod.blocks.size(); ++i)
      if (label_equal(sod.blocks[i], b)) {
        if (at >= 0) fail(errc::ambiguous_block, to_string(b) + " occurs more than once");
        at = static_cast<int>(i);
      }
    if (at < 0) fail(errc::rule_not_applicable, to_string(b) + " not present");
    return at;
  }

  // Walks JZ(t,k) leftward with identity steps until the transform fires.
  void walk_and_transform(const Block& moving) {
    for (;;) {
      int i = find_unique(moving);
      Rewrite r = left_mutate_step(sod, i, cert, next_id());
      bool transformed = r.step.rule == Rule::LmutJzTransform;
      push(std::move(r));
      if (transformed) return;
    }
  }

  // Emits licensed swaps until [lo, hi) is in grid order.
  void sort_region(int lo, int hi) {
    for (;;) {
      bool swapped = false;
      bool sorted = true;
      for (int i = lo; i + 1 < hi; ++i) {
        if (grid_key(sod.blocks[i]) > grid_key(sod.blocks[i + 1])) {
          sorted = false;
          push(swap_orth(sod, i, cert, next_id()));
          swapped = true;
        }
      }
      if (sorted) return;
      if (!swapped) fail(errc::certification_failed, "unsortable region");
    }
  }
};

}  // namespace detail

// --- the C_k induction ---------------------------------------------------------

struct CkReport {
  int k = 0;
  bool trivial = false;
  int transforms = 0;
  Sod start;
  Sod final;
  Trace trace;
};

// Verifies that the accumulated B-part equals the grid of the first k+1
// weight columns: replays the inductive step from its interleaved form to
// grid order with left mutations, then checks equivalence. The boundary
// m = n*d and the base k = 0 are trivial.
inline CkReport verify_ck(const Params& p, int k) {
  if (k < 0 || k > p.n - 1) fail(errc::induction_step_failed, "k out of range");
  CkReport rep;
  rep.k = k;
  if (k == 0) {
    rep.trivial = true;
    rep.start = make_sod(p, grid_blocks(p, 0, p.M - 1, 0, 0));
    rep.final = rep.start;
    rep.trace.params = p;
    rep.trace.schedule = kSchedule;
    return rep;
  }
  std::vector<Block> start_blocks = grid_blocks(p, 0, p.M - 1, 0, k - 1);
  for (int t = p.d; t <= p.M - 1; ++t) start_blocks.push_back(jz(p, t, k - 1));
  for (int t = p.M - p.d; t <= p.M - 1; ++t) start_blocks.push_back(bx(p, t, k));
  detail::Driver drv(make_sod(p, std::move(start_blocks)));
  rep.start = drv.sod;
  rep.trace.params = p;
  rep.trace.schedule = kSchedule;
  if (!p.bz_defined()) {
    // no divisor B-components: the interleaved form is already the grid as a
    // multiset, and the regrouping swaps are completely orthogonal
    rep.trivial = true;
    Sod target = make_sod(p, grid_blocks(p, 0, p.M - 1, 0, k));
    EquivResult eq = sod_equiv(drv.sod, target, window_zero_fn(p));
    if (!eq.equivalent) fail(errc::induction_step_failed, "boundary regrouping failed");
    rep.final = target;
    return rep;
  }
  try {
    for (int t = p.d; t <= p.M - 1; ++t) {
      drv.walk_and_transform(jz(p, t, k - 1));
      ++rep.transforms;
    }
    drv.sort_region(0, static_cast<int>(drv.sod.blocks.size()));
  } catch (const error& e) {
    fail(errc::induction_step_failed, e.what());
  }
  Sod target = make_sod(p, grid_blocks(p, 0, p.M - 1, 0, k));
  EquivResult eq = sod_equiv(drv.sod, target, window_zero_fn(p));
  if (!eq.equivalent) fail(errc::induction_step_failed, "grid order not reached");
  rep.final = drv.sod;
  rep.trace = drv.trace;
  return rep;
}

// --- the main replay -------------------------------------------------------------

struct ReplayResult {
  Sod final;
  Trace trace;
  std::vector<CkReport> ck_reports;
};

namespace detail {

inline ReplayResult replay_main_impl(Driver& drv, const Params& p) {
  ReplayResult res;
  // expand the pullback component
  drv.push(expand(drv.sod, 0, drv.next_id()));

  // right mutations: groups of d blocks, rightmost group first, rightmost
  // block within a group first
  for (int a = 1; a <= p.n - 1; ++a)
    for (int hop = 0; hop <= p.n - 1 - a; ++hop)
      for (int j = 0; j < p.d; ++j) {
        int dz_at = drv.find_unique(dz_full(p, hop));
        drv.push(right_mutate(drv.sod, dz_at - 1, drv.cert, drv.next_id()));
      }

  // expand every divisor component, left to right
  for (;;) {
    int at = -1;
    for (std::size_t i = 0; i < drv.sod.blocks.size(); ++i)
      if (drv.sod.blocks[i].kind == BlockKind::DZfull) {
        at = static_cast<int>(i);
        break;
      }
    if (at < 0) break;
    drv.push(expand(drv.sod, at, drv.next_id()));
  }

  // phi formation per weight, with the column transforms in between
  for (int k = 0; k <= p.n - 2; ++k) {
    res.ck_reports.push_back(verify_ck(p, k));
    int at = drv.find_unique(az(p, p.d, k));
    drv.push(form_phi(drv.sod, at, drv.cert, drv.next_id()));
    for (int t = p.d; t <= p.M - 1; ++t) drv.walk_and_transform(jz(p, t, k));
    int region_lo = k + 1;
    int region_hi = (k == p.n - 2) ? static_cast<int>(drv.sod.blocks.size())
                                   : drv.find_unique(az(p, p.d, k + 1));
    drv.sort_region(region_lo, region_hi);
  }
  res.ck_reports.push_back(verify_ck(p, p.n - 1));

  // word simplification for every PHI block
  for (int k = 0; k <= p.n - 2; ++k) drv.push(simplify_phi_at(drv.sod, k, drv.cert, drv.next_id()));

  // final shape: the PHI prefix followed by the full grid
  std::vector<Block> target_blocks;
  for (int k = 0; k <= p.n - 2; ++k)
    target_blocks.push_back(phi_block(p, k, canonical_phi_word(p, k), -1));
  std::vector<Block> grid = full_grid(p);
  target_blocks.insert(target_blocks.end(), grid.begin(), grid.end());
  Sod target = make_sod(p, std::move(target_blocks));
  EquivResult eq = sod_equiv(drv.sod, target, window_zero_fn(p));
  if (!eq.equivalent) fail(errc::certification_failed, "final shape mismatch");

  // counting identity: n*M b-type atoms, n-1 residual components
  AtomCounts counts = count_atoms(drv.sod);
  long expect_b = static_cast<long>(p.n) * p.M;
  if (counts.b_type != expect_b || expect_b != static_cast<long>(p.n) * p.m - static_cast<long>(p.n) * (p.n - 1) * p.d ||
      counts.a_type != p.n - 1)
    fail(errc::certification_failed, "counting identity violated");

  res.final = drv.sod;
  res.trace = drv.trace;
  return res;
}

}  // namespace detail

// Replays the whole proof for the given context: expansion, the right
// mutations through the divisor categories, expansion of those categories,
// the phi formations (each preceded by the standalone induction check and
// followed by the inline column transforms), and the word simplifications.
// Any step failure aborts with the failing step identified.
inline ReplayResult replay_main(const Params& p) {
  detail::Driver drv(initial_cover_sod(p));
  try {
    return detail::replay_main_impl(drv, p);
  } catch (const error& e) {
    fail(e.code(), "at step " + std::to_string(drv.next_id()) + ": " + e.what());
  }
}

// --- rotated cover decompositions ------------------------------------------------

struct CoverSod {
  Sod sod;
  std::vector<SideCondition> certificates;
};

// The n rotations of the cover decomposition, each fully pairwise certified.
inline std::vector<CoverSod> enumerate_cover_sods(const Params& p) {
  CertOracle cert = window_certifier(p);
  std::vector<CoverSod> out;
  for (int k = 0; k < p.n; ++k) {
    std::vector<Block> blocks;
    for (int j = k + 1; j <= p.n - 1; ++j) blocks.push_back(dz_full(p, j));
    blocks.push_back(fy_full(p, 0));
    for (int j = 0; j <= k - 1; ++j) blocks.push_back(dz_full(p, j));
    CoverSod cs{make_sod(p, std::move(blocks)), {}};
    for (std::size_t i = 0; i < cs.sod.blocks.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) {
        auto cite = cert(cs.sod.blocks[i], cs.sod.blocks[j]);
        if (!cite)
          fail(errc::certification_failed,
               "rotation k=" + std::to_string(k) + ": Hom(" + to_string(cs.sod.blocks[i]) +
                   " -> " + to_string(cs.sod.blocks[j]) + ") not certified");
        cs.certificates.push_back({cs.sod.blocks[i], cs.sod.blocks[j], *cite});
      }
    out.push_back(std::move(cs));
  }
  return out;
}

// --- phi relabeling ---------------------------------------------------------------

struct RelabelEntry {
  int k = 0;
  bool ok = false;
  std::string lhs, rhs;
};

struct RelabelReport {
  std::vector<RelabelEntry> entries;
  bool ok = true;
};

// Checks word(PHI(k)) = Chi(k) * word(PHI(0)) after normalization.
inline RelabelReport verify_phi_relabel(const Params& p, const std::vector<Block>& phis) {
  RelabelReport rep;
  const Block* phi0 = nullptr;
  for (const Block& b : phis)
    if (is_phi(b) && b.weight == 0) phi0 = &b;
  if (!phi0) fail(errc::relabel_mismatch, "no PHI(0) block");
  for (const Block& b : phis) {
    if (!is_phi(b)) continue;
    PhiWord relabeled;
    relabeled.factors.push_back(chi_factor(b.weight));
    relabeled.factors.insert(relabeled.factors.end(), phi0->word.factors.begin(),
                             phi0->word.factors.end());
    RelabelEntry e;
    e.k = b.weight;
    e.ok = word_equal(p, b.word, relabeled);
    e.lhs = to_string(normalize_word(p, b.word));
    e.rhs = to_string(normalize_word(p, relabeled));
    rep.ok = rep.ok && e.ok;
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

inline RelabelReport verify_phi_relabel(const Params& p) {
  ReplayResult r = replay_main(p);
  std::vector<Block> phis(r.final.blocks.begin(), r.final.blocks.begin() + (p.n - 1));
  return verify_phi_relabel(p, phis);
}

// --- weight splitting ---------------------------------------------------------------

struct WeightSplitReport {
  std::vector<std::pair<Block, Block>> failures;
  long pairs = 0;
  bool ok() const { return failures.empty(); }
};

// Complete orthogonality of the weight columns: two-sided vanishing between
// equal twists in [0, M-1] and between all twist pairs within [0, d-1].
inline WeightSplitReport verify_weight_splitting(const Params& p) {
  WeightSplitReport rep;
  auto check = [&](const Block& a, const Block& b) {
    ++rep.pairs;
    if (vanishes(a, b, p) != Vanish::Guaranteed) rep.failures.push_back({a, b});
  };
  for (int t = 0; t <= p.M - 1; ++t)
    for (int k = 0; k < p.n; ++k)
      for (int l = 0; l < p.n; ++l) {
        if (k == l) continue;
        check(bx(p, t, k), bx(p, t, l));
      }
  for (int r = 0; r <= p.d - 1; ++r)
    for (int s = 0; s <= p.d - 1; ++s)
      for (int k = 0; k < p.n; ++k)
        for (int l = 0; l < p.n; ++l) {
          if (k == l) continue;
          check(bx(p, r, k), bx(p, s, l));
        }
  return rep;
}

// --- presets ---------------------------------------------------------------------

struct Preset {
  std::string name;
  Params params;
  int phi_count = 0;
  int grid_rows = 0;  // weights
  int grid_cols = 0;  // twists
};

inline Preset preset_quartic_double_solid() {
  Preset ps;
  ps.name = "quartic_double_solid";
  ps.params = Params::make(2, 2, 4);
  ps.phi_count = 1;
  ps.grid_rows = 2;
  ps.grid_cols = 2;
  return ps;
}

inline Preset preset_gm(int N) {
  if (N < 3 || N > 6) fail(errc::invalid_preset, "gm requires 3 <= N <= 6");
  Preset ps;
  ps.name = "gm(" + std::to_string(N) + ")";
  ps.params = Params::make(2, 1, N - 1);
  ps.phi_count = 1;
  ps.grid_rows = 2;
  ps.grid_cols = N - 2;
  return ps;
}

inline Preset preset_cyclic_cubic(int N) {
  if (N < 3) fail(errc::invalid_preset, "cyclic_cubic requires N >= 3");
  Preset ps;
  ps.name = "cyclic_cubic(" + std::to_string(N) + ")";
  ps.params = Params::make(3, 1, N + 1);
  ps.phi_count = 2;
  ps.grid_rows = 3;
  ps.grid_cols = N - 1;
  return ps;
}

// Accepts "quartic", "gm:N" and "cubic:N".
inline Preset preset(const std::string& name) {
  if (name == "quartic" || name == "quartic_double_solid") return preset_quartic_double_solid();
  auto colon = name.find(':');
  if (colon != std::string::npos) {
    std::string head = name.substr(0, colon);
    int N = 0;
    try {
      N = std::stoi(name.substr(colon + 1));
    } catch (const std::exception&) {
      fail(errc::invalid_preset, "bad preset argument in '" + name + "'");
    }
    if (head == "gm") return preset_gm(N);
    if (head == "cubic" || head == "cyclic_cubic") return preset_cyclic_cubic(N);
  }
  fail(errc::invalid_preset, "unknown preset '" + name + "'");
}

// The admissible sweep grid: 2 <= n <= 5, 1 <= d <= 3, nd <= m <= 12.
inline std::vector<Params> sweep_cells(int n_lo = 2, int n_hi = 5, int d_lo = 1, int d_hi = 3,
                                       int m_lo = 1, int m_hi = 12) {
  std::vector<Params> cells;
  for (int n = n_lo; n <= n_hi; ++n)
    for (int d = d_lo; d <= d_hi; ++d)
      for (int m = std::max(m_lo, n * d); m <= m_hi; ++m) cells.push_back(Params::make(n, d, m));
  return cells;
}

}  // namespace sodcalc
