#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sodcalc/block.hpp"
#include "sodcalc/params.hpp"
#include "sodcalc/sod.hpp"

namespace sodcalc {

enum class Rule {
  ExpandFY,
  ExpandDZ,
  SwapOrth,
  RmutThroughDz,
  LmutJzTransform,
  LmutIdentity,
  PhiForm,
  PhiSimplify,
};

inline const char* rule_name(Rule r) {
  switch (r) {
    case Rule::ExpandFY: return "EXPAND_FY";
    case Rule::ExpandDZ: return "EXPAND_DZ";
    case Rule::SwapOrth: return "SWAP_ORTH";
    case Rule::RmutThroughDz: return "RMUT_THROUGH_DZ";
    case Rule::LmutJzTransform: return "LMUT_JZ_TRANSFORM";
    case Rule::LmutIdentity: return "LMUT_IDENTITY";
    case Rule::PhiForm: return "PHI_FORM";
    case Rule::PhiSimplify: return "PHI_SIMPLIFY";
  }
  return "?";
}

inline std::optional<Rule> rule_from_name(const std::string& s) {
  for (Rule r : {Rule::ExpandFY, Rule::ExpandDZ, Rule::SwapOrth, Rule::RmutThroughDz,
                 Rule::LmutJzTransform, Rule::LmutIdentity, Rule::PhiForm, Rule::PhiSimplify})
    if (s == rule_name(r)) return r;
  return std::nullopt;
}

// A side condition records an oracle-certified vanishing Hom(p -> q) = 0
// together with the rule citation that fired.
struct SideCondition {
  Block p, q;
  std::string cite;
};

struct TraceStep {
  int step = 0;
  Rule rule = Rule::SwapOrth;
  int lo = 0, hi = 0;          // affected index span [lo, hi) before rewrite
  std::vector<Block> before;   // blocks[lo..hi) before
  std::vector<Block> after;    // replacement slice
  std::vector<SideCondition> conds;
};

struct Trace {
  Params params;
  std::string schedule;
  std::vector<TraceStep> steps;
};

inline constexpr const char* kSchedule = "a=1..n-1 rightmost-first";

// Certification oracle: returns the citation when Hom(p -> q) = 0 is
// guaranteed, nullopt otherwise. The generation side backs this with the
// window rules; the trace checker backs it with the adjunction engine.
using CertOracle = std::function<std::optional<std::string>(const Block&, const Block&)>;

struct Rewrite {
  Sod after;
  TraceStep step;
};

namespace detail {

inline void check_index(const Sod& s, int i) {
  if (i < 0 || static_cast<std::size_t>(i) >= s.blocks.size())
    fail(errc::rule_not_applicable, "index " + std::to_string(i) + " out of range");
}

inline SideCondition certify(const CertOracle& cert, const Block& p, const Block& q, errc on_fail,
                             const char* what) {
  auto cite = cert(p, q);
  if (!cite)
    fail(on_fail, std::string(what) + ": Hom(" + to_string(p) + " -> " + to_string(q) +
                      ") not certified zero");
  return SideCondition{p, q, *cite};
}

inline Sod splice(const Sod& s, int lo, int hi, const std::vector<Block>& repl) {
  Sod out;
  out.params = s.params;
  out.blocks.assign(s.blocks.begin(), s.blocks.begin() + lo);
  out.blocks.insert(out.blocks.end(), repl.begin(), repl.end());
  out.blocks.insert(out.blocks.end(), s.blocks.begin() + hi, s.blocks.end());
  return out;
}

}  // namespace detail

// Replaces a composite block by its expansion in place.
inline Rewrite expand(const Sod& s, int i, int step_id = 0) {
  detail::check_index(s, i);
  const Block& b = s.blocks[i];
  if (!is_composite(b)) fail(errc::not_composite, to_string(b) + " is not a composite block");
  TraceStep st;
  st.step = step_id;
  st.rule = b.kind == BlockKind::FYfull ? Rule::ExpandFY : Rule::ExpandDZ;
  st.lo = i;
  st.hi = i + 1;
  st.before = {b};
  st.after = expansion(s.params, b);
  return {detail::splice(s, i, i + 1, st.after), st};
}

// Adjacent transposition of a completely orthogonal pair.
inline Rewrite swap_orth(const Sod& s, int i, const CertOracle& cert, int step_id = 0) {
  detail::check_index(s, i);
  detail::check_index(s, i + 1);
  const Block& x = s.blocks[i];
  const Block& y = s.blocks[i + 1];
  TraceStep st;
  st.step = step_id;
  st.rule = Rule::SwapOrth;
  st.lo = i;
  st.hi = i + 2;
  st.before = {x, y};
  st.after = {y, x};
  st.conds.push_back(detail::certify(cert, x, y, errc::rule_not_applicable, "swap"));
  st.conds.push_back(detail::certify(cert, y, x, errc::rule_not_applicable, "swap"));
  return {detail::splice(s, i, i + 2, st.after), st};
}

// Right mutation of a B-type block through the divisor category at matching
// weight: [BX(t,k), DZ(k)] -> [DZ(k), BX(t-d,k+1)]. The mutation triangle
// needs Hom(BX(t-d,k+1) -> DZ(k)) = 0, recorded as the side condition.
inline Rewrite right_mutate(const Sod& s, int i, const CertOracle& cert, int step_id = 0) {
  detail::check_index(s, i);
  detail::check_index(s, i + 1);
  const Params& p = s.params;
  const Block& b = s.blocks[i];
  const Block& dz = s.blocks[i + 1];
  if (b.kind != BlockKind::BX || dz.kind != BlockKind::DZfull)
    fail(errc::rule_not_applicable,
         "expected [BX, DZ] at " + std::to_string(i) + ", got [" + to_string(b) + ", " +
             to_string(dz) + "]");
  if (b.weight != dz.weight)
    fail(errc::rule_not_applicable, "weight of " + to_string(b) +
                                        " does not match the index of " + to_string(dz));
  Block arriving = bx(p, b.twist - p.d, b.weight + 1);
  TraceStep st;
  st.step = step_id;
  st.rule = Rule::RmutThroughDz;
  st.lo = i;
  st.hi = i + 2;
  st.before = {b, dz};
  st.after = {dz, arriving};
  st.conds.push_back(
      detail::certify(cert, arriving, dz, errc::rule_not_applicable, "mutation triangle"));
  return {detail::splice(s, i, i + 2, st.after), st};
}

// One left-mutation step of a divisor block through the B-type block on its
// left. Identity case: swap. Transform case (same weight and twist):
// [BX(t,k), JZ(t,k)] -> [BX(t-d,k+1), BX(t,k)].
inline Rewrite left_mutate_step(const Sod& s, int i, const CertOracle& cert, int step_id = 0) {
  detail::check_index(s, i);
  detail::check_index(s, i - 1);
  const Params& p = s.params;
  const Block& moving = s.blocks[i];
  const Block& left = s.blocks[i - 1];
  if ((moving.kind != BlockKind::JZ && moving.kind != BlockKind::AZ) ||
      left.kind != BlockKind::BX)
    fail(errc::rule_not_applicable,
         "expected [BX, JZ|AZ], got [" + to_string(left) + ", " + to_string(moving) + "]");
  TraceStep st;
  st.step = step_id;
  st.lo = i - 1;
  st.hi = i + 1;
  st.before = {left, moving};
  if (moving.kind == BlockKind::JZ && left.weight == moving.weight &&
      left.twist == moving.twist) {
    // transform case
    Block arriving = bx(p, moving.twist - p.d, moving.weight + 1);
    st.rule = Rule::LmutJzTransform;
    st.after = {arriving, left};
    st.conds.push_back(
        detail::certify(cert, left, arriving, errc::rule_not_applicable, "mutation triangle"));
    return {detail::splice(s, i - 1, i + 1, st.after), st};
  }
  // identity case; the certificate is exactly the lemma's precondition
  st.rule = Rule::LmutIdentity;
  st.after = {moving, left};
  st.conds.push_back(detail::certify(cert, left, moving, errc::rule_not_applicable,
                                     "identity case"));
  if (moving.kind == BlockKind::JZ) {
    // the reverse direction holds throughout the induction walks; record it
    // when the oracle grants it
    if (auto cite = cert(moving, left)) st.conds.push_back(SideCondition{moving, left, *cite});
  }
  return {detail::splice(s, i - 1, i + 1, st.after), st};
}

namespace detail {

// The accumulated B-part left of the k-th divisor slot, in grid form.
inline std::vector<Block> ck_blocks(const Params& p, int k) {
  return grid_blocks(p, 0, p.M - 1, 0, k);
}

}  // namespace detail

// Replaces AZ(d,k) by the opaque image block PHI(k), placed right after the
// existing PHI prefix. Requires the non-PHI blocks left of i to be exactly
// the accumulated B-part (grid form); records the left-orthogonality of the
// divisor block against every prefix block.
inline Rewrite form_phi(const Sod& s, int i, const CertOracle& cert, int step_id = 0) {
  detail::check_index(s, i);
  const Params& p = s.params;
  const Block& target = s.blocks[i];
  if (target.kind != BlockKind::AZ || target.twist != p.d)
    fail(errc::prefix_not_ck, "phi formation expects AZ(d,k), got " + to_string(target));
  const int k = target.weight;
  int phis = 0;
  while (phis < i && is_phi(s.blocks[phis])) ++phis;
  for (int j = phis; j < i; ++j)
    if (is_phi(s.blocks[j]))
      fail(errc::prefix_not_ck, "PHI blocks must form a prefix");
  std::vector<Block> prefix(s.blocks.begin() + phis, s.blocks.begin() + i);
  if (!detail::multiset_equal(p, prefix, detail::ck_blocks(p, k)))
    fail(errc::prefix_not_ck,
         "blocks left of " + to_string(target) + " are not the accumulated B-part");
  TraceStep st;
  st.step = step_id;
  st.rule = Rule::PhiForm;
  st.lo = phis;
  st.hi = i + 1;
  st.before.assign(s.blocks.begin() + phis, s.blocks.begin() + i + 1);
  for (const Block& c : prefix)
    st.conds.push_back(
        detail::certify(cert, target, c, errc::certification_failed, "left orthogonality"));
  Block phi = phi_block(p, k, raw_phi_word(p, k, prefix), step_id);
  st.after.clear();
  st.after.push_back(phi);
  st.after.insert(st.after.end(), prefix.begin(), prefix.end());
  return {detail::splice(s, phis, i + 1, st.after), st};
}

// Word reduction for a PHI block: drops every mutation factor that acts as
// the identity on the divisor block, leaving LMut(BX([0,d-1],k)).
inline std::pair<Block, std::vector<SideCondition>> simplify_phi(const Block& b, const Params& p,
                                                                 const CertOracle& cert) {
  if (b.kind != BlockKind::PHI)
    fail(errc::rule_not_applicable, to_string(b) + " is not a PHI block");
  if (b.word.simplified)
    fail(errc::rule_not_applicable, "defining word of " + to_string(b) + " is already reduced");
  if (b.word.factors.size() != 3 || b.word.factors[0].op != PhiFactor::Op::LMut ||
      b.word.factors[1].op != PhiFactor::Op::PushJ || b.word.factors[2].op != PhiFactor::Op::Twist)
    fail(errc::rule_not_applicable, "defining word is not in raw form");
  const int k = b.weight;
  const Block divisor_block = az(p, p.d, k);
  std::vector<Block> kept;
  std::vector<Block> dropped;
  for (const Block& f : b.word.factors[0].blocks) {
    if (f.kind == BlockKind::BX && f.weight == k && 0 <= f.twist && f.twist <= p.d - 1)
      kept.push_back(f);
    else
      dropped.push_back(f);
  }
  std::vector<Block> expect = grid_blocks(p, 0, p.d - 1, k, k);
  if (!detail::multiset_equal(p, kept, expect))
    fail(errc::simplification_blocked, "kept factors do not form BX([0,d-1]," +
                                           std::to_string(k) + ")");
  std::vector<SideCondition> conds;
  for (const Block& f : dropped)
    conds.push_back(
        detail::certify(cert, f, divisor_block, errc::simplification_blocked, "dropped factor"));
  Block out = b;
  out.word = canonical_phi_word(p, k);
  return {out, conds};
}

inline Rewrite simplify_phi_at(const Sod& s, int i, const CertOracle& cert, int step_id = 0) {
  detail::check_index(s, i);
  auto [reduced, conds] = simplify_phi(s.blocks[i], s.params, cert);
  TraceStep st;
  st.step = step_id;
  st.rule = Rule::PhiSimplify;
  st.lo = i;
  st.hi = i + 1;
  st.before = {s.blocks[i]};
  st.after = {reduced};
  st.conds = std::move(conds);
  return {detail::splice(s, i, i + 1, st.after), st};
}

}  // namespace sodcalc
