#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sodcalc/adjunction.hpp"
#include "sodcalc/block.hpp"
#include "sodcalc/mutation.hpp"
#include "sodcalc/params.hpp"
#include "sodcalc/sod.hpp"

// Trace serialization (JSON Lines, schema 1) and the independent checker.
// The checker re-derives every rewrite from scratch and certifies every side
// condition with the adjunction engine only; it deliberately never sees the
// closed-form window rules, so checker agreement is a two-implementation test.

namespace sodcalc {

inline constexpr int kTraceSchema = 1;

// The starting decomposition of every replay: the cover rotation with the
// pullback component in front.
inline Sod initial_cover_sod(const Params& p) {
  std::vector<Block> blocks;
  blocks.push_back(fy_full(p, 0));
  for (int k = 0; k + 1 <= p.n - 1; ++k) blocks.push_back(dz_full(p, k));
  return make_sod(p, std::move(blocks));
}

// Certified-zero oracle backed by the adjunction engine.
inline CertOracle adjunction_certifier(const Params& p) {
  return [p](const Block& a, const Block& b) -> std::optional<std::string> {
    try {
      if (block_hom(a, b, p) == Hom::Zero) return std::string("adjunction: reduces to zero");
    } catch (const error&) {
      // undefined or unsupported queries certify nothing
    }
    return std::nullopt;
  };
}

inline ZeroFn adjunction_zero_fn(const Params& p) {
  CertOracle cert = adjunction_certifier(p);
  return [cert](const Block& a, const Block& b) { return cert(a, b).has_value(); };
}

// --- serialization ------------------------------------------------------------

inline void write_trace_jsonl(std::ostream& os, const Trace& t) {
  using json = nlohmann::ordered_json;
  json header;
  header["schema"] = kTraceSchema;
  header["n"] = t.params.n;
  header["d"] = t.params.d;
  header["m"] = t.params.m;
  header["M"] = t.params.M;
  header["schedule"] = t.schedule;
  os << header.dump() << "\n";
  for (const TraceStep& s : t.steps) {
    json j;
    j["step"] = s.step;
    j["rule"] = rule_name(s.rule);
    j["pos"] = json::array({s.lo, s.hi});
    json before = json::array();
    for (const Block& b : s.before) before.push_back(to_string(b));
    j["before"] = before;
    json after = json::array();
    for (const Block& b : s.after) after.push_back(to_string(b));
    j["after"] = after;
    json conds = json::array();
    for (const SideCondition& c : s.conds) {
      json jc;
      jc["p"] = to_string(c.p);
      jc["q"] = to_string(c.q);
      jc["verdict"] = "Zero";
      jc["cite"] = c.cite;
      conds.push_back(jc);
    }
    j["conds"] = conds;
    os << j.dump() << "\n";
  }
}

inline std::string trace_to_string(const Trace& t) {
  std::ostringstream os;
  write_trace_jsonl(os, t);
  return os.str();
}

inline Trace read_trace_jsonl(std::istream& is) {
  using json = nlohmann::json;
  std::string line;
  if (!std::getline(is, line)) fail(errc::bad_trace, "empty trace file");
  json header;
  try {
    header = json::parse(line);
  } catch (const std::exception& e) {
    fail(errc::bad_trace, std::string("header: ") + e.what());
  }
  if (!header.contains("schema") || !header["schema"].is_number_integer())
    fail(errc::bad_trace, "missing schema version");
  if (header["schema"].get<int>() != kTraceSchema)
    fail(errc::bad_trace,
         "unsupported schema version " + std::to_string(header["schema"].get<int>()));
  Trace t;
  t.params = Params::make(header.at("n").get<int>(), header.at("d").get<int>(),
                          header.at("m").get<int>());
  if (header.contains("M") && header["M"].get<int>() != t.params.M)
    fail(errc::bad_trace, "inconsistent derived length M");
  t.schedule = header.value("schedule", "");
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const std::exception& e) {
      fail(errc::bad_trace, "line " + std::to_string(lineno) + ": " + e.what());
    }
    TraceStep s;
    try {
      s.step = j.at("step").get<int>();
      auto rule = rule_from_name(j.at("rule").get<std::string>());
      if (!rule) fail(errc::bad_trace, "unknown rule " + j.at("rule").get<std::string>());
      s.rule = *rule;
      s.lo = j.at("pos").at(0).get<int>();
      s.hi = j.at("pos").at(1).get<int>();
      for (const auto& b : j.at("before"))
        s.before.push_back(parse_block_literal(b.get<std::string>(), t.params));
      for (const auto& b : j.at("after"))
        s.after.push_back(parse_block_literal(b.get<std::string>(), t.params));
      for (const auto& c : j.at("conds")) {
        SideCondition sc;
        sc.p = parse_block_literal(c.at("p").get<std::string>(), t.params);
        sc.q = parse_block_literal(c.at("q").get<std::string>(), t.params);
        if (c.at("verdict").get<std::string>() != "Zero")
          fail(errc::bad_trace, "side conditions must be recorded Zero");
        sc.cite = c.value("cite", "");
        s.conds.push_back(sc);
      }
    } catch (const error&) {
      throw;
    } catch (const std::exception& e) {
      fail(errc::bad_trace, "line " + std::to_string(lineno) + ": " + e.what());
    }
    t.steps.push_back(std::move(s));
  }
  return t;
}

// --- independent validation ---------------------------------------------------

struct CheckResult {
  bool ok = true;
  int failing_step = -1;
  std::string reason;
};

namespace detail {

inline bool labels_equal(const std::vector<Block>& a, const std::vector<Block>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!label_equal(a[i], b[i])) return false;
  return true;
}

inline bool conds_equal(const std::vector<SideCondition>& a, const std::vector<SideCondition>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!label_equal(a[i].p, b[i].p) || !label_equal(a[i].q, b[i].q)) return false;
  return true;
}

}  // namespace detail

// Replays the steps against `initial`, re-deriving each rewrite and all of
// its side conditions with the adjunction oracle. A step passes only if the
// recorded slices and condition pairs coincide with the re-derivation.
inline CheckResult check_steps(const Sod& initial, const std::vector<TraceStep>& steps) {
  CertOracle adj = adjunction_certifier(initial.params);
  Sod state = initial;
  for (const TraceStep& s : steps) {
    auto reject = [&](const std::string& why) {
      return CheckResult{false, s.step, "step " + std::to_string(s.step) + " (" +
                                            rule_name(s.rule) + "): " + why};
    };
    if (s.lo < 0 || s.hi > static_cast<int>(state.blocks.size()) || s.lo >= s.hi)
      return reject("position out of range");
    std::vector<Block> slice(state.blocks.begin() + s.lo, state.blocks.begin() + s.hi);
    if (!detail::labels_equal(slice, s.before)) return reject("recorded 'before' does not match");

    Rewrite expected;
    try {
      switch (s.rule) {
        case Rule::ExpandFY:
        case Rule::ExpandDZ: expected = expand(state, s.lo, s.step); break;
        case Rule::SwapOrth: expected = swap_orth(state, s.lo, adj, s.step); break;
        case Rule::RmutThroughDz: expected = right_mutate(state, s.lo, adj, s.step); break;
        case Rule::LmutJzTransform:
        case Rule::LmutIdentity: expected = left_mutate_step(state, s.lo + 1, adj, s.step); break;
        case Rule::PhiForm: expected = form_phi(state, s.hi - 1, adj, s.step); break;
        case Rule::PhiSimplify: expected = simplify_phi_at(state, s.lo, adj, s.step); break;
      }
    } catch (const error& e) {
      return reject(std::string("re-derivation failed: ") + e.what());
    }
    if (expected.step.rule != s.rule) return reject("rule does not match the re-derivation");
    if (expected.step.lo != s.lo || expected.step.hi != s.hi)
      return reject("span does not match the re-derivation");
    if (!detail::labels_equal(expected.step.after, s.after))
      return reject("recorded 'after' does not match the re-derivation");
    if (!detail::conds_equal(expected.step.conds, s.conds))
      return reject("side conditions do not match the re-derivation");
    state = std::move(expected.after);
  }
  return {};
}

inline CheckResult check_trace(const Trace& t) {
  return check_steps(initial_cover_sod(t.params), t.steps);
}

}  // namespace sodcalc
