#include <doctest.h>

#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "sodcalc/driver.hpp"
#include "sodcalc/trace_io.hpp"
#include "test_helpers.hpp"

using namespace sodcalc;
using sodtest::thrown_code;

TEST_CASE("trace serialization round-trips") {
  Params p = Params::make(2, 1, 4);
  ReplayResult r = replay_main(p);
  std::string text = trace_to_string(r.trace);
  std::istringstream is(text);
  Trace back = read_trace_jsonl(is);
  CHECK(back.params == p);
  CHECK(back.schedule == kSchedule);
  REQUIRE(back.steps.size() == r.trace.steps.size());
  CHECK(trace_to_string(back) == text);
}

TEST_CASE("trace files are byte-deterministic") {
  Params p = Params::make(3, 1, 6);
  CHECK(trace_to_string(replay_main(p).trace) == trace_to_string(replay_main(p).trace));
}

TEST_CASE("header schema and wire format") {
  Params p = Params::make(2, 2, 4);
  std::string text = trace_to_string(replay_main(p).trace);
  std::istringstream is(text);
  std::string line;
  REQUIRE(std::getline(is, line));
  nlohmann::json header = nlohmann::json::parse(line);
  CHECK(header["schema"] == 1);
  CHECK(header["n"] == 2);
  CHECK(header["d"] == 2);
  CHECK(header["m"] == 4);
  CHECK(header["M"] == 2);
  CHECK(header["schedule"] == "a=1..n-1 rightmost-first");
  REQUIRE(std::getline(is, line));
  nlohmann::json step = nlohmann::json::parse(line);
  CHECK(step["step"] == 0);
  CHECK(step["rule"] == "EXPAND_FY");
  CHECK(step["pos"].is_array());
  CHECK(step["before"].is_array());
  CHECK(step["after"].is_array());
  CHECK(step["conds"].is_array());
}

TEST_CASE("unknown schema versions are rejected") {
  std::istringstream is("{\"schema\":2,\"n\":2,\"d\":1,\"m\":4,\"M\":3,\"schedule\":\"x\"}\n");
  CHECK(thrown_code([&] { read_trace_jsonl(is); }) == errc::bad_trace);
  std::istringstream missing("{\"n\":2,\"d\":1,\"m\":4}\n");
  CHECK(thrown_code([&] { read_trace_jsonl(missing); }) == errc::bad_trace);
}

TEST_CASE("malformed headers and steps are rejected") {
  std::istringstream inconsistent("{\"schema\":1,\"n\":2,\"d\":1,\"m\":4,\"M\":2,\"schedule\":\"x\"}\n");
  CHECK(thrown_code([&] { read_trace_jsonl(inconsistent); }) == errc::bad_trace);
  std::istringstream bad_params("{\"schema\":1,\"n\":3,\"d\":2,\"m\":5,\"M\":1,\"schedule\":\"x\"}\n");
  CHECK(thrown_code([&] { read_trace_jsonl(bad_params); }) == errc::nd_exceeds_m);
  std::istringstream empty("");
  CHECK(thrown_code([&] { read_trace_jsonl(empty); }) == errc::bad_trace);
  std::istringstream bad_rule(
      "{\"schema\":1,\"n\":2,\"d\":1,\"m\":4,\"M\":3,\"schedule\":\"x\"}\n"
      "{\"step\":0,\"rule\":\"NOPE\",\"pos\":[0,1],\"before\":[\"FY(0)\"],\"after\":[],\"conds\":[]}\n");
  CHECK(thrown_code([&] { read_trace_jsonl(bad_rule); }) == errc::bad_trace);
  std::istringstream bad_verdict(
      "{\"schema\":1,\"n\":2,\"d\":1,\"m\":4,\"M\":3,\"schedule\":\"x\"}\n"
      "{\"step\":0,\"rule\":\"SWAP_ORTH\",\"pos\":[0,2],\"before\":[\"FY(0)\",\"DZ(0)\"],"
      "\"after\":[\"DZ(0)\",\"FY(0)\"],"
      "\"conds\":[{\"p\":\"FY(0)\",\"q\":\"DZ(0)\",\"verdict\":\"Nonzero\",\"cite\":\"\"}]}\n");
  CHECK(thrown_code([&] { read_trace_jsonl(bad_verdict); }) == errc::bad_trace);
}

TEST_CASE("fresh traces validate") {
  for (Params p : {Params::make(2, 1, 4), Params::make(3, 1, 5), Params::make(2, 2, 4)}) {
    ReplayResult r = replay_main(p);
    CheckResult c = check_trace(r.trace);
    INFO(c.reason);
    CHECK(c.ok);
  }
}

TEST_CASE("prefixes of a valid trace validate") {
  Params p = Params::make(3, 1, 5);
  Trace t = replay_main(p).trace;
  Trace prefix = t;
  prefix.steps.resize(t.steps.size() / 2);
  CHECK(check_trace(prefix).ok);
}

TEST_CASE("a forged mutation result is detected") {
  Params p = Params::make(2, 1, 4);
  Trace t = replay_main(p).trace;
  // find the right-mutation step and forge its arriving block
  for (TraceStep& s : t.steps)
    if (s.rule == Rule::RmutThroughDz) {
      s.after[1].twist += 1;
      break;
    }
  CheckResult c = check_trace(t);
  CHECK_FALSE(c.ok);
}

TEST_CASE("a swapped side-condition pair is detected") {
  Params p = Params::make(2, 1, 4);
  Trace t = replay_main(p).trace;
  for (TraceStep& s : t.steps)
    if (!s.conds.empty()) {
      std::swap(s.conds[0].p, s.conds[0].q);
      break;
    }
  CHECK_FALSE(check_trace(t).ok);
}

TEST_CASE("textual tampering of a trace file is detected") {
  Params p = Params::make(2, 1, 4);
  std::string text = trace_to_string(replay_main(p).trace);
  std::size_t at = text.find("\"BX(2,0)\"");
  REQUIRE(at != std::string::npos);
  text.replace(at, 9, "\"BX(9,0)\"");
  std::istringstream is(text);
  Trace t = read_trace_jsonl(is);
  CHECK_FALSE(check_trace(t).ok);
}

TEST_CASE("random single-field corruptions are always detected") {
  std::mt19937_64 rng(20240812);
  for (Params p : {Params::make(2, 1, 4), Params::make(3, 1, 5), Params::make(2, 2, 4)}) {
    Trace t = replay_main(p).trace;
    REQUIRE(check_trace(t).ok);
    std::uniform_int_distribution<std::size_t> pick_step(0, t.steps.size() - 1);
    std::uniform_int_distribution<int> coin(0, 1);
    auto bump = [](Block& b) {
      if (b.kind == BlockKind::PHI || b.kind == BlockKind::FYfull || b.kind == BlockKind::DZfull)
        b.weight += 1;
      else
        b.twist += 1;
    };
    for (int trial = 0; trial < 60; ++trial) {
      Trace mutated = t;
      TraceStep& s = mutated.steps[pick_step(rng)];
      bool corrupt_cond = coin(rng) == 1 && !s.conds.empty();
      if (corrupt_cond) {
        std::uniform_int_distribution<std::size_t> pick(0, s.conds.size() - 1);
        SideCondition& c = s.conds[pick(rng)];
        bump(coin(rng) ? c.p : c.q);
      } else {
        std::uniform_int_distribution<std::size_t> pick(0, s.after.size() - 1);
        bump(s.after[pick(rng)]);
      }
      CHECK_FALSE(check_trace(mutated).ok);
    }
  }
}

TEST_CASE("check_steps accepts induction sub-traces from their own start") {
  Params p = Params::make(4, 1, 6);
  for (int k = 0; k <= p.n - 1; ++k) {
    CkReport rep = verify_ck(p, k);
    CHECK(check_steps(rep.start, rep.trace.steps).ok);
  }
}
