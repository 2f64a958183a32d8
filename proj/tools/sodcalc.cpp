// Command-line front end: proof replay, independent trace checking, the
// parameter sweep, vanishing explanations and script execution.
//
// Exit codes: 0 success, 2 invalid parameters or input, 3 replay failure,
// 4 trace validation failure, 1 sweep/script failure.

#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "sodcalc/driver.hpp"
#include "sodcalc/dsl.hpp"
#include "sodcalc/trace_io.hpp"
#include "sodcalc/window.hpp"

namespace {

using namespace sodcalc;

struct CellOutcome {
  Params params;
  bool replay_ok = false, check_ok = false, cross_ok = false;
  bool ck_ok = false, relabel_ok = false, covers_ok = false;
  std::string note;
  bool all_ok() const {
    return replay_ok && check_ok && cross_ok && ck_ok && relabel_ok && covers_ok;
  }
};

CellOutcome run_cell(const Params& p) {
  CellOutcome out;
  out.params = p;
  try {
    ReplayResult r = replay_main(p);
    out.replay_ok = true;
    out.check_ok = check_trace(r.trace).ok;
    out.cross_ok = crosscheck(p, -p.m, 2 * p.m).clean();
    out.ck_ok = true;
    for (int k = 0; k <= p.n - 1; ++k) {
      CkReport ck = verify_ck(p, k);
      if (check_steps(ck.start, ck.trace.steps).ok == false) out.ck_ok = false;
    }
    std::vector<Block> phis(r.final.blocks.begin(), r.final.blocks.begin() + (p.n - 1));
    out.relabel_ok = verify_phi_relabel(p, phis).ok;
    out.covers_ok = enumerate_cover_sods(p).size() == static_cast<std::size_t>(p.n);
  } catch (const error& e) {
    out.note = e.what();
  }
  return out;
}

std::string sweep_report(const std::vector<CellOutcome>& cells) {
  std::ostringstream os;
  os << "n d m  M  replay check cross ck relabel covers\n";
  int failures = 0;
  for (const CellOutcome& c : cells) {
    auto mark = [](bool b) { return b ? "ok" : "FAIL"; };
    os << c.params.n << " " << c.params.d << " " << c.params.m << "  " << c.params.M << "  "
       << mark(c.replay_ok) << " " << mark(c.check_ok) << " " << mark(c.cross_ok) << " "
       << mark(c.ck_ok) << " " << mark(c.relabel_ok) << " " << mark(c.covers_ok);
    if (!c.note.empty()) os << "  [" << c.note << "]";
    os << "\n";
    if (!c.all_ok()) ++failures;
  }
  os << (failures ? "SWEEP FAILED (" + std::to_string(failures) + " of " : "SWEEP OK (")
     << (failures ? std::to_string(cells.size()) + " cells)" : std::to_string(cells.size()) + " cells)")
     << "\n";
  return os.str();
}

std::vector<CellOutcome> run_sweep(const std::vector<Params>& cells, int jobs) {
  std::vector<CellOutcome> results(cells.size());
  if (jobs < 1) jobs = 1;
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      results[i] = run_cell(cells[i]);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return results;
}

int cmd_replay(int n, int d, int m, const std::string& out_path) {
  Params p;
  try {
    p = Params::make(n, d, m);
  } catch (const error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  ReplayResult r;
  try {
    r = replay_main(p);
  } catch (const error& e) {
    std::cerr << "replay failed: " << e.what() << "\n";
    return 3;
  }
  if (!out_path.empty()) {
    std::ofstream os(out_path, std::ios::binary);
    if (!os) {
      std::cerr << "cannot open " << out_path << "\n";
      return 2;
    }
    write_trace_jsonl(os, r.trace);
  }
  AtomCounts counts = count_atoms(r.final);
  std::cout << "params " << p.str() << "\n";
  std::cout << "final " << dsl::print(r.final) << "\n";
  std::cout << "counts b_type=" << counts.b_type << " a_type=" << counts.a_type << "\n";
  std::cout << "steps " << r.trace.steps.size() << "\n";
  return 0;
}

int cmd_check(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    std::cerr << "cannot open " << path << "\n";
    return 2;
  }
  Trace t;
  try {
    t = read_trace_jsonl(is);
  } catch (const error& e) {
    std::cerr << e.what() << "\n";
    return 4;
  }
  CheckResult res = check_trace(t);
  if (!res.ok) {
    std::cerr << "trace invalid: " << res.reason << "\n";
    return 4;
  }
  std::cout << "trace ok: " << t.steps.size() << " steps validated\n";
  return 0;
}

int cmd_explain(int n, int d, int m, const std::string& ps, const std::string& qs) {
  Params p;
  Block pb, qb;
  try {
    p = Params::make(n, d, m);
    pb = parse_block_literal(ps, p);
    qb = parse_block_literal(qs, p);
  } catch (const error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  if (is_phi(pb) || is_phi(qb)) {
    std::cout << "provenance-only block: PHI verdicts come from trace provenance\n";
    return 0;
  }
  try {
    if (vanishes(pb, qb, p) == Vanish::Guaranteed) {
      std::cout << "Guaranteed: " << explain(pb, qb, p) << "\n";
      return 0;
    }
    std::cout << "NotGuaranteed via " << explain_failure(pb, qb, p) << "\n";
    try {
      Hom h = block_hom(pb, qb, p);
      std::cout << "adjunction reduction verdict: " << to_string(h) << "\n";
    } catch (const error& e) {
      std::cout << "adjunction reduction: " << e.what() << "\n";
    }
  } catch (const error& e) {
    std::cout << "window verdict unavailable: " << e.what() << "\n";
  }
  return 0;
}

int cmd_run(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    std::cerr << "cannot open " << path << "\n";
    return 2;
  }
  std::ostringstream buf;
  buf << is.rdbuf();
  dsl::RunResult res;
  try {
    res = dsl::run_text(buf.str());
  } catch (const error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  for (const std::string& msg : res.messages) std::cout << msg << "\n";
  std::cout << (res.ok ? "script ok" : "script FAILED") << "\n";
  return res.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semiorthogonal decomposition calculus for cyclic covers"};
  app.require_subcommand(1);

  int n = 0, d = 0, m = 0;
  std::string out_path, preset_name, trace_path, script_path, block_p, block_q;
  int jobs = static_cast<int>(std::thread::hardware_concurrency());
  int n_lo = 2, n_hi = 5, d_lo = 1, d_hi = 3, m_lo = 1, m_hi = 12;

  CLI::App* replay = app.add_subcommand("replay", "replay the main decomposition proof");
  replay->add_option("--n", n, "cover degree");
  replay->add_option("--d", d, "divisor degree parameter");
  replay->add_option("--m", m, "Lefschetz length");
  replay->add_option("--preset", preset_name, "quartic | gm:N | cubic:N");
  replay->add_option("--out", out_path, "write the trace (JSON Lines)");

  CLI::App* check = app.add_subcommand("check", "validate a trace independently");
  check->add_option("trace", trace_path, "trace file")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "replay and verify every admissible cell");
  sweep->add_option("--n-min", n_lo);
  sweep->add_option("--n-max", n_hi);
  sweep->add_option("--d-min", d_lo);
  sweep->add_option("--d-max", d_hi);
  sweep->add_option("--m-min", m_lo);
  sweep->add_option("--m-max", m_hi);
  sweep->add_option("--jobs", jobs, "worker threads");

  CLI::App* explain_cmd = app.add_subcommand("explain", "explain a vanishing verdict");
  explain_cmd->add_option("--n", n)->required();
  explain_cmd->add_option("--d", d)->required();
  explain_cmd->add_option("--m", m)->required();
  explain_cmd->add_option("p", block_p, "source block literal")->required();
  explain_cmd->add_option("q", block_q, "target block literal")->required();

  CLI::App* run_cmd = app.add_subcommand("run", "execute a .sod script");
  run_cmd->add_option("script", script_path, "script file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (replay->parsed()) {
    if (!preset_name.empty()) {
      try {
        Preset ps = preset(preset_name);
        n = ps.params.n;
        d = ps.params.d;
        m = ps.params.m;
        std::cout << "preset " << ps.name << ": expect " << ps.phi_count << " PHI block(s), grid "
                  << ps.grid_rows << "x" << ps.grid_cols << "\n";
      } catch (const error& e) {
        std::cerr << e.what() << "\n";
        return 2;
      }
    }
    return cmd_replay(n, d, m, out_path);
  }
  if (check->parsed()) return cmd_check(trace_path);
  if (sweep->parsed()) {
    std::vector<Params> cells = sweep_cells(n_lo, n_hi, d_lo, d_hi, m_lo, m_hi);
    std::vector<CellOutcome> results = run_sweep(cells, jobs);
    std::string report = sweep_report(results);
    std::cout << report;
    for (const CellOutcome& c : results)
      if (!c.all_ok()) return 1;
    return 0;
  }
  if (explain_cmd->parsed()) return cmd_explain(n, d, m, block_p, block_q);
  if (run_cmd->parsed()) return cmd_run(script_path);
  return 2;
}
