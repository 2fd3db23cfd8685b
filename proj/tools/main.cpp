// Command-line front end: generate, solve, verify, enumerate, threshold
// tables, and scaling benchmarks for quadratic systems over small fields.
//
// Exit codes: 0 solution found / verify OK; 1 verify FAIL or internal error;
// 2 guess space exhausted (or oracle found nothing); 3 reduction failed;
// 4 parameters out of range (applicability or enumeration budget); 5 parse
// or I/O error.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mqsolve/errors.hpp"
#include "mqsolve/io.hpp"
#include "mqsolve/oracle.hpp"
#include "mqsolve/reducer.hpp"
#include "mqsolve/rng.hpp"
#include "mqsolve/solver.hpp"
#include "mqsolve/system.hpp"

namespace {

constexpr int kExitSolution = 0;
constexpr int kExitFailure = 1;
constexpr int kExitExhausted = 2;
constexpr int kExitReductionFailed = 3;
constexpr int kExitInapplicable = 4;
constexpr int kExitParse = 5;

struct FieldArgs {
  std::uint32_t p = 2;
  std::uint32_t e = 1;
  std::string mod;  // optional reduction polynomial for extension fields, e.g. 0x13

  mq::Field make() const {
    std::optional<mq::Elem> modulus;
    if (!mod.empty()) modulus = static_cast<mq::Elem>(std::stoul(mod, nullptr, 0));
    return mq::Field::make(p, e, modulus);
  }
};

void add_field_options(CLI::App* cmd, FieldArgs* args) {
  cmd->add_option("-p,--p,--characteristic", args->p, "Field characteristic (prime)")
      ->default_val(std::uint32_t{2});
  cmd->add_option("-e,--e,--degree", args->e,
                  "Extension degree (characteristic 2 only for e > 1)")
      ->default_val(std::uint32_t{1});
  cmd->add_option("--mod", args->mod, "Reduction polynomial bits for GF(2^e), e.g. 0x13");
}

// Accepts "7", "16", "2^4", "GF(16)", "gf(2^4)" and the like. Plain sizes are
// read as a prime or a power of two; odd-characteristic extensions are not
// supported, so there is no ambiguity.
mq::Field parse_field_name(const std::string& s) {
  std::string cleaned;
  for (char c : s) {
    const char lc = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lc == 'g' || lc == 'f' || lc == '(' || lc == ')' || lc == ' ') continue;
    cleaned.push_back(lc);
  }
  if (cleaned.empty()) throw std::invalid_argument("empty field name");
  const auto caret = cleaned.find('^');
  if (caret != std::string::npos) {
    const auto p = static_cast<std::uint32_t>(std::stoul(cleaned.substr(0, caret)));
    const auto e = static_cast<std::uint32_t>(std::stoul(cleaned.substr(caret + 1)));
    return mq::Field::make(p, e);
  }
  const auto q = std::stoull(cleaned);
  if (q >= 4 && (q & (q - 1)) == 0) {
    std::uint32_t e = 0;
    for (std::uint64_t v = q; v > 1; v >>= 1) ++e;
    return mq::Field::make(2, e);
  }
  return mq::Field::make(static_cast<std::uint32_t>(q), 1);
}

int outcome_exit_code(mq::Outcome outcome) {
  switch (outcome) {
    case mq::Outcome::kSolution: return kExitSolution;
    case mq::Outcome::kExhausted: return kExitExhausted;
    case mq::Outcome::kReductionFailed: return kExitReductionFailed;
  }
  return kExitFailure;
}

void print_sol_line(std::ostream& out, const mq::Assignment& s) {
  out << "sol";
  for (const mq::Elem v : s) out << ' ' << v;
  out << '\n';
}

mq::Assignment random_assignment(const mq::Field& field, std::size_t n, bool nonzero, mq::Rng& rng) {
  mq::Assignment s(n, 0);
  for (;;) {
    for (auto& v : s) v = field.random_element(rng);
    if (!nonzero) return s;
    if (std::any_of(s.begin(), s.end(), [](mq::Elem v) { return v != 0; })) return s;
  }
}

int run_generate(const FieldArgs& field_args, std::size_t n, std::size_t m, bool homogeneous,
                 bool plant, std::uint64_t seed, const std::string& out_path) {
  const mq::Field field = field_args.make();
  mq::Rng rng(seed);
  mq::MQSystem sys = mq::random_system(field, n, m, homogeneous, rng);
  std::optional<mq::Assignment> planted;
  if (plant) {
    planted = random_assignment(field, n, homogeneous, rng);
    sys = mq::plant_solution(sys, *planted);
  }
  if (!mq::applicability_ok(n, m)) {
    std::cerr << "warning: n=" << n << " < m(m+1)/2=" << m * (m + 1) / 2
              << "; the solver will refuse this instance\n";
  }
  mq::write_instance(sys, out_path);
  std::cout << "seed=" << seed << '\n';
  std::cout << "wrote " << out_path << '\n';
  if (planted) {
    const std::string sol_path = out_path + ".sol";
    mq::write_solution(*planted, sol_path);
    std::cout << "wrote " << sol_path << '\n';
  }
  return kExitSolution;
}

int run_solve(const std::string& in_path, const mq::SolveConfig& cfg, bool timing,
              const std::string& out_path, const std::string& report_path) {
  const mq::MQSystem sys = mq::parse_instance_file(in_path);
  const mq::SolveReport report = mq::solve(sys, cfg);
  if (report.solution) print_sol_line(std::cout, *report.solution);
  std::cout << report.to_kv(timing);
  if (!report_path.empty()) {
    std::ofstream rep(report_path);
    if (!rep) {
      std::cerr << "error: cannot open report path " << report_path << '\n';
      return kExitParse;
    }
    rep << report.to_kv(/*include_timing=*/false);
    std::cout << "wrote " << report_path << '\n';
  }
  if (report.solution && !out_path.empty()) {
    mq::write_solution(*report.solution, out_path);
    std::cout << "wrote " << out_path << '\n';
  }
  return outcome_exit_code(report.outcome);
}

int run_verify(const std::string& in_path, const std::string& sol_path) {
  const mq::MQSystem sys = mq::parse_instance_file(in_path);
  const mq::Assignment x = mq::parse_solution_file(sol_path, sys.n, sys.field);
  const mq::Vec values = mq::evaluate_system(sys, x);
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] != 0) {
      std::cout << "FAIL eq=" << k + 1 << '\n';  // 1-based, matching file order
      return kExitFailure;
    }
  }
  std::cout << "OK\n";
  return kExitSolution;
}

int run_oracle(const std::string& in_path, bool all, std::uint64_t budget_points) {
  const mq::MQSystem sys = mq::parse_instance_file(in_path);
  mq::OracleBudget budget;
  budget.max_points = budget_points;
  if (all) {
    const std::vector<mq::Assignment> sols = mq::all_solutions(sys, budget);
    for (const auto& s : sols) print_sol_line(std::cout, s);
    std::cout << "count=" << sols.size() << '\n';
    return sols.empty() ? kExitExhausted : kExitSolution;
  }
  const std::optional<mq::Assignment> s = mq::any_solution(sys, budget);
  if (!s) {
    std::cout << "none\n";
    return kExitExhausted;
  }
  print_sol_line(std::cout, *s);
  return kExitSolution;
}

int run_ranges(std::size_t m_min, std::size_t m_max, const std::string& chr, bool csv) {
  if (m_min < 1 || m_min > m_max || m_max > 200)
    throw std::invalid_argument("ranges requires 1 <= m-min <= m-max <= 200");
  const bool even = chr == "even";
  if (csv) {
    std::cout << "m,this,miura,kipnis,courtois\n";
  } else {
    std::cout << std::setw(5) << "m" << std::setw(10) << "this" << std::setw(10) << "miura"
              << std::setw(10) << "kipnis" << std::setw(10) << "courtois" << '\n';
  }
  for (std::size_t m = m_min; m <= m_max; ++m) {
    const mq::ThresholdRow row = mq::thresholds_table(m);
    const std::uint64_t courtois = even ? row.courtois_even : row.courtois_odd;
    if (csv) {
      std::cout << m << ',' << row.this_algo << ',' << row.miura << ',' << row.kipnis << ','
                << courtois << '\n';
    } else {
      std::cout << std::setw(5) << m << std::setw(10) << row.this_algo << std::setw(10)
                << row.miura << std::setw(10) << row.kipnis << std::setw(10) << courtois << '\n';
    }
  }
  return kExitSolution;
}

int run_bench(const std::string& field_name, const std::vector<std::size_t>& m_list,
              std::size_t slack, std::size_t trials, std::uint64_t seed, bool csv_only) {
  const mq::Field field = parse_field_name(field_name);
  if (!csv_only)
    std::cout << "# field=" << field.to_string() << " trials=" << trials << " seed=" << seed
              << '\n';
  std::cout << "m,n,q,trials,successes,guesses,univariate_calls\n";
  std::vector<double> log_n;
  std::vector<double> log_wall;
  for (const std::size_t m : m_list) {
    const std::size_t n = m * (m + 1) / 2 + slack;
    std::uint64_t successes = 0;
    std::uint64_t guesses = 0;
    std::uint64_t univariate = 0;
    double wall_ms = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
      const std::uint64_t run_seed = mq::mix_seed(mq::mix_seed(seed, m), trial);
      mq::Rng rng(run_seed);
      mq::MQSystem sys = mq::random_system(field, n, m, /*homogeneous=*/false, rng);
      const mq::Assignment target = random_assignment(field, n, /*nonzero=*/false, rng);
      sys = mq::plant_solution(sys, target);
      mq::SolveConfig cfg;
      cfg.seed = run_seed;
      const mq::SolveReport report = mq::solve(sys, cfg);
      if (report.outcome == mq::Outcome::kSolution) ++successes;
      guesses += report.guesses_tried;
      univariate += report.univariate_calls;
      wall_ms += report.wall_ms;
    }
    std::cout << m << ',' << n << ',' << field.order() << ',' << trials << ',' << successes << ','
              << guesses << ',' << univariate << '\n';
    if (!csv_only)
      std::cout << "# m=" << m << " avg_wall_ms=" << wall_ms / static_cast<double>(trials) << '\n';
    if (wall_ms > 0.0) {
      log_n.push_back(std::log(static_cast<double>(n)));
      log_wall.push_back(std::log(wall_ms / static_cast<double>(trials)));
    }
  }
  // Least-squares slope of log(wall) against log(n): rough growth exponent,
  // informational only (kept out of the deterministic CSV body).
  if (!csv_only && log_n.size() >= 2) {
    const double k = static_cast<double>(log_n.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < log_n.size(); ++i) {
      sx += log_n[i];
      sy += log_wall[i];
      sxx += log_n[i] * log_n[i];
      sxy += log_n[i] * log_wall[i];
    }
    const double denom = k * sxx - sx * sx;
    if (denom != 0.0) {
      std::cout << "# loglog_exponent_time_vs_n=" << (k * sxy - sx * sy) / denom << '\n';
    }
  }
  return kExitSolution;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solver for underdefined quadratic systems over small finite fields"};
  app.require_subcommand(1);

  // generate
  FieldArgs gen_field;
  std::size_t gen_n = 0, gen_m = 0;
  bool gen_homogeneous = false, gen_plant = false;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("generate", "Generate a random instance");
  add_field_options(gen, &gen_field);
  gen->add_option("-n,--n,--vars", gen_n, "Number of variables")->required();
  gen->add_option("-m,--m,--eqs", gen_m, "Number of equations")->required();
  gen->add_flag("--homogeneous", gen_homogeneous, "No linear or constant terms");
  gen->add_flag("--plant", gen_plant, "Plant a known solution (written to <out>.sol)");
  gen->add_option("--seed", gen_seed, "RNG seed")->default_val(std::uint64_t{0});
  gen->add_option("-o,--out", gen_out, "Output instance path")->required();

  // solve
  std::string solve_in_pos, solve_in_opt, solve_out, solve_report, solve_order = "seq";
  mq::SolveConfig solve_cfg;
  bool solve_timing = false, solve_require_nz = false, solve_allow_zero = false;
  CLI::App* slv = app.add_subcommand("solve", "Solve an instance");
  slv->add_option("input", solve_in_pos, "Instance path");
  slv->add_option("--in", solve_in_opt, "Instance path (alternative to the positional)");
  slv->add_option("--seed", solve_cfg.seed, "RNG seed")->default_val(std::uint64_t{0});
  slv->add_option("--guess-order", solve_order, "Guess order: seq or random")
      ->check(CLI::IsMember({"seq", "random"}))
      ->default_val("seq");
  slv->add_option("--max-resamples,--resamples", solve_cfg.tail_resamples_per_guess,
                  "Tail draws per guess when the constraint solution space has positive dimension")
      ->default_val(std::size_t{4});
  slv->add_option("--max-preconditions,--retries", solve_cfg.precondition_retries,
                  "Random precondition budget across the whole run")
      ->default_val(std::size_t{8});
  slv->add_option("--threads", solve_cfg.threads, "Worker threads for the guess sweep")
      ->default_val(std::size_t{1});
  slv->add_flag("--require-nonzero", solve_require_nz,
                "Reject the all-zero solution (default: only for homogeneous input)");
  slv->add_flag("--allow-zero", solve_allow_zero,
                "Accept the all-zero solution even for homogeneous input");
  slv->add_flag("--timing", solve_timing, "Include wall time in the stdout report");
  slv->add_option("--report", solve_report, "Also write the report (key=value lines, no timing) here");
  slv->add_option("-o,--out", solve_out, "Write the solution to this path");

  // verify
  std::string verify_in_pos, verify_sol_pos, verify_in_opt, verify_sol_opt;
  CLI::App* ver = app.add_subcommand("verify", "Check a solution file against an instance");
  ver->add_option("input", verify_in_pos, "Instance path");
  ver->add_option("solution", verify_sol_pos, "Solution path");
  ver->add_option("--in", verify_in_opt, "Instance path (alternative to the positional)");
  ver->add_option("--sol", verify_sol_opt, "Solution path (alternative to the positional)");

  // oracle
  std::string oracle_in_pos, oracle_in_opt;
  bool oracle_all = false;
  std::uint64_t oracle_budget = std::uint64_t{1} << 24;
  CLI::App* orc = app.add_subcommand("oracle", "Solve by exhaustive enumeration (small q^n only)");
  orc->add_option("input", oracle_in_pos, "Instance path");
  orc->add_option("--in", oracle_in_opt, "Instance path (alternative to the positional)");
  orc->add_flag("--all", oracle_all, "List every solution");
  orc->add_option("--budget,--max-points", oracle_budget, "Enumeration budget (points)")
      ->default_val(std::uint64_t{1} << 24);

  // ranges
  std::size_t ranges_m_min = 1, ranges_m_max = 64;
  std::string ranges_char = "even";
  bool ranges_csv = false;
  CLI::App* rng_cmd = app.add_subcommand("ranges", "Print applicability thresholds");
  rng_cmd->add_option("--m-min", ranges_m_min, "Smallest equation count")
      ->default_val(std::size_t{1});
  rng_cmd->add_option("--m-max", ranges_m_max, "Largest equation count")
      ->default_val(std::size_t{64});
  rng_cmd->add_option("--char", ranges_char, "Characteristic class for the courtois column")
      ->check(CLI::IsMember({"even", "odd"}))
      ->default_val("even");
  rng_cmd->add_flag("--csv", ranges_csv, "Emit CSV instead of an aligned table");

  // bench
  std::string bench_field = "gf(16)";
  std::vector<std::size_t> bench_m_list;
  std::size_t bench_m_min = 2, bench_m_max = 6, bench_slack = 0, bench_trials = 3;
  std::uint64_t bench_seed = 0;
  bool bench_csv = false;
  CLI::App* ben = app.add_subcommand("bench", "Scaling sweep over m at the applicability threshold");
  ben->add_option("--field", bench_field, "Field, e.g. gf(16), 2^4, or 7")->default_val("gf(16)");
  ben->add_option("--m-list", bench_m_list, "Comma-separated equation counts")->delimiter(',');
  ben->add_option("--m-min", bench_m_min, "Smallest m (when --m-list is absent)")
      ->default_val(std::size_t{2});
  ben->add_option("--m-max", bench_m_max, "Largest m (when --m-list is absent)")
      ->default_val(std::size_t{6});
  ben->add_option("--slack", bench_slack, "Extra variables beyond m(m+1)/2")
      ->default_val(std::size_t{0});
  ben->add_option("--trials", bench_trials, "Instances per m")->default_val(std::size_t{3});
  ben->add_option("--seed", bench_seed, "RNG seed")->default_val(std::uint64_t{0});
  ben->add_flag("--csv", bench_csv, "Emit only the deterministic CSV (no timing comments)");

  CLI11_PARSE(app, argc, argv);

  const auto pick_path = [](const std::string& pos, const std::string& opt,
                            const char* what) -> std::string {
    if (!opt.empty() && !pos.empty() && opt != pos)
      throw CLI::ValidationError(std::string(what) + " given twice with different values");
    if (!opt.empty()) return opt;
    if (!pos.empty()) return pos;
    throw CLI::ValidationError(std::string(what) + " is required");
  };

  try {
    if (app.got_subcommand(gen)) {
      return run_generate(gen_field, gen_n, gen_m, gen_homogeneous, gen_plant, gen_seed, gen_out);
    }
    if (app.got_subcommand(slv)) {
      solve_cfg.guess_order =
          solve_order == "random" ? mq::GuessOrder::kRandom : mq::GuessOrder::kSequential;
      if (solve_require_nz && solve_allow_zero)
        throw CLI::ValidationError("--require-nonzero conflicts with --allow-zero");
      if (solve_require_nz) solve_cfg.require_nonzero = true;
      if (solve_allow_zero) solve_cfg.require_nonzero = false;
      return run_solve(pick_path(solve_in_pos, solve_in_opt, "instance path"), solve_cfg,
                       solve_timing, solve_out, solve_report);
    }
    if (app.got_subcommand(ver)) {
      return run_verify(pick_path(verify_in_pos, verify_in_opt, "instance path"),
                        pick_path(verify_sol_pos, verify_sol_opt, "solution path"));
    }
    if (app.got_subcommand(orc)) {
      return run_oracle(pick_path(oracle_in_pos, oracle_in_opt, "instance path"), oracle_all,
                        oracle_budget);
    }
    if (app.got_subcommand(rng_cmd))
      return run_ranges(ranges_m_min, ranges_m_max, ranges_char, ranges_csv);
    if (app.got_subcommand(ben)) {
      std::vector<std::size_t> ms = bench_m_list;
      if (ms.empty())
        for (std::size_t m = bench_m_min; m <= bench_m_max; ++m) ms.push_back(m);
      return run_bench(bench_field, ms, bench_slack, bench_trials, bench_seed, bench_csv);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const mq::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const mq::ApplicabilityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInapplicable;
  } catch (const mq::BudgetExceededError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInapplicable;
  } catch (const mq::ReductionFailedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitReductionFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
