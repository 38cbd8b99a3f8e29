#include "rolr/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rolr/harness.hpp"
#include "rolr/kernels.hpp"
#include "rolr/learner.hpp"
#include "rolr/losses.hpp"
#include "rolr/problems.hpp"
#include "rolr/random.hpp"
#include "rolr/theory.hpp"

namespace rolr {
namespace {

struct CommonFlags {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::size_t threads = 0;
  std::string representation;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--seed", f.seed, "Base seed");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)")->envname("ROLR_THREADS");
  cmd->add_option("--representation", f.representation, "dual or feature")
      ->check(CLI::IsMember({"dual", "feature"}));
}

void apply_common(const CommonFlags& f, ExperimentConfig& cfg) {
  if (f.seed) cfg.base_seed = *f.seed;
  if (f.threads != 0) cfg.threads = f.threads;
  if (!f.representation.empty()) cfg.representation = parse_representation(f.representation);
  if (!f.out.empty()) cfg.output = f.out;
}

// ---------------------------------------------------------------------------

int cmd_check_losses(std::ostream& out, double lo, double hi, std::size_t n) {
  const std::vector<double> grid = log_grid(lo, hi, n);
  out << std::left << std::setw(16) << "loss" << std::setw(8) << "W'+(0)" << std::setw(8) << "C_W"
      << std::setw(6) << "p" << std::setw(8) << "c_p" << std::setw(14) << "min W'" << std::setw(14)
      << "C_W slack" << std::setw(14) << "holder slack" << "status\n";
  bool unexpected = false;
  for (const WindowingFunction& w : builtin_windows()) {
    const ConditionReport rep = check_conditions(w, grid);
    std::string status = "ok";
    const bool core_ok = rep.right_derivative_positive && rep.nonnegative &&
                         rep.derivative_bounded && rep.holder;
    if (!core_ok) {
      status = "FAIL";
      unexpected = true;
    } else if (!rep.strictly_positive) {
      if (w.kind() == WindowKind::tukey) {
        status = "caveat: W'(s) = 0 for s > 1, strict positivity fails";
      } else {
        status = "FAIL (W' not strictly positive)";
        unexpected = true;
      }
    }
    out << std::left << std::setw(16) << w.label() << std::setw(8) << w.w_plus_zero()
        << std::setw(8) << w.c_w() << std::setw(6) << w.p() << std::setw(8) << w.c_p()
        << std::setw(14) << rep.min_derivative << std::setw(14) << rep.bound_slack
        << std::setw(14) << rep.holder_slack << status << '\n';
  }
  return unexpected ? kExitBounds : kExitOk;
}

// ---------------------------------------------------------------------------

struct RunFlags {
  std::string config;
  std::size_t T = 1024;
  std::string loss;
  std::string schedule;
  std::optional<double> gamma, r, nu, q, s_mag, eta0, beta, eta, sigma;
  std::optional<std::size_t> n_terms;
  bool baselines = false;
  std::string data_out;
};

int cmd_run(std::ostream& out, const RunFlags& f, const CommonFlags& common) {
  ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  apply_common(common, cfg);
  if (!f.loss.empty()) cfg.loss.name = f.loss;
  if (!f.schedule.empty()) {
    if (f.schedule == "l2") {
      cfg.schedule = ScheduleKind::l2;
    } else if (f.schedule == "rkhs") {
      cfg.schedule = ScheduleKind::rkhs;
    } else if (f.schedule == "manual") {
      cfg.schedule = ScheduleKind::manual;
    } else {
      throw ConfigError("schedule must be l2, rkhs or manual");
    }
  }
  if (f.gamma) cfg.problem.gamma = *f.gamma;
  if (f.r) cfg.problem.r = *f.r;
  if (f.nu) cfg.problem.noise.nu = *f.nu;
  if (f.q) cfg.problem.noise.q = *f.q;
  if (f.s_mag) cfg.problem.noise.spike = *f.s_mag;
  if (f.n_terms) cfg.problem.n_terms = *f.n_terms;
  if (f.eta0) cfg.eta0 = f.eta0;
  if (f.beta) cfg.beta = f.beta;
  if (f.eta) cfg.manual_eta = *f.eta;
  if (f.sigma) cfg.sigma = f.sigma;
  if (f.baselines) cfg.baselines = true;
  cfg.T_grid = {f.T};
  cfg.seeds = 1;
  validate(cfg);

  if (!f.data_out.empty()) {
    const SyntheticProblem problem = make_problem(cfg.problem);
    std::ofstream data(f.data_out);
    if (!data) throw std::runtime_error("cannot write " + f.data_out);
    write_samples_csv(data, problem.sample(f.T, cfg.base_seed));
  }

  ExperimentResult result;
  result.cells = run_cell(cfg, f.T, cfg.base_seed);
  out << std::left << std::setw(11) << "learner" << std::setw(14) << "eta" << std::setw(12)
      << "sigma" << std::setw(14) << "l2_sq" << std::setw(14) << "rkhs_sq" << std::setw(14)
      << "excess_risk" << "methods\n";
  for (const CellResult& c : result.cells) {
    out << std::left << std::setw(11) << c.learner << std::setw(14) << c.eta << std::setw(12)
        << c.sigma;
    if (c.diverged) {
      out << "diverged: " << c.message << '\n';
      continue;
    }
    out << std::setw(14) << c.errors.l2_sq << std::setw(14) << c.errors.rkhs_sq << std::setw(14)
        << c.errors.excess_risk << to_string(c.errors.l2_method) << '/'
        << to_string(c.errors.rkhs_method) << '/' << to_string(c.errors.excess_method) << '\n';
  }
  bool ok = true;
  for (const CellResult& c : result.cells) {
    for (const BoundCheckRecord& b : c.bounds) {
      result.bounds.push_back(b);
      if (!b.informational && !b.pass) ok = false;
    }
  }
  if (!cfg.output.empty()) {
    std::filesystem::create_directories(cfg.output);
    std::ofstream res(std::filesystem::path(cfg.output) / "results.csv");
    write_results_csv(res, result);
    std::ofstream bnd(std::filesystem::path(cfg.output) / "bounds.csv");
    write_bounds_csv(bnd, result.bounds);
  }
  return ok ? kExitOk : kExitBounds;
}

// ---------------------------------------------------------------------------

int cmd_sweep(std::ostream& out, const std::string& config_path, const CommonFlags& common) {
  ExperimentConfig cfg = load_config(config_path);
  apply_common(common, cfg);
  const ExperimentResult result = run_experiment(cfg);
  const std::string dir = cfg.output.empty() ? "rolr-out" : cfg.output;
  write_outputs(result, dir);

  std::size_t diverged = 0;
  for (const CellResult& c : result.cells) diverged += c.diverged ? 1 : 0;
  out << "cells: " << result.cells.size() << " (diverged " << diverged << ")\n";
  for (const AggregateRow& a : result.aggregates) {
    out << "T=" << a.T << ' ' << a.learner << " mean_l2=" << a.mean_l2 << " se=" << a.se_l2
        << " mean_rkhs=" << a.mean_rkhs << '\n';
  }
  for (const SlopeRow& s : result.slopes) {
    out << "slope " << s.target << ' ' << s.learner << ": ";
    if (s.fitted) {
      out << s.fit.slope << " (theory " << s.theory_slope << ", R^2 " << s.fit.r_squared << ")\n";
    } else {
      out << "not fitted, " << s.note << '\n';
    }
  }
  out << "bound checks: " << (result.bounds_passed ? "all passed" : "FAILURES") << '\n';
  out << "wrote " << dir << '\n';
  return result.bounds_passed ? kExitOk : kExitBounds;
}

// ---------------------------------------------------------------------------

struct Suite {
  std::string name;
  std::vector<BoundCheckRecord> records;
};

Suite suite_lemma1() {
  Suite s{"lemma1", {}};
  for (double gamma : {1.5, 2.0, 4.0}) {
    const SpectralKernel k = SpectralKernel::power_law(256, gamma);
    for (double w : {0.5, 1.0}) {
      for (double alpha : {0.25, 0.5, 1.0, 2.0}) {
        for (double steps : {1.0, 10.0, 100.0, 1000.0}) {
          for (double eta : {1e-3, 1e-2}) {
            s.records.push_back(lemma1_check(k.eigenvalues(), alpha, steps, eta, w));
          }
        }
      }
    }
  }
  return s;
}

ProblemParams verification_problem() {
  ProblemParams p;
  p.n_terms = 64;
  p.gamma = 2.0;
  p.r = 0.5;
  p.noise = {0.5, 0.1, 2.5};
  return p;
}

Suite suite_prop2(std::uint64_t seed) {
  Suite s{"prop2", {}};
  const SyntheticProblem problem = make_problem(verification_problem());
  const double kappa = problem.kernel().kappa_bound();
  const CounterRng rng(seed ^ 0x9e37);
  std::uint64_t run_index = 0;
  for (const WindowingFunction& loss : builtin_windows()) {
    for (int rep = 0; rep < 3; ++rep, ++run_index) {
      const double u = 0.1 + 0.9 * rng.uniform(run_index, 0);
      const double eta = u / (kappa * kappa * loss.c_w());
      const auto samples = problem.sample(1000, seed + run_index);
      const RunOutput o = run(samples, eta, 1.0, loss, problem.kernel(), Representation::feature, true);
      auto recs = prop2_check(o.log, problem.M(), loss.c_w(), eta, kappa);
      const auto worst = std::min_element(recs.begin(), recs.end(), [](const auto& a, const auto& b) {
        return a.slack / std::max(1.0, a.rhs) < b.slack / std::max(1.0, b.rhs);
      });
      BoundCheckRecord r = *worst;
      r.params = "loss=" + loss.label() + ";" + r.params;
      r.pass = all_passed(recs);
      s.records.push_back(r);
    }
  }
  return s;
}

Suite suite_esigma(std::uint64_t seed) {
  Suite s{"esigma", {}};
  const SyntheticProblem problem = make_problem(verification_problem());
  const double kappa = problem.kernel().kappa_bound();
  const std::size_t T = 1024;
  for (const WindowingFunction& loss : {WindowingFunction::welsch(), WindowingFunction::cauchy()}) {
    const Schedule sch = schedule_l2(T, problem.r(), min_eta0(loss, kappa), loss, kappa);
    for (std::uint64_t rep = 0; rep < 3; ++rep) {
      const auto samples = problem.sample(T, seed + rep);
      const RunOutput o =
          run(samples, sch.eta, sch.sigma_min, loss, problem.kernel(), Representation::feature, true);
      auto recs = esigma_bound_check(o.log, loss, problem.M(), kappa, sch.eta, T, sch.sigma_min);
      const auto worst = std::min_element(recs.begin(), recs.end(),
                                          [](const auto& a, const auto& b) { return a.slack < b.slack; });
      BoundCheckRecord r = *worst;
      r.params = "loss=" + loss.label() + ";" + r.params;
      r.pass = all_passed(recs);
      s.records.push_back(r);
    }
  }
  return s;
}

Suite suite_theorems(std::uint64_t seed, std::size_t threads) {
  Suite s{"theorem", {}};
  auto collect = [&](const ExperimentConfig& cfg) {
    const ExperimentResult res = run_experiment(cfg);
    for (const BoundCheckRecord& b : res.bounds) {
      if (b.name == "theorem1" || b.name == "theorem2") s.records.push_back(b);
    }
  };
  ExperimentConfig l2;
  l2.problem = verification_problem();
  l2.T_grid = {256, 512, 1024};
  l2.seeds = 5;
  l2.base_seed = seed;
  l2.threads = threads;
  l2.check_bounds = false;
  for (const char* name : {"welsch", "identity"}) {
    l2.loss.name = name;
    collect(l2);
  }
  ExperimentConfig rk = l2;
  rk.loss.name = "welsch";
  rk.problem.gamma = 4.0;
  rk.problem.r = 1.0;
  rk.beta = 0.26;
  rk.schedule = ScheduleKind::rkhs;
  collect(rk);
  return s;
}

int cmd_verify_bounds(std::ostream& out, const CommonFlags& common) {
  const std::uint64_t seed = common.seed.value_or(1);
  std::vector<Suite> suites;
  suites.push_back(suite_lemma1());
  suites.push_back(suite_prop2(seed));
  suites.push_back(suite_esigma(seed));
  suites.push_back(suite_theorems(seed, common.threads));

  bool ok = true;
  std::vector<BoundCheckRecord> all;
  for (const Suite& s : suites) {
    std::size_t failures = 0;
    for (const BoundCheckRecord& r : s.records) failures += (!r.informational && !r.pass) ? 1 : 0;
    ok = ok && failures == 0;
    out << std::left << std::setw(10) << s.name << s.records.size() << " records, " << failures
        << " failures\n";
    all.insert(all.end(), s.records.begin(), s.records.end());
  }
  if (!common.out.empty()) {
    std::filesystem::create_directories(common.out);
    std::ofstream f(std::filesystem::path(common.out) / "bounds.csv");
    write_bounds_csv(f, all);
  }
  out << (ok ? "all bound checks passed\n" : "bound check FAILURES\n");
  return ok ? kExitOk : kExitBounds;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust online kernel regression: experiments and bound checks", "rolr"};
  app.require_subcommand(1);

  double grid_lo = 1e-6;
  double grid_hi = 1e2;
  std::size_t grid_n = 200;
  auto* check = app.add_subcommand("check-losses", "Grid-check the conditions of every built-in loss");
  check->add_option("--grid-lo", grid_lo, "Smallest grid point")->check(CLI::PositiveNumber);
  check->add_option("--grid-hi", grid_hi, "Largest grid point")->check(CLI::PositiveNumber);
  check->add_option("--grid-n", grid_n, "Number of log-spaced points")->check(CLI::PositiveNumber);

  RunFlags rf;
  CommonFlags run_common;
  auto* run_cmd = app.add_subcommand("run", "Single (T, seed) run");
  add_common(run_cmd, run_common);
  run_cmd->add_option("--config", rf.config, "Optional JSON config used as the base");
  run_cmd->add_option("--T", rf.T, "Sample size")->check(CLI::PositiveNumber);
  run_cmd->add_option("--loss", rf.loss, "Windowing function");
  run_cmd->add_option("--schedule", rf.schedule, "l2, rkhs or manual");
  run_cmd->add_option("--gamma", rf.gamma, "Eigenvalue decay exponent");
  run_cmd->add_option("--r", rf.r, "Regularity of the target");
  run_cmd->add_option("--n-terms", rf.n_terms, "Truncation length");
  run_cmd->add_option("--nu", rf.nu, "Clean noise half-width");
  run_cmd->add_option("--q", rf.q, "Contamination probability");
  run_cmd->add_option("--s-mag", rf.s_mag, "Outlier magnitude");
  run_cmd->add_option("--eta0", rf.eta0, "Step-size constant");
  run_cmd->add_option("--beta", rf.beta, "Declared capacity");
  run_cmd->add_option("--eta", rf.eta, "Manual step size");
  run_cmd->add_option("--sigma", rf.sigma, "Scale parameter");
  run_cmd->add_flag("--baselines", rf.baselines, "Also run online least squares and batch GD");
  run_cmd->add_option("--data-out", rf.data_out, "Write the sample stream as CSV");

  std::string sweep_config;
  CommonFlags sweep_common;
  auto* sweep = app.add_subcommand("sweep", "Run a sweep over T and seeds from a JSON config");
  add_common(sweep, sweep_common);
  sweep->add_option("--config", sweep_config, "JSON config")->required();

  CommonFlags verify_common;
  auto* verify = app.add_subcommand("verify-bounds", "Run the lemma and proposition checks");
  add_common(verify, verify_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (check->parsed()) return cmd_check_losses(out, grid_lo, grid_hi, grid_n);
    if (run_cmd->parsed()) return cmd_run(out, rf, run_common);
    if (sweep->parsed()) return cmd_sweep(out, sweep_config, sweep_common);
    if (verify->parsed()) return cmd_verify_bounds(out, verify_common);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("rolr");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& s : storage) argv.push_back(s.data());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rolr
