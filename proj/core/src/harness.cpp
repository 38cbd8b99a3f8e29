#include "rolr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "rolr/baselines.hpp"
#include "rolr/csv.hpp"

namespace rolr {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// --- config parsing ---------------------------------------------------------

void reject_unknown(const json& obj, std::string_view where,
                    std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <class T>
void read_opt(const json& obj, const char* key, std::optional<T>& out) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  T v{};
  read(obj, key, v);
  out = v;
}

void parse_problem(const json& j, ExperimentConfig& cfg) {
  reject_unknown(j, "problem",
                 {"n_terms", "gamma", "r", "nu", "q", "s_mag", "g_exponent", "normalize",
                  "g_coeffs", "eigenvalues", "beta"});
  ProblemParams& p = cfg.problem;
  read(j, "n_terms", p.n_terms);
  read(j, "gamma", p.gamma);
  read(j, "r", p.r);
  read(j, "nu", p.noise.nu);
  read(j, "q", p.noise.q);
  read(j, "s_mag", p.noise.spike);
  read(j, "g_exponent", p.g_law.exponent);
  read(j, "normalize", p.g_law.normalize);
  read(j, "g_coeffs", p.g_law.explicit_coeffs);
  read(j, "eigenvalues", p.eigenvalues);
  read_opt(j, "beta", cfg.beta);
}

void parse_schedule(const json& j, ExperimentConfig& cfg) {
  reject_unknown(j, "schedule", {"type", "eta0", "eta", "eta_exponent", "sigma"});
  std::string type = "l2";
  read(j, "type", type);
  if (type == "l2") {
    cfg.schedule = ScheduleKind::l2;
  } else if (type == "rkhs") {
    cfg.schedule = ScheduleKind::rkhs;
  } else if (type == "manual") {
    cfg.schedule = ScheduleKind::manual;
  } else {
    throw ConfigError("schedule type must be l2, rkhs or manual, got '" + type + "'");
  }
  read_opt(j, "eta0", cfg.eta0);
  read(j, "eta", cfg.manual_eta);
  read(j, "eta_exponent", cfg.manual_eta_exponent);
  read_opt(j, "sigma", cfg.sigma);
}

// --- helpers ----------------------------------------------------------------

double mean_of(std::span<const double> v) {
  return v.empty() ? kNaN : pairwise_sum(v) / static_cast<double>(v.size());
}

double std_error_of(std::span<const double> v, double mean) {
  if (v.size() < 2) return kNaN;
  std::vector<double> sq(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
  const double var = pairwise_sum(sq) / static_cast<double>(v.size() - 1);
  return std::sqrt(var / static_cast<double>(v.size()));
}

double median_of(std::vector<double> v) {
  if (v.empty()) return kNaN;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string cell_tag(std::size_t T, std::uint64_t seed) {
  std::ostringstream os;
  os << "T=" << T << ";seed=" << seed;
  return os.str();
}

// Of a per-step suite keep only the record closest to failing.
std::optional<BoundCheckRecord> worst(std::vector<BoundCheckRecord> recs, const std::string& tag) {
  if (recs.empty()) return std::nullopt;
  const auto rel = [](const BoundCheckRecord& r) { return r.slack / std::max(1.0, std::abs(r.rhs)); };
  auto it = std::min_element(recs.begin(), recs.end(),
                             [&](const auto& a, const auto& b) { return rel(a) < rel(b); });
  BoundCheckRecord out = *it;
  const bool every = all_passed(recs);
  out.params = tag + ";" + out.params;
  if (out.note.empty()) {
    out.note = "worst of " + std::to_string(recs.size()) + " steps" + (every ? "" : "; violations");
  }
  return out;
}

struct Context {
  const ExperimentConfig& cfg;
  const SyntheticProblem& problem;
  const Kernel& kernel;
  WindowingFunction loss;
  double kappa;
};

std::unique_ptr<Kernel> learner_kernel(const ExperimentConfig& cfg) {
  if (cfg.kernel == KernelKind::gaussian) return std::make_unique<GaussianKernel>(cfg.gaussian_bandwidth);
  return nullptr;  // use the problem's kernel
}

double effective_beta(const ExperimentConfig& cfg) {
  if (cfg.beta && *cfg.beta < 1.0) return *cfg.beta;
  // Smallest capacity certified by the spectrum, kept strictly inside (1/gamma, 1).
  return std::min(0.999, 1.0 / cfg.problem.gamma + 1e-3);
}

CellResult failed_cell(CellResult c, const std::exception& e) {
  c.diverged = true;
  c.message = e.what();
  c.errors.l2_sq = c.errors.rkhs_sq = c.errors.excess_risk = kNaN;
  return c;
}

std::vector<CellResult> run_cell_ctx(const Context& ctx, std::size_t T, std::uint64_t seed,
                                     std::size_t seed_index) {
  const ExperimentConfig& cfg = ctx.cfg;
  const std::vector<Sample> samples = ctx.problem.sample(T, seed);
  const Schedule sched = resolve_schedule(cfg, ctx.loss, ctx.kappa, T);
  const std::string tag = cell_tag(T, seed);

  std::vector<CellResult> out;
  CellResult base;
  base.T = T;
  base.seed_index = seed_index;
  base.seed = seed;
  base.schedule = std::string(to_string(cfg.schedule));

  {
    CellResult c = base;
    c.learner = "online";
    c.loss = ctx.loss.label();
    c.eta = sched.eta;
    c.sigma = sched.sigma_min;
    try {
      RunOutput run_out = run(samples, sched.eta, sched.sigma_min, ctx.loss, ctx.kernel,
                              cfg.representation, cfg.check_bounds);
      c.errors = evaluate(run_out, ctx.problem, cfg.eval);
      if (cfg.check_bounds) {
        const double M = ctx.problem.M();
        if (auto r = worst(prop2_check(run_out.log, M, ctx.loss.c_w(), sched.eta, ctx.kappa), tag)) {
          c.bounds.push_back(*r);
        }
        if (auto r = worst(esigma_bound_check(run_out.log, ctx.loss, M, ctx.kappa, sched.eta, T,
                                              sched.sigma_min),
                           tag)) {
          c.bounds.push_back(*r);
        }
      }
    } catch (const DivergenceError& e) {
      c = failed_cell(std::move(c), e);
    }
    out.push_back(std::move(c));
  }

  if (cfg.baselines) {
    const WindowingFunction ls = WindowingFunction::identity();
    CellResult c = base;
    c.learner = "online_ls";
    c.loss = ls.label();
    // Same effective step as the robust learner near zero residual.
    c.eta = sched.eta * ctx.loss.w_plus_zero();
    c.sigma = 1.0;
    try {
      RunOutput ls_out = run(samples, c.eta, 1.0, ls, ctx.kernel, cfg.representation, false);
      c.errors = evaluate(ls_out, ctx.problem, cfg.eval);
    } catch (const DivergenceError& e) {
      c = failed_cell(std::move(c), e);
    }
    out.push_back(std::move(c));

    CellResult b = base;
    b.learner = "batch_gd";
    b.loss = ctx.loss.label();
    b.schedule = "early_stop";
    BatchGDOptions opt;
    opt.sigma = sched.sigma_min;
    opt.eta1 = 1.0 / (ctx.kappa * ctx.kappa * ctx.loss.c_w());
    opt.n_iters = early_stop_iters(T, effective_beta(cfg), 0.0);
    b.eta = opt.eta1;
    b.sigma = opt.sigma;
    try {
      const BatchGDState st = batch_gd_run(samples, ctx.loss, ctx.kernel, opt);
      b.errors = evaluate(st.expansion(), ctx.problem, cfg.eval);
    } catch (const DivergenceError& e) {
      b = failed_cell(std::move(b), e);
    }
    out.push_back(std::move(b));
  }
  return out;
}

SyntheticProblem build_problem(const ExperimentConfig& cfg) {
  try {
    return make_problem(cfg.problem);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
}

WindowingFunction build_loss(const ExperimentConfig& cfg) {
  try {
    return cfg.loss.make();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("loss: ") + e.what());
  }
}

double learner_kappa(const ExperimentConfig& cfg, const SyntheticProblem& problem) {
  return cfg.kernel == KernelKind::gaussian ? 1.0 : problem.kernel().kappa_bound();
}

}  // namespace

// --- public -----------------------------------------------------------------

std::string_view to_string(ScheduleKind s) {
  switch (s) {
    case ScheduleKind::l2: return "l2";
    case ScheduleKind::rkhs: return "rkhs";
    case ScheduleKind::manual: return "manual";
  }
  return "manual";
}

WindowingFunction LossSpec::make() const {
  return WindowingFunction::from_name(name, tukey_c, identity_half_scale);
}

ExperimentConfig parse_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j, "config",
                 {"problem", "kernel", "loss", "schedule", "T_grid", "seeds", "base_seed",
                  "representation", "baselines", "check_bounds", "threads", "output", "mc_points"});
  ExperimentConfig cfg;
  if (j.contains("problem")) parse_problem(j.at("problem"), cfg);
  if (j.contains("kernel")) {
    const json& k = j.at("kernel");
    reject_unknown(k, "kernel", {"type", "bandwidth"});
    std::string type = "spectral";
    read(k, "type", type);
    if (type == "spectral") {
      cfg.kernel = KernelKind::spectral;
    } else if (type == "gaussian") {
      cfg.kernel = KernelKind::gaussian;
    } else {
      throw ConfigError("kernel type must be spectral or gaussian, got '" + type + "'");
    }
    read(k, "bandwidth", cfg.gaussian_bandwidth);
  }
  if (j.contains("loss")) {
    const json& l = j.at("loss");
    if (l.is_string()) {
      cfg.loss.name = l.get<std::string>();
    } else {
      reject_unknown(l, "loss", {"name", "c", "half_scale"});
      read(l, "name", cfg.loss.name);
      read(l, "c", cfg.loss.tukey_c);
      read(l, "half_scale", cfg.loss.identity_half_scale);
    }
  }
  if (j.contains("schedule")) parse_schedule(j.at("schedule"), cfg);
  read(j, "T_grid", cfg.T_grid);
  read(j, "seeds", cfg.seeds);
  read(j, "base_seed", cfg.base_seed);
  if (j.contains("representation")) {
    std::string rep;
    read(j, "representation", rep);
    try {
      cfg.representation = parse_representation(rep);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  read(j, "baselines", cfg.baselines);
  read(j, "check_bounds", cfg.check_bounds);
  read(j, "threads", cfg.threads);
  read(j, "output", cfg.output);
  read(j, "mc_points", cfg.eval.mc_points);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

double resolve_eta0(const ExperimentConfig& config, const WindowingFunction& loss, double kappa) {
  return config.eta0.value_or(min_eta0(loss, kappa));
}

Schedule resolve_schedule(const ExperimentConfig& config, const WindowingFunction& loss,
                          double kappa, std::size_t T) {
  if (config.schedule == ScheduleKind::manual) {
    if (!config.sigma) throw ConfigError("manual schedule needs sigma");
    return {config.manual_eta * std::pow(static_cast<double>(T), -config.manual_eta_exponent),
            *config.sigma};
  }
  const double eta0 = resolve_eta0(config, loss, kappa);
  Schedule s;
  try {
    s = config.schedule == ScheduleKind::l2
            ? schedule_l2(T, config.problem.r, eta0, loss, kappa)
            : schedule_rkhs(T, config.problem.r, config.beta.value_or(kNaN), eta0, loss, kappa);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("schedule: ") + e.what());
  }
  if (config.sigma) {
    if (*config.sigma < s.sigma_min) {
      std::ostringstream os;
      os << "sigma = " << *config.sigma << " is below the schedule floor " << s.sigma_min
         << " at T = " << T;
      throw ConfigError(os.str());
    }
    s.sigma_min = *config.sigma;
  }
  return s;
}

void validate(const ExperimentConfig& config) {
  if (config.T_grid.empty()) throw ConfigError("T_grid must not be empty");
  for (std::size_t T : config.T_grid) {
    if (T < 1) throw ConfigError("every T in T_grid must be >= 1");
  }
  if (config.seeds < 1) throw ConfigError("seeds must be >= 1");
  if (config.kernel == KernelKind::gaussian) {
    if (!(config.gaussian_bandwidth > 0.0)) throw ConfigError("gaussian bandwidth must be > 0");
    if (config.representation == Representation::feature) {
      throw ConfigError("feature representation requires the spectral kernel");
    }
  }
  const SyntheticProblem problem = build_problem(config);
  const WindowingFunction loss = build_loss(config);
  if (config.beta) {
    const double b = *config.beta;
    if (!(b > 0.0 && b <= 1.0)) throw ConfigError("capacity beta must lie in (0, 1]");
    if (config.problem.eigenvalues.empty() && !(b * config.problem.gamma > 1.0)) {
      throw ConfigError("capacity beta must satisfy beta * gamma > 1");
    }
  }
  if (config.schedule == ScheduleKind::rkhs) {
    if (!config.beta) throw ConfigError("rkhs schedule needs a declared capacity beta");
    if (!(*config.beta < 1.0)) throw ConfigError("rkhs schedule needs beta < 1");
    if (!(config.problem.r > 0.5)) throw ConfigError("rkhs schedule needs r > 1/2");
  }
  if (config.schedule == ScheduleKind::manual) {
    if (!(config.manual_eta > 0.0)) throw ConfigError("manual schedule needs eta > 0");
    if (!config.sigma || !(*config.sigma > 0.0)) throw ConfigError("manual schedule needs sigma > 0");
  } else {
    const double kappa = learner_kappa(config, problem);
    const double eta0 = resolve_eta0(config, loss, kappa);
    const double floor = min_eta0(loss, kappa);
    if (eta0 < floor * (1.0 - 1e-12)) {
      std::ostringstream os;
      os << "eta0 = " << eta0 << " is below min_eta0 = " << floor;
      throw ConfigError(os.str());
    }
    for (std::size_t T : config.T_grid) resolve_schedule(config, loss, kappa, T);
  }
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

RateFit fit_rate(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("fit_rate needs at least 3 points");
  const double n = static_cast<double>(points.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [T, e] : points) {
    if (!(T > 0.0) || !(e > 0.0)) throw std::invalid_argument("fit_rate needs positive T and errors");
    mx += std::log(T);
    my += std::log(e);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& [T, e] : points) {
    const double dx = std::log(T) - mx;
    const double dy = std::log(e) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_rate needs at least two distinct T values");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

const AggregateRow* ExperimentResult::aggregate(std::size_t T, std::string_view learner) const {
  for (const AggregateRow& a : aggregates) {
    if (a.T == T && a.learner == learner) return &a;
  }
  return nullptr;
}

const SlopeRow* ExperimentResult::slope(std::string_view target, std::string_view learner) const {
  for (const SlopeRow& s : slopes) {
    if (s.target == target && s.learner == learner) return &s;
  }
  return nullptr;
}

std::vector<CellResult> run_cell(const ExperimentConfig& config, std::size_t T, std::uint64_t seed) {
  const SyntheticProblem problem = build_problem(config);
  const auto gk = learner_kernel(config);
  const Context ctx{config, problem, gk ? static_cast<const Kernel&>(*gk) : static_cast<const Kernel&>(problem.kernel()), build_loss(config),
                    learner_kappa(config, problem)};
  return run_cell_ctx(ctx, T, seed, 0);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  const SyntheticProblem problem = build_problem(config);
  const auto gk = learner_kernel(config);
  const Context ctx{config, problem, gk ? static_cast<const Kernel&>(*gk) : static_cast<const Kernel&>(problem.kernel()), build_loss(config),
                    learner_kappa(config, problem)};

  std::vector<std::size_t> grid = config.T_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  const std::size_t n_cells = grid.size() * config.seeds;
  std::vector<std::vector<CellResult>> slots(n_cells);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < n_cells; i = next++) {
      const std::size_t T = grid[i / config.seeds];
      const std::size_t s = i % config.seeds;
      try {
        slots[i] = run_cell_ctx(ctx, T, config.base_seed + s, s);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::size_t threads = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
  threads = std::clamp<std::size_t>(threads, 1, n_cells);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  for (auto& slot : slots) {
    for (CellResult& c : slot) result.cells.push_back(std::move(c));
  }

  std::vector<std::string> learners{"online"};
  if (config.baselines) {
    learners.emplace_back("online_ls");
    learners.emplace_back("batch_gd");
  }
  for (std::size_t T : grid) {
    for (const std::string& name : learners) {
      std::vector<double> l2;
      std::vector<double> rk;
      std::vector<double> ex;
      for (const CellResult& c : result.cells) {
        if (c.T != T || c.learner != name || c.diverged) continue;
        l2.push_back(c.errors.l2_sq);
        rk.push_back(c.errors.rkhs_sq);
        ex.push_back(c.errors.excess_risk);
      }
      AggregateRow a;
      a.T = T;
      a.learner = name;
      a.n_ok = l2.size();
      a.mean_l2 = mean_of(l2);
      a.se_l2 = std_error_of(l2, a.mean_l2);
      a.median_l2 = median_of(l2);
      a.mean_rkhs = mean_of(rk);
      a.se_rkhs = std_error_of(rk, a.mean_rkhs);
      a.median_rkhs = median_of(rk);
      a.mean_excess = mean_of(ex);
      result.aggregates.push_back(a);
    }
  }

  const double r = config.problem.r;
  for (const std::string& name : learners) {
    for (const char* target : {"l2", "rkhs"}) {
      SlopeRow row;
      row.target = target;
      row.learner = name;
      row.theory_slope = kNaN;
      if (name == "online") {
        if (row.target == "l2" && config.schedule == ScheduleKind::l2) {
          row.theory_slope = -2.0 * r / (2.0 * r + 1.0);
        } else if (row.target == "rkhs" && config.schedule == ScheduleKind::rkhs) {
          row.theory_slope = -(2.0 * r - 1.0) / (2.0 * r + *config.beta);
        }
      }
      std::vector<std::pair<double, double>> pts;
      for (const AggregateRow& a : result.aggregates) {
        if (a.learner != name) continue;
        const double v = row.target == "l2" ? a.mean_l2 : a.mean_rkhs;
        if (a.n_ok > 0 && v > 0.0 && std::isfinite(v)) pts.emplace_back(static_cast<double>(a.T), v);
      }
      if (pts.size() >= 3) {
        row.fit = fit_rate(pts);
        row.fitted = true;
      } else {
        row.fit = {kNaN, kNaN, kNaN};
        row.note = "slope fit needs at least 3 distinct T values with finite errors";
      }
      result.slopes.push_back(row);
    }
  }

  for (const CellResult& c : result.cells) {
    for (const BoundCheckRecord& b : c.bounds) result.bounds.push_back(b);
  }
  if (config.schedule != ScheduleKind::manual && config.kernel == KernelKind::spectral) {
    const double eta0 = resolve_eta0(config, ctx.loss, ctx.kappa);
    const double beta = config.schedule == ScheduleKind::rkhs ? *config.beta : 1.0;
    const TheoryInputs in = theory_inputs(problem, ctx.loss, eta0, beta);
    for (std::size_t T : grid) {
      const Schedule s = resolve_schedule(config, ctx.loss, ctx.kappa, T);
      for (BoundCheckRecord& b : step_size_conditions(ctx.loss, ctx.kappa, eta0, s.eta, T)) {
        if (!b.params.starts_with("T=")) b.params = "T=" + std::to_string(T) + ";" + b.params;
        result.bounds.push_back(std::move(b));
      }
      const AggregateRow* a = result.aggregate(T);
      if (a == nullptr || a->n_ok == 0) continue;
      result.bounds.push_back(config.schedule == ScheduleKind::l2
                                  ? theorem1_sanity(a->mean_l2, in, T, s.sigma_min)
                                  : theorem2_sanity(a->mean_rkhs, in, T, s.sigma_min));
    }
  }
  result.bounds_passed = all_passed(result.bounds);
  return result;
}

// --- CSV --------------------------------------------------------------------

void write_results_csv(std::ostream& os, const ExperimentResult& result) {
  CsvWriter csv(os);
  csv.row("T", "seed", "loss", "schedule", "eta", "sigma", "l2_sq", "rkhs_sq", "excess_risk",
          "diverged", "learner");
  for (const CellResult& c : result.cells) {
    csv.row(c.T, c.seed, c.loss, c.schedule, c.eta, c.sigma, c.errors.l2_sq, c.errors.rkhs_sq,
            c.errors.excess_risk, c.diverged, c.learner);
  }
}

void write_aggregate_csv(std::ostream& os, const ExperimentResult& result) {
  CsvWriter csv(os);
  csv.row("T", "mean_l2", "se_l2", "mean_rkhs", "se_rkhs", "median_l2", "median_rkhs",
          "mean_excess", "n_ok", "learner");
  for (const AggregateRow& a : result.aggregates) {
    csv.row(a.T, a.mean_l2, a.se_l2, a.mean_rkhs, a.se_rkhs, a.median_l2, a.median_rkhs,
            a.mean_excess, a.n_ok, a.learner);
  }
}

void write_slopes_csv(std::ostream& os, const ExperimentResult& result) {
  CsvWriter csv(os);
  csv.row("target", "slope", "theory_slope", "r_squared", "intercept", "learner");
  for (const SlopeRow& s : result.slopes) {
    csv.row(s.target, s.fit.slope, s.theory_slope, s.fit.r_squared, s.fit.intercept, s.learner);
  }
}

void write_bounds_csv(std::ostream& os, std::span<const BoundCheckRecord> records) {
  CsvWriter csv(os);
  csv.row("name", "params", "lhs", "rhs", "slack", "pass", "informational", "note");
  for (const BoundCheckRecord& b : records) {
    csv.row(b.name, b.params, b.lhs, b.rhs, b.slack, b.pass, b.informational, b.note);
  }
}

void write_outputs(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("results.csv");
    write_results_csv(f, result);
  }
  {
    auto f = open("aggregate.csv");
    write_aggregate_csv(f, result);
  }
  {
    auto f = open("slopes.csv");
    write_slopes_csv(f, result);
  }
  {
    auto f = open("bounds.csv");
    write_bounds_csv(f, result.bounds);
  }
}

}  // namespace rolr
