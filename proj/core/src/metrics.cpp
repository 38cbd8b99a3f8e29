#include "rolr/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rolr/random.hpp"

namespace rolr {
namespace {

const SpectralKernel& require_spectral(const Kernel* kernel) {
  const auto* spectral = dynamic_cast<const SpectralKernel*>(kernel);
  if (spectral == nullptr) {
    throw std::invalid_argument("eigenbasis coefficients need a spectral kernel");
  }
  return *spectral;
}

void require_matching(std::span<const double> coeffs, const SyntheticProblem& problem) {
  if (coeffs.size() != problem.n_terms()) {
    throw std::invalid_argument("estimator and problem use different truncation lengths");
  }
}

}  // namespace

std::vector<double> estimator_coeffs(const KernelExpansion& f) {
  const SpectralKernel& kernel = require_spectral(f.kernel);
  const std::size_t n = kernel.n_terms();
  std::vector<double> out(n, 0.0);
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < f.support.size(); ++i) {
    kernel.basis(f.support[i], phi);
    for (std::size_t k = 0; k < n; ++k) out[k] += f.coeffs[i] * phi[k];
  }
  const auto lam = kernel.eigenvalues();
  for (std::size_t k = 0; k < n; ++k) out[k] *= lam[k];
  return out;
}

std::vector<double> estimator_coeffs(const FeatureLearner& learner) {
  return {learner.coeffs().begin(), learner.coeffs().end()};
}

std::vector<double> estimator_coeffs(const RunOutput& out) {
  if (const auto* f = std::get_if<FeatureLearner>(&out.state)) return estimator_coeffs(*f);
  return estimator_coeffs(std::get<DualLearner>(out.state).expansion());
}

double l2_error_exact(std::span<const double> coeffs, const SyntheticProblem& problem) {
  require_matching(coeffs, problem);
  const auto theta = problem.target_coeffs();
  double s = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double d = coeffs[k] - theta[k];
    s += d * d;
  }
  return s;
}

double rkhs_error_exact(std::span<const double> coeffs, const SyntheticProblem& problem) {
  require_matching(coeffs, problem);
  const auto theta = problem.target_coeffs();
  const auto lam = problem.kernel().eigenvalues();
  double s = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double d = coeffs[k] - theta[k];
    s += d * d / lam[k];
  }
  return s;
}

double rkhs_error_gram(const KernelExpansion& f, const SyntheticProblem& problem) {
  const std::size_t n = f.support.size();
  double quad = 0.0;
  double cross = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += f.coeffs[j] * (*f.kernel)(f.support[i], f.support[j]);
    quad += f.coeffs[i] * row;
    cross += f.coeffs[i] * problem.eval_target(f.support[i]);
  }
  return quad - 2.0 * cross + problem.rkhs_norm_sq();
}

double expected_risk(const Predictor& f, const SyntheticProblem& problem, std::size_t n_points) {
  if (n_points == 0) n_points = 4 * problem.n_terms();
  const NoiseModel& nm = problem.noise();
  // Noise expectation per mixture component, in closed form.
  const double clean = nm.nu * nm.nu / 3.0;
  double s = 0.0;
  for (std::size_t j = 0; j < n_points; ++j) {
    const double x = (static_cast<double>(j) + 0.5) / static_cast<double>(n_points);
    const double d = f(x) - problem.eval_target(x);
    const double uniform_part = d * d + clean;
    const double spike_part = 0.5 * ((d - nm.spike) * (d - nm.spike) + (d + nm.spike) * (d + nm.spike));
    s += (1.0 - nm.q) * uniform_part + nm.q * spike_part;
  }
  return s / static_cast<double>(n_points);
}

double excess_risk(const Predictor& f, const SyntheticProblem& problem, std::size_t n_points) {
  return expected_risk(f, problem, n_points) - problem.noise_variance();
}

McEstimate l2_error_mc(const Predictor& f, const SyntheticProblem& problem, std::size_t n_points,
                       std::uint64_t seed) {
  if (n_points < 1) throw std::invalid_argument("l2_error_mc needs n_points >= 1");
  const CounterRng rng(seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t j = 0; j < n_points; ++j) {
    const double u = rng.uniform(j, 0);
    const double d = f(u) - problem.eval_target(u);
    const double v = d * d;
    const double delta = v - mean;
    mean += delta / static_cast<double>(j + 1);
    m2 += delta * (v - mean);
  }
  McEstimate est;
  est.mean = mean;
  if (n_points > 1) {
    est.std_error = std::sqrt(m2 / static_cast<double>(n_points - 1) / static_cast<double>(n_points));
  }
  return est;
}

std::string_view to_string(ErrorMethod m) {
  switch (m) {
    case ErrorMethod::exact: return "exact";
    case ErrorMethod::gram: return "gram";
    case ErrorMethod::mc: return "mc";
    case ErrorMethod::quad: return "quad";
    case ErrorMethod::unavailable: return "none";
  }
  return "none";
}

namespace {

ErrorReport evaluate_impl(const std::vector<double>* coeffs, const Predictor& f,
                          const SyntheticProblem& problem, const EvalOptions& options) {
  ErrorReport rep;
  if (coeffs != nullptr) {
    rep.l2_sq = l2_error_exact(*coeffs, problem);
    rep.rkhs_sq = rkhs_error_exact(*coeffs, problem);
    rep.excess_risk = excess_risk(f, problem);
    return rep;
  }
  const McEstimate mc = l2_error_mc(f, problem, options.mc_points, options.mc_seed);
  rep.l2_sq = mc.mean;
  rep.l2_method = ErrorMethod::mc;
  rep.rkhs_sq = std::numeric_limits<double>::quiet_NaN();
  rep.rkhs_method = ErrorMethod::unavailable;
  // Same draw as the L2 estimate; the identity E(f) - E(f_rho) = ||f - f_rho||^2 is
  // exact under mean-zero noise, so there is nothing independent to add here.
  rep.excess_risk = mc.mean;
  rep.excess_method = ErrorMethod::mc;
  return rep;
}

bool is_spectral_matching(const Kernel& kernel, const SyntheticProblem& problem) {
  const auto* s = dynamic_cast<const SpectralKernel*>(&kernel);
  return s != nullptr && s->n_terms() == problem.n_terms();
}

}  // namespace

ErrorReport evaluate(const RunOutput& out, const SyntheticProblem& problem,
                     const EvalOptions& options) {
  const Predictor f = [&out](double x) { return out.predict(x); };
  if (const auto* fl = std::get_if<FeatureLearner>(&out.state)) {
    const std::vector<double> c = estimator_coeffs(*fl);
    return evaluate_impl(&c, f, problem, options);
  }
  return evaluate(std::get<DualLearner>(out.state).expansion(), problem, options);
}

ErrorReport evaluate(const KernelExpansion& g, const SyntheticProblem& problem,
                     const EvalOptions& options) {
  const Predictor f = [&g](double x) { return g(x); };
  if (is_spectral_matching(*g.kernel, problem)) {
    const std::vector<double> c = estimator_coeffs(g);
    // Evaluate f through its coefficients; point evaluation of a long expansion is
    // O(T N) per point and would dominate the run.
    const SpectralKernel& kernel = require_spectral(g.kernel);
    const Predictor via_coeffs = [&c, &kernel](double x) {
      const std::vector<double> phi = kernel.basis(x);
      double s = 0.0;
      for (std::size_t k = 0; k < phi.size(); ++k) s += c[k] * phi[k];
      return s;
    };
    return evaluate_impl(&c, via_coeffs, problem, options);
  }
  return evaluate_impl(nullptr, f, problem, options);
}

}  // namespace rolr
