#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "rolr/baselines.hpp"
#include "rolr/learner.hpp"
#include "rolr/problems.hpp"

namespace rolr {

using Predictor = std::function<double(double)>;

/// Coefficients of an estimator in the eigenbasis {phi_k} of a spectral kernel.
/// For f = sum_i a_i K_{x_i}: fhat_k = lambda_k sum_i a_i phi_k(x_i).
/// Throws std::invalid_argument when the expansion's kernel is not spectral.
std::vector<double> estimator_coeffs(const KernelExpansion& f);
std::vector<double> estimator_coeffs(const FeatureLearner& learner);
std::vector<double> estimator_coeffs(const RunOutput& out);

/// sum_k (fhat_k - theta_k)^2.
double l2_error_exact(std::span<const double> coeffs, const SyntheticProblem& problem);
/// sum_k (fhat_k - theta_k)^2 / lambda_k.
double rkhs_error_exact(std::span<const double> coeffs, const SyntheticProblem& problem);

/// ||f - f_rho||_K^2 = a^T G a - 2 sum_i a_i f_rho(x_i) + ||f_rho||_K^2, using only
/// kernel evaluations and point values of f_rho.
double rkhs_error_gram(const KernelExpansion& f, const SyntheticProblem& problem);

/// Expected risk E(f) = E[(f(x) - y)^2], averaging the noise law in closed form
/// and integrating over x with an n-point midpoint rule (default 4N, which is
/// exact for the problem's trigonometric polynomials).
double expected_risk(const Predictor& f, const SyntheticProblem& problem, std::size_t n_points = 0);
/// E(f) - E(f_rho).
double excess_risk(const Predictor& f, const SyntheticProblem& problem, std::size_t n_points = 0);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// (1/n) sum_j (f(u_j) - f_rho(u_j))^2 with u_j ~ Uniform[0, 1].
McEstimate l2_error_mc(const Predictor& f, const SyntheticProblem& problem, std::size_t n_points,
                       std::uint64_t seed);

enum class ErrorMethod { exact, gram, mc, quad, unavailable };
std::string_view to_string(ErrorMethod m);

struct ErrorReport {
  double l2_sq = 0.0;
  double rkhs_sq = 0.0;
  double excess_risk = 0.0;
  ErrorMethod l2_method = ErrorMethod::exact;
  ErrorMethod rkhs_method = ErrorMethod::exact;
  ErrorMethod excess_method = ErrorMethod::quad;
};

struct EvalOptions {
  std::size_t mc_points = 100000;
  std::uint64_t mc_seed = 0x5eed;
};

/// Final-iterate errors. Spectral estimators get exact coefficient norms and a
/// quadrature excess risk; other kernels fall back to Monte Carlo for L2 and
/// excess risk and report no RKHS error.
ErrorReport evaluate(const RunOutput& out, const SyntheticProblem& problem,
                     const EvalOptions& options = {});
ErrorReport evaluate(const KernelExpansion& f, const SyntheticProblem& problem,
                     const EvalOptions& options = {});

}  // namespace rolr
