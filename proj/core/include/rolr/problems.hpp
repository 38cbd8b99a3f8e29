#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "rolr/kernels.hpp"
#include "rolr/sample.hpp"

namespace rolr {

/// How the source coefficients c_k of g_rho are generated.
struct CoefficientLaw {
  /// c_k = k^{-exponent}; ignored when `explicit_coeffs` is nonempty.
  double exponent = 0.51;
  /// Rescale so that the sup-norm bound of f_rho equals 1.
  bool normalize = true;
  std::vector<double> explicit_coeffs;
};

/// Clean noise Uniform[-nu, nu] with probability 1 - q, otherwise a symmetric
/// spike of magnitude `spike` with random sign.
struct NoiseModel {
  double nu = 0.0;
  double q = 0.0;
  double spike = 0.0;
};

struct ProblemParams {
  std::size_t n_terms = 256;
  double gamma = 2.0;
  double r = 0.5;
  CoefficientLaw g_law;
  NoiseModel noise;
  /// Overrides the k^{-gamma} spectrum when nonempty.
  std::vector<double> eigenvalues;
};

/// Regression problem on [0, 1] with exactly known target
/// f_rho = L_K^r g_rho = sum_k lambda_k^r c_k phi_k and bounded outputs |y| <= M.
/// Immutable; copies share the kernel.
class SyntheticProblem {
 public:
  const SpectralKernel& kernel() const { return *kernel_; }
  std::shared_ptr<const SpectralKernel> kernel_ptr() const { return kernel_; }

  double r() const { return r_; }
  std::size_t n_terms() const { return kernel_->n_terms(); }
  /// c_k, the basis coefficients of g_rho.
  std::span<const double> g_coeffs() const { return g_coeffs_; }
  /// lambda_k^r c_k, the basis coefficients of f_rho.
  std::span<const double> target_coeffs() const { return target_coeffs_; }
  const NoiseModel& noise() const { return noise_; }

  /// sup-norm bound |theta_1| + sqrt(2) sum_{k>=2} |theta_k| >= ||f_rho||_inf.
  double sup_bound() const { return sup_bound_; }
  /// Output bound M = sup_bound + max(nu, spike).
  double M() const { return M_; }

  double eval_target(double x) const;

  double l2_norm_sq() const;    // ||f_rho||_rho^2 = sum lambda^{2r} c^2
  double rkhs_norm_sq() const;  // ||f_rho||_K^2 = sum lambda^{2r-1} c^2
  double g_norm_sq() const;     // ||g_rho||_rho^2 = sum c^2
  /// E(f_rho) = E[(y - f_rho(x))^2] = (1 - q) nu^2 / 3 + q spike^2.
  double noise_variance() const;

  /// True iff the declared capacity beta satisfies Tr(L_K^beta) < inf for the
  /// untruncated k^{-gamma} family, i.e. beta * gamma > 1.
  bool capacity_holds(double beta) const;

  /// `count` i.i.d. draws; draw i is a pure function of (seed, i).
  std::vector<Sample> sample(std::size_t count, std::uint64_t seed) const;

 private:
  friend SyntheticProblem make_problem(const ProblemParams& params);
  SyntheticProblem() = default;

  std::shared_ptr<const SpectralKernel> kernel_;
  double r_ = 0.0;
  std::vector<double> g_coeffs_;
  std::vector<double> target_coeffs_;
  NoiseModel noise_;
  double sup_bound_ = 0.0;
  double M_ = 0.0;
  double gamma_ = 0.0;
};

/// Builds the problem; throws std::invalid_argument for gamma <= 1, r <= 0,
/// q outside [0, 1), negative noise scales, or a coefficient vector of wrong length.
SyntheticProblem make_problem(const ProblemParams& params);

/// CSV with header `t,x,y,contaminated_flag`; t is 1-based.
void write_samples_csv(std::ostream& os, std::span<const Sample> samples);

}  // namespace rolr
