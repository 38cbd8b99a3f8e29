#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

#include "rolr/kernels.hpp"
#include "rolr/losses.hpp"
#include "rolr/sample.hpp"

namespace rolr {

/// Raised when an iterate stops being finite; signals an inadmissible step size.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// What one online update saw and did. `t` is the index of the consumed sample
/// (1-based); `norm_sq` is ||f_{t+1}||_K^2 after the update.
struct StepRecord {
  std::size_t t = 0;
  double x = 0.0;
  double y = 0.0;
  double prediction = 0.0;   // f_t(x_t)
  double xi = 0.0;           // (y_t - f_t(x_t))^2 / sigma^2
  double w_prime = 0.0;      // W'(xi)
  double coefficient = 0.0;  // -eta W'(xi) (f_t(x_t) - y_t)
  double kernel_diag = 0.0;  // K(x_t, x_t)
  double norm_sq = 0.0;
};

using StepLog = std::vector<StepRecord>;

/// f = sum_i a_i K(x_i, .), a read-only view used by metrics and baselines.
struct KernelExpansion {
  std::span<const double> support;
  std::span<const double> coeffs;
  const Kernel* kernel = nullptr;

  double operator()(double x) const;
};

/// The scalar part of one update: given f_t(x) and y, returns xi, W'(xi) and the
/// new coefficient -eta W'(xi) (f_t(x) - y).
struct UpdateFactor {
  double xi;
  double w_prime;
  double coefficient;
};
UpdateFactor update_factor(const WindowingFunction& loss, double eta, double sigma,
                           double prediction, double y);

/// Online robust learner in dual form: f_{t+1} = f_t - eta W'(xi_t)(f_t(x_t) - y_t) K_{x_t},
/// starting from f_1 = 0. Every visited input is kept as a support point.
///
/// The kernel must outlive the learner. When the kernel exposes a finite feature
/// map, rows psi(x_i) are cached so each kernel evaluation against the support
/// costs a dot product instead of a fresh series evaluation.
class DualLearner {
 public:
  /// Throws std::invalid_argument for eta <= 0 or sigma <= 0.
  DualLearner(const Kernel& kernel, WindowingFunction loss, double eta, double sigma);

  /// Consumes one sample. Throws DivergenceError on a non-finite prediction or update.
  StepRecord step(double x, double y);
  StepRecord step(const Sample& s) { return step(s.x, s.y); }

  double predict(double x) const;

  /// Index of the next sample to consume; 1 for the initial state f_1 = 0.
  std::size_t t() const { return coeffs_.size() + 1; }
  std::span<const double> support() const { return support_; }
  std::span<const double> coeffs() const { return coeffs_; }
  KernelExpansion expansion() const { return {support_, coeffs_, kernel_}; }

  /// ||f_t||_K^2, updated with the exact recursion
  /// ||f + a K_x||^2 = ||f||^2 + 2 a f(x) + a^2 K(x, x).
  double norm_sq() const { return norm_sq_; }
  /// a^T G a evaluated directly, O(t^2).
  double norm_sq_gram() const;

  double eta() const { return eta_; }
  double sigma() const { return sigma_; }
  const WindowingFunction& loss() const { return loss_; }
  const Kernel& kernel() const { return *kernel_; }

 private:
  double kernel_against_support(std::size_t i, double x, std::span<const double> psi_x) const;
  // Uses psi(x) already written to scratch_.
  double predict_cached(double x) const;

  const Kernel* kernel_;
  WindowingFunction loss_;
  double eta_;
  double sigma_;
  std::size_t feature_dim_;
  std::vector<double> support_;
  std::vector<double> coeffs_;
  std::vector<double> feature_rows_;  // t-1 rows of psi(x_i), row-major
  mutable std::vector<double> scratch_;
  double norm_sq_ = 0.0;
};

/// The same learner stored as f_t = sum_k b_k phi_k over the kernel's eigenbasis;
/// each step costs O(N): b_k += -eta W'(xi)(f_t(x) - y) lambda_k phi_k(x).
class FeatureLearner {
 public:
  FeatureLearner(const SpectralKernel& kernel, WindowingFunction loss, double eta, double sigma);

  StepRecord step(double x, double y);
  StepRecord step(const Sample& s) { return step(s.x, s.y); }

  double predict(double x) const;

  std::size_t t() const { return t_; }
  std::span<const double> coeffs() const { return coeffs_; }
  /// sum_k b_k^2 / lambda_k.
  double norm_sq() const;

  double eta() const { return eta_; }
  double sigma() const { return sigma_; }
  const WindowingFunction& loss() const { return loss_; }
  const SpectralKernel& kernel() const { return *kernel_; }

 private:
  const SpectralKernel* kernel_;
  WindowingFunction loss_;
  double eta_;
  double sigma_;
  std::size_t t_ = 1;
  std::vector<double> coeffs_;
  mutable std::vector<double> phi_;
};

enum class Representation { dual, feature };

std::string_view to_string(Representation rep);
/// Throws std::invalid_argument for anything but "dual" / "feature".
Representation parse_representation(std::string_view name);

/// Feeds a stream through a learner; with `record_log` every StepRecord is kept.
template <class Learner>
StepLog consume(Learner& learner, std::span<const Sample> stream, bool record_log) {
  StepLog log;
  if (record_log) log.reserve(stream.size());
  for (const Sample& s : stream) {
    StepRecord rec = learner.step(s.x, s.y);
    if (record_log) log.push_back(rec);
  }
  return log;
}

struct RunOutput {
  std::variant<DualLearner, FeatureLearner> state;
  StepLog log;

  double predict(double x) const;
};

/// Runs the online learner over `stream` (T >= 1) in the requested representation.
/// The feature representation requires a SpectralKernel.
RunOutput run(std::span<const Sample> stream, double eta, double sigma,
              const WindowingFunction& loss, const Kernel& kernel, Representation rep,
              bool record_log = false);

/// eta_0 floor: max{C_W kappa^2, (1/e + 2 kappa^2 W'+(0))^2}.
double min_eta0(const WindowingFunction& loss, double kappa);

struct Schedule {
  double eta;
  double sigma_min;
};

/// eta = T^{-2r/(2r+1)} / eta0, sigma_min = T^{(r+p+1)/(2p(2r+1))}.
Schedule schedule_l2(std::size_t T, double r, double eta0, double p);
/// As above, rejecting eta0 below min_eta0(loss, kappa) and taking p from the loss.
Schedule schedule_l2(std::size_t T, double r, double eta0, const WindowingFunction& loss,
                     double kappa);

/// eta = T^{(1-2r-beta)/(2r+beta)} / eta0, sigma_min = T^{(p+r+1)/(2p(2r+beta))};
/// requires r > 1/2 and 0 < beta < 1.
Schedule schedule_rkhs(std::size_t T, double r, double beta, double eta0, double p);
Schedule schedule_rkhs(std::size_t T, double r, double beta, double eta0,
                       const WindowingFunction& loss, double kappa);

}  // namespace rolr
