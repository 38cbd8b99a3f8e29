#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace rolr {

/// Bounded positive semi-definite kernel on [0, 1].
class Kernel {
 public:
  virtual ~Kernel() = default;

  virtual double operator()(double x, double y) const = 0;
  virtual double diagonal(double x) const { return (*this)(x, x); }
  /// Upper bound for kappa = sup_x sqrt(K(x, x)).
  virtual double kappa_bound() const = 0;

  /// Dimension of an explicit feature map psi with K(x, y) = <psi(x), psi(y)>,
  /// or 0 when the kernel has none.
  virtual std::size_t feature_dim() const { return 0; }
  /// Writes psi(x) into `out` (size feature_dim()). Only valid when feature_dim() > 0.
  virtual void feature_map(double x, std::span<double> out) const;
};

/// Truncated Mercer kernel K(x, y) = sum_k lambda_k phi_k(x) phi_k(y) with the
/// trigonometric system orthonormal under Uniform[0, 1]:
///   phi_1 = 1, phi_{2j} = sqrt(2) cos(2 pi j x), phi_{2j+1} = sqrt(2) sin(2 pi j x).
/// Eigenvalues are indexed in basis order.
class SpectralKernel final : public Kernel {
 public:
  /// Throws std::invalid_argument unless eigenvalues are nonempty, finite,
  /// strictly positive and nonincreasing.
  explicit SpectralKernel(std::vector<double> eigenvalues);

  /// lambda_k = k^{-gamma}, k = 1..n_terms.
  static SpectralKernel power_law(std::size_t n_terms, double gamma);

  std::size_t n_terms() const { return eigenvalues_.size(); }
  std::span<const double> eigenvalues() const { return eigenvalues_; }
  std::optional<double> gamma() const { return gamma_; }

  /// phi_1(x), ..., phi_N(x).
  void basis(double x, std::span<double> out) const;
  std::vector<double> basis(double x) const;

  double operator()(double x, double y) const override;
  double diagonal(double x) const override;
  /// sqrt(lambda_1 + 2 sum_{k>=2} lambda_k).
  double kappa_bound() const override;
  std::size_t feature_dim() const override { return n_terms(); }
  /// psi_k(x) = sqrt(lambda_k) phi_k(x).
  void feature_map(double x, std::span<double> out) const override;

  double trace() const;
  /// Tr(L_K^beta) = sum_k lambda_k^beta, 0 < beta <= 1.
  double trace_power(double beta) const;
  /// True iff lambda_k <= k^{-1/beta} Tr(L_K^beta)^{1/beta} for all k.
  bool eigen_decay_check(double beta) const;

 private:
  std::vector<double> eigenvalues_;
  std::vector<double> sqrt_eigenvalues_;
  std::optional<double> gamma_;
};

/// K(x, y) = exp(-(x - y)^2 / (2 h^2)); K(x, x) = 1.
class GaussianKernel final : public Kernel {
 public:
  explicit GaussianKernel(double bandwidth);

  double bandwidth() const { return bandwidth_; }
  double operator()(double x, double y) const override;
  double diagonal(double) const override { return 1.0; }
  double kappa_bound() const override { return 1.0; }

 private:
  double bandwidth_;
};

}  // namespace rolr
