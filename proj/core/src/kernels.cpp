#include "rolr/kernels.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rolr {
namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Evaluates cos(2 pi j x), sin(2 pi j x) for j = 1..n_freq by angle addition and
// hands each pair to `sink(j, c, s)`.
template <class Sink>
void for_each_harmonic(double x, std::size_t n_freq, Sink&& sink) {
  if (n_freq == 0) return;
  const double c1 = std::cos(kTwoPi * x);
  const double s1 = std::sin(kTwoPi * x);
  double c = c1;
  double s = s1;
  for (std::size_t j = 1; j <= n_freq; ++j) {
    sink(j, c, s);
    const double next_c = c * c1 - s * s1;
    s = s * c1 + c * s1;
    c = next_c;
  }
}

std::size_t frequencies_for(std::size_t n_terms) { return n_terms / 2; }

}  // namespace

void Kernel::feature_map(double, std::span<double>) const {
  throw std::logic_error("kernel has no explicit feature map");
}

SpectralKernel::SpectralKernel(std::vector<double> eigenvalues)
    : eigenvalues_(std::move(eigenvalues)) {
  if (eigenvalues_.empty()) throw std::invalid_argument("spectral kernel needs >= 1 eigenvalue");
  for (std::size_t k = 0; k < eigenvalues_.size(); ++k) {
    const double lam = eigenvalues_[k];
    if (!(lam > 0.0) || !std::isfinite(lam)) {
      throw std::invalid_argument("spectral kernel eigenvalues must be positive and finite");
    }
    if (k > 0 && lam > eigenvalues_[k - 1]) {
      throw std::invalid_argument("spectral kernel eigenvalues must be nonincreasing");
    }
  }
  sqrt_eigenvalues_.reserve(eigenvalues_.size());
  for (double lam : eigenvalues_) sqrt_eigenvalues_.push_back(std::sqrt(lam));
}

SpectralKernel SpectralKernel::power_law(std::size_t n_terms, double gamma) {
  if (n_terms == 0) throw std::invalid_argument("spectral kernel needs n_terms >= 1");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("eigenvalue decay exponent gamma must be positive");
  }
  std::vector<double> lam(n_terms);
  for (std::size_t k = 0; k < n_terms; ++k) {
    lam[k] = std::pow(static_cast<double>(k + 1), -gamma);
  }
  SpectralKernel kernel(std::move(lam));
  kernel.gamma_ = gamma;
  return kernel;
}

void SpectralKernel::basis(double x, std::span<double> out) const {
  const std::size_t n = n_terms();
  if (out.size() != n) throw std::invalid_argument("basis output span has wrong size");
  out[0] = 1.0;
  for_each_harmonic(x, frequencies_for(n), [&](std::size_t j, double c, double s) {
    out[2 * j - 1] = kSqrt2 * c;
    if (2 * j < n) out[2 * j] = kSqrt2 * s;
  });
}

std::vector<double> SpectralKernel::basis(double x) const {
  std::vector<double> out(n_terms());
  basis(x, out);
  return out;
}

double SpectralKernel::operator()(double x, double y) const {
  const std::size_t n = n_terms();
  const std::size_t n_freq = frequencies_for(n);
  double sum = eigenvalues_[0];
  if (n_freq == 0) return sum;
  const double cx1 = std::cos(kTwoPi * x), sx1 = std::sin(kTwoPi * x);
  const double cy1 = std::cos(kTwoPi * y), sy1 = std::sin(kTwoPi * y);
  double cx = cx1, sx = sx1, cy = cy1, sy = sy1;
  for (std::size_t j = 1; j <= n_freq; ++j) {
    // lambda * (a * b) keeps K(x, y) and K(y, x) bitwise identical.
    sum += 2.0 * eigenvalues_[2 * j - 1] * (cx * cy);
    if (2 * j < n) sum += 2.0 * eigenvalues_[2 * j] * (sx * sy);
    const double ncx = cx * cx1 - sx * sx1;
    sx = sx * cx1 + cx * sx1;
    cx = ncx;
    const double ncy = cy * cy1 - sy * sy1;
    sy = sy * cy1 + cy * sy1;
    cy = ncy;
  }
  return sum;
}

double SpectralKernel::diagonal(double x) const {
  const std::size_t n = n_terms();
  double sum = eigenvalues_[0];
  for_each_harmonic(x, frequencies_for(n), [&](std::size_t j, double c, double s) {
    sum += 2.0 * eigenvalues_[2 * j - 1] * (c * c);
    if (2 * j < n) sum += 2.0 * eigenvalues_[2 * j] * (s * s);
  });
  return sum;
}

double SpectralKernel::kappa_bound() const {
  double sum = eigenvalues_[0];
  for (std::size_t k = 1; k < eigenvalues_.size(); ++k) sum += 2.0 * eigenvalues_[k];
  return std::sqrt(sum);
}

void SpectralKernel::feature_map(double x, std::span<double> out) const {
  basis(x, out);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] *= sqrt_eigenvalues_[k];
}

double SpectralKernel::trace() const {
  double sum = 0.0;
  for (double lam : eigenvalues_) sum += lam;
  return sum;
}

double SpectralKernel::trace_power(double beta) const {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::invalid_argument("trace_power needs 0 < beta <= 1");
  if (beta == 1.0) return trace();
  double sum = 0.0;
  for (double lam : eigenvalues_) sum += std::pow(lam, beta);
  return sum;
}

bool SpectralKernel::eigen_decay_check(double beta) const {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("eigen_decay_check needs 0 < beta <= 1");
  }
  const double scale = std::pow(trace_power(beta), 1.0 / beta);
  for (std::size_t k = 0; k < eigenvalues_.size(); ++k) {
    const double bound = std::pow(static_cast<double>(k + 1), -1.0 / beta) * scale;
    // Relative roundoff allowance; the inequality is tight at k = 1 for a single eigenvalue.
    if (eigenvalues_[k] > bound * (1.0 + 1e-12)) return false;
  }
  return true;
}

GaussianKernel::GaussianKernel(double bandwidth) : bandwidth_(bandwidth) {
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw std::invalid_argument("gaussian kernel bandwidth must be positive");
  }
}

double GaussianKernel::operator()(double x, double y) const {
  const double d = (x - y) / bandwidth_;
  return std::exp(-0.5 * d * d);
}

}  // namespace rolr
