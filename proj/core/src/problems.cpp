#include "rolr/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "rolr/csv.hpp"
#include "rolr/random.hpp"

namespace rolr {
namespace {

enum Lane : std::uint32_t { kInput = 0, kContaminate = 1, kNoise = 2, kSign = 3 };

}  // namespace

SyntheticProblem make_problem(const ProblemParams& params) {
  if (!(params.gamma > 1.0)) {
    throw std::invalid_argument("problem needs gamma > 1 so that the kernel is trace class");
  }
  if (!(params.r > 0.0)) throw std::invalid_argument("problem needs regularity r > 0");
  const NoiseModel& nm = params.noise;
  if (!(nm.nu >= 0.0) || !(nm.spike >= 0.0)) {
    throw std::invalid_argument("noise half-width and spike magnitude must be >= 0");
  }
  if (!(nm.q >= 0.0 && nm.q < 1.0)) throw std::invalid_argument("contamination q must be in [0, 1)");

  SyntheticProblem p;
  if (params.eigenvalues.empty()) {
    p.kernel_ = std::make_shared<const SpectralKernel>(
        SpectralKernel::power_law(params.n_terms, params.gamma));
  } else {
    p.kernel_ = std::make_shared<const SpectralKernel>(SpectralKernel(params.eigenvalues));
  }
  const std::size_t n = p.kernel_->n_terms();
  p.r_ = params.r;
  p.noise_ = nm;
  p.gamma_ = params.gamma;

  const CoefficientLaw& law = params.g_law;
  if (!law.explicit_coeffs.empty()) {
    if (law.explicit_coeffs.size() != n) {
      throw std::invalid_argument("explicit g coefficients must have one entry per basis term");
    }
    p.g_coeffs_ = law.explicit_coeffs;
  } else {
    if (!(law.exponent > 0.5)) {
      throw std::invalid_argument("coefficient exponent must exceed 1/2 for square summability");
    }
    p.g_coeffs_.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      p.g_coeffs_[k] = std::pow(static_cast<double>(k + 1), -law.exponent);
    }
  }

  const auto lam = p.kernel_->eigenvalues();
  auto sup_bound_of = [&](std::span<const double> c) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      s += (k == 0 ? 1.0 : std::numbers::sqrt2) * std::pow(lam[k], p.r_) * std::abs(c[k]);
    }
    return s;
  };
  if (law.normalize) {
    const double bound = sup_bound_of(p.g_coeffs_);
    if (bound > 0.0) {
      for (double& c : p.g_coeffs_) c /= bound;
    }
  }
  p.target_coeffs_.resize(n);
  for (std::size_t k = 0; k < n; ++k) p.target_coeffs_[k] = std::pow(lam[k], p.r_) * p.g_coeffs_[k];
  p.sup_bound_ = sup_bound_of(p.g_coeffs_);
  p.M_ = p.sup_bound_ + std::max(nm.nu, nm.spike);
  return p;
}

double SyntheticProblem::eval_target(double x) const {
  const std::vector<double> phi = kernel_->basis(x);
  double s = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) s += target_coeffs_[k] * phi[k];
  return s;
}

double SyntheticProblem::l2_norm_sq() const {
  double s = 0.0;
  for (double t : target_coeffs_) s += t * t;
  return s;
}

double SyntheticProblem::rkhs_norm_sq() const {
  const auto lam = kernel_->eigenvalues();
  double s = 0.0;
  for (std::size_t k = 0; k < target_coeffs_.size(); ++k) {
    s += target_coeffs_[k] * target_coeffs_[k] / lam[k];
  }
  return s;
}

double SyntheticProblem::g_norm_sq() const {
  double s = 0.0;
  for (double c : g_coeffs_) s += c * c;
  return s;
}

double SyntheticProblem::noise_variance() const {
  return (1.0 - noise_.q) * noise_.nu * noise_.nu / 3.0 + noise_.q * noise_.spike * noise_.spike;
}

bool SyntheticProblem::capacity_holds(double beta) const {
  return beta > 0.0 && beta < 1.0 && beta * gamma_ > 1.0;
}

std::vector<Sample> SyntheticProblem::sample(std::size_t count, std::uint64_t seed) const {
  const CounterRng rng(seed);
  std::vector<Sample> out(count);
  std::vector<double> phi(kernel_->n_terms());
  for (std::size_t i = 0; i < count; ++i) {
    Sample& s = out[i];
    s.x = rng.uniform(i, kInput);
    kernel_->basis(s.x, phi);
    double f = 0.0;
    for (std::size_t k = 0; k < phi.size(); ++k) f += target_coeffs_[k] * phi[k];

    double eps = 0.0;
    s.contaminated = noise_.q > 0.0 && rng.uniform(i, kContaminate) < noise_.q;
    if (s.contaminated) {
      eps = rng.uniform(i, kSign) < 0.5 ? -noise_.spike : noise_.spike;
    } else if (noise_.nu > 0.0) {
      eps = noise_.nu * (2.0 * rng.uniform(i, kNoise) - 1.0);
    }
    s.y = f + eps;
  }
  return out;
}

void write_samples_csv(std::ostream& os, std::span<const Sample> samples) {
  CsvWriter csv(os);
  csv.row("t", "x", "y", "contaminated_flag");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    csv.row(i + 1, samples[i].x, samples[i].y, samples[i].contaminated ? 1 : 0);
  }
}

}  // namespace rolr
