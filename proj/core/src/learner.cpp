#include "rolr/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace rolr {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

[[noreturn]] void diverged(std::size_t t, double value) {
  std::ostringstream os;
  os << "iterate became non-finite at step " << t << " (value " << value
     << "); the step size is likely inadmissible";
  throw DivergenceError(os.str());
}

}  // namespace

double KernelExpansion::operator()(double x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) s += coeffs[i] * (*kernel)(support[i], x);
  return s;
}

UpdateFactor update_factor(const WindowingFunction& loss, double eta, double sigma,
                           double prediction, double y) {
  const double residual = prediction - y;
  const double xi = residual * residual / (sigma * sigma);
  const double w = loss.derivative(xi);
  return {xi, w, -eta * w * residual};
}

// ---------------------------------------------------------------------------
// DualLearner

DualLearner::DualLearner(const Kernel& kernel, WindowingFunction loss, double eta, double sigma)
    : kernel_(&kernel),
      loss_(loss),
      eta_(eta),
      sigma_(sigma),
      feature_dim_(kernel.feature_dim()),
      scratch_(kernel.feature_dim()) {
  require_positive(eta, "step size eta");
  require_positive(sigma, "scale sigma");
}

double DualLearner::kernel_against_support(std::size_t i, double x,
                                           std::span<const double> psi_x) const {
  if (feature_dim_ == 0) return (*kernel_)(support_[i], x);
  return dot({feature_rows_.data() + i * feature_dim_, feature_dim_}, psi_x);
}

double DualLearner::predict(double x) const {
  if (coeffs_.empty()) return 0.0;
  if (feature_dim_ > 0) kernel_->feature_map(x, scratch_);
  return predict_cached(x);
}

double DualLearner::predict_cached(double x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    s += coeffs_[i] * kernel_against_support(i, x, scratch_);
  }
  return s;
}

StepRecord DualLearner::step(double x, double y) {
  StepRecord rec;
  rec.t = t();
  rec.x = x;
  rec.y = y;
  if (feature_dim_ > 0) kernel_->feature_map(x, scratch_);
  rec.prediction = predict_cached(x);
  if (!std::isfinite(rec.prediction)) diverged(rec.t, rec.prediction);
  rec.kernel_diag = feature_dim_ > 0 ? dot(scratch_, scratch_) : kernel_->diagonal(x);

  const UpdateFactor f = update_factor(loss_, eta_, sigma_, rec.prediction, y);
  if (!std::isfinite(f.coefficient)) diverged(rec.t, f.coefficient);
  rec.xi = f.xi;
  rec.w_prime = f.w_prime;
  rec.coefficient = f.coefficient;

  norm_sq_ += 2.0 * f.coefficient * rec.prediction + f.coefficient * f.coefficient * rec.kernel_diag;
  rec.norm_sq = norm_sq_;

  support_.push_back(x);
  coeffs_.push_back(f.coefficient);
  if (feature_dim_ > 0) {
    if (coeffs_.size() == 1) feature_rows_.reserve(feature_dim_ * 64);
    feature_rows_.insert(feature_rows_.end(), scratch_.begin(), scratch_.end());
  }
  return rec;
}

double DualLearner::norm_sq_gram() const {
  double s = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
      row += coeffs_[j] * (*kernel_)(support_[i], support_[j]);
    }
    s += coeffs_[i] * row;
  }
  return s;
}

// ---------------------------------------------------------------------------
// FeatureLearner

FeatureLearner::FeatureLearner(const SpectralKernel& kernel, WindowingFunction loss, double eta,
                               double sigma)
    : kernel_(&kernel),
      loss_(loss),
      eta_(eta),
      sigma_(sigma),
      coeffs_(kernel.n_terms(), 0.0),
      phi_(kernel.n_terms()) {
  require_positive(eta, "step size eta");
  require_positive(sigma, "scale sigma");
}

double FeatureLearner::predict(double x) const {
  kernel_->basis(x, phi_);
  return dot(coeffs_, phi_);
}

StepRecord FeatureLearner::step(double x, double y) {
  StepRecord rec;
  rec.t = t_;
  rec.x = x;
  rec.y = y;
  rec.prediction = predict(x);  // leaves phi(x) in phi_
  if (!std::isfinite(rec.prediction)) diverged(rec.t, rec.prediction);

  const auto lam = kernel_->eigenvalues();
  double diag = 0.0;
  for (std::size_t k = 0; k < phi_.size(); ++k) diag += lam[k] * phi_[k] * phi_[k];
  rec.kernel_diag = diag;

  const UpdateFactor f = update_factor(loss_, eta_, sigma_, rec.prediction, y);
  if (!std::isfinite(f.coefficient)) diverged(rec.t, f.coefficient);
  rec.xi = f.xi;
  rec.w_prime = f.w_prime;
  rec.coefficient = f.coefficient;

  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += f.coefficient * lam[k] * phi_[k];
  ++t_;
  rec.norm_sq = norm_sq();
  return rec;
}

double FeatureLearner::norm_sq() const {
  const auto lam = kernel_->eigenvalues();
  double s = 0.0;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) s += coeffs_[k] * coeffs_[k] / lam[k];
  return s;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Representation rep) {
  return rep == Representation::dual ? "dual" : "feature";
}

Representation parse_representation(std::string_view name) {
  if (name == "dual") return Representation::dual;
  if (name == "feature") return Representation::feature;
  throw std::invalid_argument("unknown representation: " + std::string(name));
}

double RunOutput::predict(double x) const {
  return std::visit([x](const auto& s) { return s.predict(x); }, state);
}

RunOutput run(std::span<const Sample> stream, double eta, double sigma,
              const WindowingFunction& loss, const Kernel& kernel, Representation rep,
              bool record_log) {
  if (stream.empty()) throw std::invalid_argument("run needs at least one sample");
  if (rep == Representation::feature) {
    const auto* spectral = dynamic_cast<const SpectralKernel*>(&kernel);
    if (spectral == nullptr) {
      throw std::invalid_argument("feature representation requires a spectral kernel");
    }
    FeatureLearner learner(*spectral, loss, eta, sigma);
    StepLog log = consume(learner, stream, record_log);
    return {std::move(learner), std::move(log)};
  }
  DualLearner learner(kernel, loss, eta, sigma);
  StepLog log = consume(learner, stream, record_log);
  return {std::move(learner), std::move(log)};
}

double min_eta0(const WindowingFunction& loss, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("min_eta0 needs kappa > 0");
  const double k2 = kappa * kappa;
  const double second = 1.0 / std::numbers::e + 2.0 * k2 * loss.w_plus_zero();
  return std::max(loss.c_w() * k2, second * second);
}

namespace {

void check_schedule_args(std::size_t T, double eta0, double p) {
  if (T < 1) throw std::invalid_argument("schedule needs T >= 1");
  require_positive(eta0, "eta0");
  require_positive(p, "Hoelder exponent p");
}

void check_eta0_floor(double eta0, const WindowingFunction& loss, double kappa) {
  const double floor = min_eta0(loss, kappa);
  if (eta0 < floor * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "eta0 = " << eta0 << " is below the admissible floor " << floor << " for loss "
       << loss.label() << " with kappa = " << kappa;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

Schedule schedule_l2(std::size_t T, double r, double eta0, double p) {
  check_schedule_args(T, eta0, p);
  require_positive(r, "regularity r");
  const double t = static_cast<double>(T);
  return {std::pow(t, -2.0 * r / (2.0 * r + 1.0)) / eta0,
          std::pow(t, (r + p + 1.0) / (2.0 * p * (2.0 * r + 1.0)))};
}

Schedule schedule_l2(std::size_t T, double r, double eta0, const WindowingFunction& loss,
                     double kappa) {
  check_eta0_floor(eta0, loss, kappa);
  return schedule_l2(T, r, eta0, loss.p());
}

Schedule schedule_rkhs(std::size_t T, double r, double beta, double eta0, double p) {
  check_schedule_args(T, eta0, p);
  if (!(r > 0.5)) throw std::invalid_argument("RKHS schedule requires r > 1/2");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("RKHS schedule needs 0 < beta < 1");
  const double t = static_cast<double>(T);
  return {std::pow(t, (1.0 - 2.0 * r - beta) / (2.0 * r + beta)) / eta0,
          std::pow(t, (p + r + 1.0) / (2.0 * p * (2.0 * r + beta)))};
}

Schedule schedule_rkhs(std::size_t T, double r, double beta, double eta0,
                       const WindowingFunction& loss, double kappa) {
  check_eta0_floor(eta0, loss, kappa);
  return schedule_rkhs(T, r, beta, eta0, loss.p());
}

}  // namespace rolr
