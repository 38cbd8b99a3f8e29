#include "rolr/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rolr {
namespace {

void require_domain(double s) {
  if (!(s >= 0.0)) {
    throw std::domain_error("windowing function evaluated at negative or NaN argument");
  }
}

}  // namespace

WindowingFunction WindowingFunction::fair() {
  return {WindowKind::fair, 0.5, 0.5, 0.5, 0.5};
}

WindowingFunction WindowingFunction::cauchy() {
  return {WindowKind::cauchy, 0.5, 0.5, 1.0, 0.25};
}

WindowingFunction WindowingFunction::welsch() {
  return {WindowKind::welsch, 0.5, 0.5, 1.0, 0.25};
}

WindowingFunction WindowingFunction::geman_mcclure() {
  return {WindowKind::geman_mcclure, 1.0, 1.0, 1.0, 2.0};
}

WindowingFunction WindowingFunction::tukey(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("tukey shape parameter c must be positive and finite");
  }
  const double c2 = c * c;
  WindowingFunction w{WindowKind::tukey, 0.5 * c2, 0.5 * c2, 1.0, c2};
  w.tukey_c_ = c;
  return w;
}

WindowingFunction WindowingFunction::identity(bool half_scale) {
  const double slope = half_scale ? 0.5 : 1.0;
  // c_p = 0: W' is constant, so the Hoelder slack is exactly zero.
  WindowingFunction w{WindowKind::identity, slope, slope, 1.0, 0.0};
  w.half_scale_ = half_scale;
  return w;
}

WindowingFunction WindowingFunction::from_name(std::string_view name, double tukey_c,
                                               bool identity_half_scale) {
  if (name == "fair") return fair();
  if (name == "cauchy") return cauchy();
  if (name == "welsch") return welsch();
  if (name == "geman_mcclure") return geman_mcclure();
  if (name == "tukey") return tukey(tukey_c);
  if (name == "identity" || name == "least_squares") return identity(identity_half_scale);
  throw std::invalid_argument("unknown windowing function: " + std::string(name));
}

std::string_view WindowingFunction::name() const {
  switch (kind_) {
    case WindowKind::fair: return "fair";
    case WindowKind::cauchy: return "cauchy";
    case WindowKind::welsch: return "welsch";
    case WindowKind::geman_mcclure: return "geman_mcclure";
    case WindowKind::tukey: return "tukey";
    case WindowKind::identity: return "identity";
  }
  return "unknown";
}

std::string WindowingFunction::label() const {
  std::ostringstream os;
  os << name();
  if (kind_ == WindowKind::tukey) os << "(c=" << tukey_c_ << ")";
  if (kind_ == WindowKind::identity && half_scale_) os << "(half)";
  return os.str();
}

double WindowingFunction::value(double s) const {
  require_domain(s);
  switch (kind_) {
    case WindowKind::fair: {
      const double u = std::sqrt(s);
      return u - std::log1p(u);
    }
    case WindowKind::cauchy:
      return std::log1p(0.5 * s);
    case WindowKind::welsch:
      return -std::expm1(-0.5 * s);
    case WindowKind::geman_mcclure:
      return s / (1.0 + s);
    case WindowKind::tukey: {
      const double scale = tukey_c_ * tukey_c_ / 6.0;
      if (s > 1.0) return scale;
      // 1 - (1 - s)^3 expanded to avoid cancellation near 0.
      return scale * s * (3.0 - 3.0 * s + s * s);
    }
    case WindowKind::identity:
      return half_scale_ ? 0.5 * s : s;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double WindowingFunction::derivative(double s) const {
  require_domain(s);
  switch (kind_) {
    case WindowKind::fair:
      return 0.5 / (1.0 + std::sqrt(s));
    case WindowKind::cauchy:
      return 1.0 / (2.0 + s);
    case WindowKind::welsch:
      return 0.5 * std::exp(-0.5 * s);
    case WindowKind::geman_mcclure: {
      const double d = 1.0 + s;
      return 1.0 / (d * d);
    }
    case WindowKind::tukey: {
      if (s > 1.0) return 0.0;
      const double d = 1.0 - s;
      return 0.5 * tukey_c_ * tukey_c_ * d * d;
    }
    case WindowKind::identity:
      return half_scale_ ? 0.5 : 1.0;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<WindowingFunction> builtin_windows() {
  return {WindowingFunction::fair(),          WindowingFunction::cauchy(),
          WindowingFunction::welsch(),        WindowingFunction::geman_mcclure(),
          WindowingFunction::tukey(1.0),      WindowingFunction::identity()};
}

ConditionReport check_conditions(const WindowingFunction& loss, std::span<const double> grid,
                                 double tol) {
  if (grid.empty()) throw std::invalid_argument("check_conditions: empty grid");
  ConditionReport report;
  report.right_derivative_positive = loss.w_plus_zero() > 0.0;
  report.min_derivative = std::numeric_limits<double>::infinity();
  report.bound_slack = -std::numeric_limits<double>::infinity();
  report.holder_slack = -std::numeric_limits<double>::infinity();

  const double w0 = loss.w_plus_zero();
  for (double s : grid) {
    if (!(s > 0.0)) throw std::invalid_argument("check_conditions: grid points must be > 0");
    const double d = loss.derivative(s);
    report.min_derivative = std::min(report.min_derivative, d);
    report.bound_slack = std::max(report.bound_slack, std::abs(d) - loss.c_w());
    const double holder_rhs = loss.c_p() == 0.0 ? 0.0 : loss.c_p() * std::pow(s, loss.p());
    report.holder_slack = std::max(report.holder_slack, std::abs(d - w0) - holder_rhs);
  }
  report.strictly_positive = report.min_derivative > 0.0;
  report.nonnegative = report.min_derivative >= 0.0;
  report.derivative_bounded = report.bound_slack <= tol;
  report.holder = report.holder_slack <= tol;
  return report;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi >= lo) || n == 0) {
    throw std::invalid_argument("log_grid requires 0 < lo <= hi and n >= 1");
  }
  std::vector<double> grid(n);
  if (n == 1) {
    grid[0] = lo;
    return grid;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

}  // namespace rolr
