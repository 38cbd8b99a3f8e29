#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rolr {

enum class WindowKind { fair, cauchy, welsch, geman_mcclure, tukey, identity };

/// A windowing function W defining the robust loss L_sigma(u) = W(u^2 / sigma^2).
///
/// Each built-in carries its analytic constants: the right derivative W'+(0),
/// C_W = sup |W'| on (0, inf), and the Hoelder pair (p, c_p) with
/// |W'(s) - W'+(0)| <= c_p s^p. Instances are immutable.
class WindowingFunction {
 public:
  static WindowingFunction fair();
  static WindowingFunction cauchy();
  static WindowingFunction welsch();
  /// W(s) = s / (1 + s).
  static WindowingFunction geman_mcclure();
  /// Tukey's biweight with shape c > 0; W'(s) = 0 for s > 1.
  static WindowingFunction tukey(double c = 1.0);
  /// Least squares. W(s) = s by default; `half_scale` gives W(s) = s / 2.
  static WindowingFunction identity(bool half_scale = false);

  /// Looks up a built-in by name (fair, cauchy, welsch, geman_mcclure, tukey, identity).
  static WindowingFunction from_name(std::string_view name, double tukey_c = 1.0,
                                     bool identity_half_scale = false);

  WindowKind kind() const { return kind_; }
  std::string_view name() const;
  /// Human-readable name including shape parameters, e.g. "tukey(c=1)".
  std::string label() const;
  double tukey_c() const { return tukey_c_; }
  bool half_scale() const { return half_scale_; }

  double w_plus_zero() const { return w_plus_zero_; }
  double c_w() const { return c_w_; }
  double p() const { return p_; }
  double c_p() const { return c_p_; }

  /// W(s). Throws std::domain_error for s < 0 or NaN.
  double value(double s) const;
  /// W'(s); at s = 0 this is the right derivative. Throws std::domain_error for s < 0 or NaN.
  double derivative(double s) const;

 private:
  WindowingFunction(WindowKind kind, double w0, double cw, double p, double cp)
      : kind_(kind), w_plus_zero_(w0), c_w_(cw), p_(p), c_p_(cp) {}

  WindowKind kind_;
  double w_plus_zero_;
  double c_w_;
  double p_;
  double c_p_;
  double tukey_c_ = 1.0;
  bool half_scale_ = false;
};

/// The six built-ins in a fixed order (tukey with c = 1, identity with W(s) = s).
std::vector<WindowingFunction> builtin_windows();

/// Grid verification of the windowing-function conditions.
struct ConditionReport {
  bool right_derivative_positive = false;  // W'+(0) > 0
  bool strictly_positive = false;          // W'(s) > 0 at every grid point
  bool nonnegative = false;                // W'(s) >= 0 at every grid point
  bool derivative_bounded = false;         // |W'(s)| <= C_W
  bool holder = false;                     // |W'(s) - W'+(0)| <= c_p s^p

  double min_derivative = 0.0;
  double bound_slack = 0.0;   // max_s |W'(s)| - C_W  (<= tol to pass)
  double holder_slack = 0.0;  // max_s |W'(s) - W'+(0)| - c_p s^p  (<= tol to pass)

  bool all_passed() const {
    return right_derivative_positive && strictly_positive && derivative_bounded && holder;
  }
};

ConditionReport check_conditions(const WindowingFunction& loss, std::span<const double> grid,
                                 double tol = 1e-12);

/// n log-spaced points on [lo, hi], endpoints included.
std::vector<double> log_grid(double lo, double hi, std::size_t n);

}  // namespace rolr
