#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rolr/losses.hpp"

using rolr::WindowingFunction;

namespace {

// Central difference of W, with a floor for the cancellation in W(s+h) - W(s-h)
// when W' is tiny compared to W itself.
void expect_derivative_matches(const WindowingFunction& w, double s) {
  const double h = 1e-5 * s;
  const double hi = w.value(s + h);
  const double lo = w.value(s - h);
  const double fd = (hi - lo) / (2.0 * h);
  const double roundoff = 4.0 * std::numeric_limits<double>::epsilon() *
                          std::max(std::abs(hi), std::abs(lo)) / (2.0 * h);
  const double d = w.derivative(s);
  INFO(w.label() << " at s = " << s << ": analytic " << d << ", difference " << fd);
  CHECK(std::abs(d - fd) <= 1e-5 * std::abs(d) + roundoff);
}

}  // namespace

TEST_CASE("closed-form values") {
  CHECK(WindowingFunction::welsch().value(0.0) == 0.0);
  CHECK(WindowingFunction::cauchy().value(2.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(WindowingFunction::tukey(1.0).value(1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(WindowingFunction::tukey(2.0).value(5.0) == doctest::Approx(4.0 / 6.0).epsilon(1e-15));
  CHECK(WindowingFunction::geman_mcclure().value(1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(WindowingFunction::fair().value(4.0) == doctest::Approx(2.0 - std::log(3.0)).epsilon(1e-15));
  for (const auto& w : rolr::builtin_windows()) CHECK(w.value(0.0) == 0.0);
}

TEST_CASE("derivative examples") {
  const auto welsch = WindowingFunction::welsch();
  CHECK(welsch.derivative(0.0) == 0.5);
  // 0.5 * exp(-1), confirmed against a central difference with h = 1e-6.
  const double fd = (welsch.value(2.0 + 1e-6) - welsch.value(2.0 - 1e-6)) / 2e-6;
  CHECK(fd == doctest::Approx(0.18393972058572117).epsilon(1e-8));
  CHECK(welsch.derivative(2.0) == doctest::Approx(0.18393972058572117).epsilon(1e-15));

  CHECK(WindowingFunction::identity(true).derivative(7.3) == 0.5);
  CHECK(WindowingFunction::identity().derivative(7.3) == 1.0);
  CHECK(WindowingFunction::identity(true).value(7.3) == doctest::Approx(3.65));
}

TEST_CASE("right derivative at zero equals the tabled constant") {
  for (const auto& w : rolr::builtin_windows()) {
    CAPTURE(w.label());
    CHECK(w.derivative(0.0) == w.w_plus_zero());
    CHECK(w.w_plus_zero() > 0.0);
  }
}

TEST_CASE("tabled constants") {
  const auto gm = WindowingFunction::geman_mcclure();
  CHECK(gm.w_plus_zero() == 1.0);
  CHECK(gm.c_w() == 1.0);
  CHECK(gm.p() == 1.0);
  CHECK(gm.c_p() == 2.0);
  const auto id = WindowingFunction::identity();
  CHECK(id.c_w() == 1.0);
  CHECK(id.c_p() == 0.0);
  const auto t = WindowingFunction::tukey(3.0);
  CHECK(t.w_plus_zero() == doctest::Approx(4.5));
  CHECK(t.c_p() == doctest::Approx(9.0));
}

TEST_CASE("negative or NaN arguments are domain errors") {
  for (const auto& w : rolr::builtin_windows()) {
    CHECK_THROWS_AS(w.value(-1e-300), std::domain_error);
    CHECK_THROWS_AS(w.derivative(-1.0), std::domain_error);
    CHECK_THROWS_AS(w.value(std::nan("")), std::domain_error);
  }
}

TEST_CASE("derivative agrees with finite differences on the log grid") {
  const auto grid = rolr::log_grid(1e-8, 1e4, 200);
  for (const auto& w : rolr::builtin_windows()) {
    for (double s : grid) expect_derivative_matches(w, s);
    // One-sided at the origin.
    const double h = 1e-12;
    const double fd = (w.value(h) - w.value(0.0)) / h;
    CAPTURE(w.label());
    CHECK(std::abs(fd - w.w_plus_zero()) <= 1e-5 * w.w_plus_zero());
  }
}

TEST_CASE("grid inequalities hold with the tabled constants") {
  const auto grid = rolr::log_grid(1e-8, 1e4, 200);
  for (const auto& w : rolr::builtin_windows()) {
    CAPTURE(w.label());
    const auto rep = rolr::check_conditions(w, grid);
    CHECK(rep.right_derivative_positive);
    CHECK(rep.nonnegative);
    CHECK(rep.derivative_bounded);
    CHECK(rep.holder);
    CHECK(rep.bound_slack <= 1e-12);
    CHECK(rep.holder_slack <= 1e-12);
  }
}

TEST_CASE("cauchy passes every condition on the standard grid") {
  const auto rep = rolr::check_conditions(WindowingFunction::cauchy(), rolr::log_grid(1e-6, 1e2, 200));
  CHECK(rep.all_passed());
  CHECK(rep.min_derivative > 0.0);
}

TEST_CASE("tukey strict positivity is flagged, the other conditions pass") {
  const std::vector<double> grid{0.25, 0.5, 1.0, 2.0, 3.0};
  const auto rep = rolr::check_conditions(WindowingFunction::tukey(1.0), grid);
  CHECK_FALSE(rep.strictly_positive);
  CHECK(rep.nonnegative);
  CHECK(rep.min_derivative == 0.0);
  CHECK(rep.derivative_bounded);
  CHECK(rep.holder);
  CHECK_FALSE(rep.all_passed());
}

TEST_CASE("identity has zero holder slack") {
  const auto rep = rolr::check_conditions(WindowingFunction::identity(), rolr::log_grid(1e-3, 1e3, 50));
  CHECK(rep.all_passed());
  CHECK(rep.holder_slack == 0.0);
  CHECK(rep.bound_slack == 0.0);
}

TEST_CASE("every non-tukey built-in is strictly positive on the standard grid") {
  const auto grid = rolr::log_grid(1e-6, 1e2, 200);
  for (const auto& w : rolr::builtin_windows()) {
    if (w.kind() == rolr::WindowKind::tukey) continue;
    CAPTURE(w.label());
    CHECK(rolr::check_conditions(w, grid).all_passed());
  }
}

TEST_CASE("W is nondecreasing on [0, 1]") {
  for (const auto& w : rolr::builtin_windows()) {
    double prev = w.value(0.0);
    for (int i = 1; i <= 1000; ++i) {
      const double v = w.value(i / 1000.0);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("bad grids and names") {
  CHECK_THROWS_AS(rolr::check_conditions(WindowingFunction::welsch(), {}), std::invalid_argument);
  const std::vector<double> bad{1.0, 0.0};
  CHECK_THROWS_AS(rolr::check_conditions(WindowingFunction::welsch(), bad), std::invalid_argument);
  CHECK_THROWS_AS(WindowingFunction::from_name("huber"), std::invalid_argument);
  CHECK(WindowingFunction::from_name("least_squares").kind() == rolr::WindowKind::identity);
  CHECK(WindowingFunction::from_name("tukey", 2.5).tukey_c() == 2.5);
}
