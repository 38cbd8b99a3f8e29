#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "rolr/problems.hpp"

using namespace rolr;

namespace {

ProblemParams two_term() {
  ProblemParams pp;
  pp.eigenvalues = {1.0, 0.25};
  pp.r = 0.5;
  pp.g_law.explicit_coeffs = {1.0, 1.0};
  pp.g_law.normalize = false;
  return pp;
}

}  // namespace

TEST_CASE("single term problem is a constant") {
  ProblemParams pp;
  pp.eigenvalues = {1.0};
  pp.r = 1.0;
  pp.g_law.explicit_coeffs = {0.5};
  pp.g_law.normalize = false;
  pp.noise = {0.2, 0.0, 0.0};
  const auto p = make_problem(pp);
  for (double x : {0.0, 0.3, 0.99}) CHECK(p.eval_target(x) == doctest::Approx(0.5));
  CHECK(p.l2_norm_sq() == doctest::Approx(0.25));
  CHECK(p.sup_bound() == doctest::Approx(0.5));
  CHECK(p.M() == doctest::Approx(0.7));
  for (const Sample& s : p.sample(200, 5)) CHECK(std::abs(s.y - 0.5) <= 0.2);
}

TEST_CASE("two term problem norms") {
  const auto p = make_problem(two_term());
  CHECK(p.target_coeffs()[0] == doctest::Approx(1.0));
  CHECK(p.target_coeffs()[1] == doctest::Approx(0.5));
  CHECK(p.l2_norm_sq() == doctest::Approx(1.25));
  CHECK(p.rkhs_norm_sq() == doctest::Approx(2.0));
  CHECK(p.g_norm_sq() == doctest::Approx(2.0));
  CHECK(p.eval_target(0.0) == doctest::Approx(1.0 + 0.5 * std::sqrt(2.0)));
  CHECK(p.eval_target(0.25) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("normalization puts the sup-norm bound at one") {
  ProblemParams pp;
  pp.n_terms = 64;
  const auto p = make_problem(pp);
  CHECK(p.sup_bound() == doctest::Approx(1.0));
  double worst = 0.0;
  for (int j = 0; j <= 2000; ++j) worst = std::max(worst, std::abs(p.eval_target(j / 2000.0)));
  CHECK(worst <= 1.0 + 1e-12);
}

TEST_CASE("quadrature agrees with the closed form norms") {
  ProblemParams pp;
  pp.n_terms = 32;
  pp.r = 0.75;
  const auto p = make_problem(pp);
  const int n = 4000;
  double l2 = 0.0;
  for (int j = 0; j < n; ++j) {
    const double f = p.eval_target((j + 0.5) / n);
    l2 += f * f;
  }
  l2 /= n;
  CHECK(std::abs(l2 - p.l2_norm_sq()) <= 1e-4);

  double rk = 0.0;
  const auto lam = p.kernel().eigenvalues();
  for (std::size_t k = 0; k < lam.size(); ++k) {
    rk += std::pow(lam[k], 2.0 * pp.r - 1.0) * p.g_coeffs()[k] * p.g_coeffs()[k];
  }
  CHECK(p.rkhs_norm_sq() == doctest::Approx(rk).epsilon(1e-12));
}

TEST_CASE("noise is centered and contamination has the requested rate") {
  ProblemParams pp;
  pp.n_terms = 16;
  pp.noise = {0.5, 0.1, 2.5};
  const auto p = make_problem(pp);
  const std::size_t n = 100000;
  const auto data = p.sample(n, 77);
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t hits = 0;
  for (const Sample& s : data) {
    const double e = s.y - p.eval_target(s.x);
    sum += e;
    sum_sq += e * e;
    if (s.contaminated) {
      ++hits;
      CHECK(std::abs(std::abs(e) - 2.5) <= 1e-9);
    } else {
      CHECK(std::abs(e) <= 0.5 + 1e-12);
    }
    CHECK(std::abs(s.y) <= p.M() + 1e-12);
    CHECK(s.x >= 0.0);
    CHECK(s.x < 1.0);
  }
  const double mean = sum / n;
  const double se = std::sqrt(p.noise_variance() / n);
  CHECK(std::abs(mean) <= 4.0 * se);
  CHECK(std::abs(static_cast<double>(hits) / n - 0.1) <= 0.005);
  CHECK(sum_sq / n == doctest::Approx(p.noise_variance()).epsilon(0.02));
  CHECK(p.noise_variance() == doctest::Approx(0.9 * 0.25 / 3.0 + 0.1 * 6.25));
}

TEST_CASE("sampling is deterministic and prefix stable") {
  ProblemParams pp;
  pp.n_terms = 16;
  pp.noise = {0.3, 0.2, 1.0};
  const auto p = make_problem(pp);
  const auto a = p.sample(100, 9);
  const auto b = p.sample(100, 9);
  const auto prefix = p.sample(40, 9);
  const auto other = p.sample(100, 10);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
    CHECK(a[i].contaminated == b[i].contaminated);
    if (i < prefix.size()) {
      CHECK(a[i].x == prefix[i].x);
      CHECK(a[i].y == prefix[i].y);
    }
    differs = differs || a[i].x != other[i].x;
  }
  CHECK(differs);
}

TEST_CASE("invalid problems are rejected") {
  ProblemParams pp;
  pp.gamma = 1.0;
  CHECK_THROWS_AS(make_problem(pp), std::invalid_argument);
  pp.gamma = 2.0;
  pp.r = 0.0;
  CHECK_THROWS_AS(make_problem(pp), std::invalid_argument);
  pp.r = 0.5;
  pp.noise.q = 1.0;
  CHECK_THROWS_AS(make_problem(pp), std::invalid_argument);
  pp.noise.q = 0.0;
  pp.noise.nu = -1.0;
  CHECK_THROWS_AS(make_problem(pp), std::invalid_argument);
  pp.noise.nu = 0.0;
  pp.g_law.exponent = 0.5;
  CHECK_THROWS_AS(make_problem(pp), std::invalid_argument);
  pp.g_law.exponent = 0.51;
  pp.g_law.explicit_coeffs = {1.0, 2.0};
  CHECK_THROWS_AS(make_problem(pp), std::invalid_argument);
}

TEST_CASE("capacity condition") {
  ProblemParams pp;
  pp.n_terms = 8;
  const auto p = make_problem(pp);
  CHECK(p.capacity_holds(0.51));
  CHECK_FALSE(p.capacity_holds(0.5));
  CHECK_FALSE(p.capacity_holds(1.0));
}

TEST_CASE("sample CSV layout") {
  const auto p = make_problem(two_term());
  std::ostringstream os;
  write_samples_csv(os, p.sample(3, 1));
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,x,y,contaminated_flag");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(line.rfind(std::to_string(rows) + ",", 0) == 0);
  }
  CHECK(rows == 3);
}
