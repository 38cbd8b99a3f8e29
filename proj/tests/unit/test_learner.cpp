#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "rolr/kernels.hpp"
#include "rolr/learner.hpp"
#include "rolr/losses.hpp"
#include "rolr/problems.hpp"

using namespace rolr;

namespace {

std::vector<Sample> stream_for(const SyntheticProblem& p, std::size_t n, std::uint64_t seed) {
  return p.sample(n, seed);
}

SyntheticProblem noisy_problem(std::size_t n_terms = 256) {
  ProblemParams pp;
  pp.n_terms = n_terms;
  pp.gamma = 2.0;
  pp.r = 0.5;
  pp.noise = {0.5, 0.1, 2.5};
  return make_problem(pp);
}

double max_gap(const DualLearner& d, const FeatureLearner& f) {
  double gap = 0.0;
  for (int i = 0; i <= 200; ++i) {
    const double x = i / 200.0;
    gap = std::max(gap, std::abs(d.predict(x) - f.predict(x)));
  }
  return gap;
}

template <class F>
double best_of_three(F&& f) {
  double best = 1e300;
  for (int i = 0; i < 3; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

}  // namespace

TEST_CASE("initial state") {
  const SpectralKernel k = SpectralKernel::power_law(16, 2.0);
  DualLearner d(k, WindowingFunction::welsch(), 0.1, 1.0);
  CHECK(d.predict(0.5) == 0.0);
  CHECK(d.norm_sq() == 0.0);
  CHECK(d.t() == 1);
  const StepRecord rec = d.step(0.3, 0.0);
  CHECK(rec.coefficient == 0.0);
  for (int i = 0; i <= 10; ++i) CHECK(d.predict(i / 10.0) == 0.0);

  FeatureLearner f(k, WindowingFunction::welsch(), 0.1, 1.0);
  f.step(0.7, 0.0);
  for (double b : f.coeffs()) CHECK(b == 0.0);
}

TEST_CASE("nonpositive step or scale is rejected") {
  const SpectralKernel k({1.0});
  CHECK_THROWS_AS(DualLearner(k, WindowingFunction::welsch(), 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DualLearner(k, WindowingFunction::welsch(), 0.1, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(FeatureLearner(k, WindowingFunction::welsch(), -0.1, 1.0), std::invalid_argument);
}

TEST_CASE("one welsch step") {
  // a_1 = eta * W'(1) * 1 = 0.1 * 0.5 * exp(-1/2).
  const double expected = 0.1 * 0.5 * std::exp(-0.5);
  CHECK(expected == doctest::Approx(0.0303265).epsilon(1e-6));

  const SpectralKernel k = SpectralKernel::power_law(32, 2.0);
  DualLearner d(k, WindowingFunction::welsch(), 0.1, 1.0);
  const StepRecord rec = d.step(0.42, 1.0);
  CHECK(rec.xi == 1.0);
  CHECK(rec.w_prime == doctest::Approx(0.5 * std::exp(-0.5)).epsilon(1e-15));
  CHECK(d.coeffs()[0] == doctest::Approx(expected).epsilon(1e-15));
  CHECK(d.predict(0.42) == doctest::Approx(expected * k(0.42, 0.42)).epsilon(1e-14));

  const SpectralKernel flat({1.0});
  FeatureLearner f(flat, WindowingFunction::welsch(), 0.1, 1.0);
  f.step(0.9, 1.0);
  CHECK(f.coeffs()[0] == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("identity window ignores sigma") {
  const auto p = noisy_problem(64);
  const auto s = stream_for(p, 300, 5);
  const auto id = WindowingFunction::identity();
  DualLearner a(p.kernel(), id, 0.05, 1.0);
  DualLearner b(p.kernel(), id, 0.05, 10.0);
  for (const Sample& x : s) {
    const StepRecord ra = a.step(x);
    const StepRecord rb = b.step(x);
    CHECK(ra.coefficient == doctest::Approx(-0.05 * (ra.prediction - x.y)).epsilon(1e-15));
    CHECK(std::abs(ra.coefficient - rb.coefficient) <= 1e-12);
  }
}

TEST_CASE("dual and feature forms agree") {
  const auto p = noisy_problem();
  for (const auto& loss : builtin_windows()) {
    CAPTURE(loss.label());
    for (std::size_t len : {50u, 100u}) {
      const auto s = stream_for(p, len, 100 + len);
      const double kappa = p.kernel().kappa_bound();
      const double eta = 0.5 / (kappa * kappa * loss.c_w());
      DualLearner d(p.kernel(), loss, eta, 0.7);
      FeatureLearner f(p.kernel(), loss, eta, 0.7);
      consume(d, s, false);
      consume(f, s, false);
      CHECK(max_gap(d, f) <= 1e-8);
    }
  }
}

TEST_CASE("identity window reproduces an independent least-squares loop") {
  const auto p = noisy_problem(32);
  const auto s = stream_for(p, 200, 9);
  const auto& k = p.kernel();
  const std::vector<double> lam(k.eigenvalues().begin(), k.eigenvalues().end());
  // f_{t+1} = f_t - eta (f_t(x_t) - y_t) K_{x_t}, kernel evaluated from the series directly.
  auto kern = [&](double x, double y) {
    double v = lam[0];
    for (std::size_t j = 1; j < lam.size(); ++j) {
      const double w = 2.0 * std::numbers::pi * static_cast<double>((j + 1) / 2);
      v += 2.0 * lam[j] * (j % 2 == 1 ? std::cos(w * x) * std::cos(w * y) : std::sin(w * x) * std::sin(w * y));
    }
    return v;
  };
  const double eta = 0.1;
  std::vector<double> xs;
  std::vector<double> as;
  for (const Sample& z : s) {
    double f = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) f += as[i] * kern(xs[i], z.x);
    xs.push_back(z.x);
    as.push_back(-eta * (f - z.y));
  }
  const RunOutput out = run(s, eta, 3.0, WindowingFunction::identity(), k, Representation::dual);
  const auto& d = std::get<DualLearner>(out.state);
  for (std::size_t i = 0; i < as.size(); ++i) CHECK(d.coeffs()[i] == doctest::Approx(as[i]).epsilon(1e-10).scale(1.0));
}

TEST_CASE("run with a single sample equals one step") {
  const SpectralKernel k = SpectralKernel::power_law(8, 2.0);
  const std::vector<Sample> one{{0.25, 0.8, false}};
  const RunOutput out = run(one, 0.2, 1.0, WindowingFunction::cauchy(), k, Representation::dual, true);
  DualLearner d(k, WindowingFunction::cauchy(), 0.2, 1.0);
  const StepRecord rec = d.step(0.25, 0.8);
  REQUIRE(out.log.size() == 1);
  CHECK(out.log[0].coefficient == rec.coefficient);
  CHECK(out.predict(0.4) == d.predict(0.4));
  CHECK_THROWS_AS(run({}, 0.1, 1.0, WindowingFunction::welsch(), k, Representation::dual), std::invalid_argument);
  const GaussianKernel g(0.3);
  CHECK_THROWS_AS(run(one, 0.1, 1.0, WindowingFunction::welsch(), g, Representation::feature),
                  std::invalid_argument);
}

TEST_CASE("norm tracking agrees across routes") {
  const auto p = noisy_problem(64);
  const auto s = stream_for(p, 150, 41);
  DualLearner d(p.kernel(), WindowingFunction::fair(), 0.2, 1.5);
  FeatureLearner f(p.kernel(), WindowingFunction::fair(), 0.2, 1.5);
  consume(d, s, false);
  consume(f, s, false);
  CHECK(d.norm_sq() == doctest::Approx(d.norm_sq_gram()).epsilon(1e-10));
  CHECK(f.norm_sq() == doctest::Approx(d.norm_sq_gram()).epsilon(1e-8));
}

TEST_CASE("norm bound at every step for admissible step sizes") {
  const auto p = noisy_problem(64);
  const double kappa = p.kernel().kappa_bound();
  const double M = p.M();
  std::uint64_t seed = 1;
  for (const auto& loss : builtin_windows()) {
    for (double u : {0.1, 0.55, 1.0}) {
      const double eta = u / (kappa * kappa * loss.c_w());
      const auto s = stream_for(p, 400, seed++);
      DualLearner d(p.kernel(), loss, eta, 0.5);
      for (const Sample& z : s) {
        const StepRecord rec = d.step(z);
        CHECK(rec.norm_sq <= M * M * loss.c_w() * eta * static_cast<double>(rec.t) * (1.0 + 1e-9));
      }
      CHECK(d.norm_sq_gram() <= M * M * loss.c_w() * eta * 400.0 * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("divergence is an error, not a clamp") {
  const SpectralKernel flat({1.0});
  DualLearner d(flat, WindowingFunction::identity(), 5.0, 1.0);
  bool threw = false;
  try {
    for (int i = 0; i < 2000; ++i) d.step(0.5, 1.0);
  } catch (const DivergenceError&) {
    threw = true;
  }
  CHECK(threw);
}

TEST_CASE("min_eta0 examples") {
  CHECK(min_eta0(WindowingFunction::welsch(), 1.0) == doctest::Approx(std::pow(1.0 / std::numbers::e + 1.0, 2)));
  CHECK(min_eta0(WindowingFunction::welsch(), 1.0) == doctest::Approx(1.8711).epsilon(1e-4));
  CHECK(min_eta0(WindowingFunction::identity(), 1.0) == doctest::Approx(5.6065).epsilon(1e-4));
  CHECK(min_eta0(WindowingFunction::cauchy(), 1e-9) == doctest::Approx(std::exp(-2.0)).epsilon(1e-6));
  CHECK(min_eta0(WindowingFunction::tukey(1.0), 3.0) == doctest::Approx(std::pow(1.0 / std::numbers::e + 9.0, 2)));
  CHECK_THROWS_AS(min_eta0(WindowingFunction::welsch(), 0.0), std::invalid_argument);
}

TEST_CASE("schedule examples") {
  const Schedule a = schedule_l2(1000, 0.5, 2.0, 1.0);
  CHECK(a.eta == doctest::Approx(0.0158114).epsilon(1e-6));
  CHECK(a.sigma_min == doctest::Approx(74.989).epsilon(1e-5));
  const Schedule one = schedule_l2(1, 0.5, 2.0, 1.0);
  CHECK(one.eta == 0.5);
  CHECK(one.sigma_min == 1.0);

  const Schedule b = schedule_rkhs(1000, 1.0, 0.5, 2.0, 1.0);
  CHECK(b.eta == doctest::Approx(0.0079245).epsilon(1e-5));
  CHECK(b.sigma_min == doctest::Approx(63.096).epsilon(1e-5));
  CHECK(schedule_rkhs(1, 1.0, 0.5, 4.0, 1.0).eta == 0.25);
  CHECK_THROWS_AS(schedule_rkhs(1000, 0.5, 0.5, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(schedule_rkhs(1000, 1.0, 1.0, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("schedules reject eta0 below the floor") {
  const auto w = WindowingFunction::welsch();
  CHECK_THROWS_AS(schedule_l2(100, 0.5, 1.0, w, 1.0), std::invalid_argument);
  CHECK_NOTHROW(schedule_l2(100, 0.5, min_eta0(w, 1.0), w, 1.0));
  CHECK_THROWS_AS(schedule_rkhs(100, 1.0, 0.3, 1.5, w, 1.0), std::invalid_argument);
}

TEST_CASE("dual cost grows quadratically, feature cost linearly") {
  const auto p = noisy_problem(256);
  const auto s = stream_for(p, 2000, 77);
  const std::span<const Sample> all(s);
  const auto w = WindowingFunction::welsch();
  auto dual = [&](std::size_t n) {
    return best_of_three([&] {
      DualLearner d(p.kernel(), w, 0.1, 1.0);
      consume(d, all.first(n), false);
    });
  };
  auto feat = [&](std::size_t n) {
    return best_of_three([&] {
      FeatureLearner f(p.kernel(), w, 0.1, 1.0);
      consume(f, all.first(n), false);
    });
  };
  const double dual_ratio = dual(2000) / dual(1000);
  const double feat_ratio = feat(2000) / feat(1000);
  MESSAGE("dual time ratio " << dual_ratio << ", feature time ratio " << feat_ratio);
  CHECK(dual_ratio > 2.8);
  CHECK(feat_ratio < 2.8);
}
