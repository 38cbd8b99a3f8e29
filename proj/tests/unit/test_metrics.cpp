#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "rolr/learner.hpp"
#include "rolr/metrics.hpp"
#include "rolr/problems.hpp"

using namespace rolr;

namespace {

SyntheticProblem noisy(std::size_t n_terms = 32) {
  ProblemParams pp;
  pp.n_terms = n_terms;
  pp.noise = {0.5, 0.1, 2.5};
  return make_problem(pp);
}

}  // namespace

TEST_CASE("coefficients of a one-point expansion") {
  const SpectralKernel k({1.0, 0.5});
  const std::vector<double> x{0.0};
  const std::vector<double> a{1.0};
  const KernelExpansion f{x, a, &k};
  const auto c = estimator_coeffs(f);
  REQUIRE(c.size() == 2);
  CHECK(c[0] == doctest::Approx(1.0));
  CHECK(c[1] == doctest::Approx(std::sqrt(0.5)));

  const GaussianKernel g(0.1);
  CHECK_THROWS_AS(estimator_coeffs(KernelExpansion{x, a, &g}), std::invalid_argument);
}

TEST_CASE("zero estimator has the target norms as errors") {
  const auto p = noisy();
  const std::vector<double> zero(p.n_terms(), 0.0);
  CHECK(l2_error_exact(zero, p) == doctest::Approx(p.l2_norm_sq()));
  CHECK(rkhs_error_exact(zero, p) == doctest::Approx(p.rkhs_norm_sq()));
  const std::vector<double> same(p.target_coeffs().begin(), p.target_coeffs().end());
  CHECK(l2_error_exact(same, p) == 0.0);
  CHECK(rkhs_error_exact(same, p) == 0.0);
  const std::vector<double> short_vec(3, 0.0);
  CHECK_THROWS_AS(l2_error_exact(short_vec, p), std::invalid_argument);

  const SpectralKernel& k = p.kernel();
  DualLearner d(k, WindowingFunction::welsch(), 0.1, 1.0);
  const ErrorReport rep = evaluate(d.expansion(), p);
  CHECK(rep.l2_sq == doctest::Approx(p.l2_norm_sq()));
  CHECK(rep.rkhs_sq == doctest::Approx(p.rkhs_norm_sq()));
  CHECK(rep.l2_method == ErrorMethod::exact);
}

TEST_CASE("error routes agree on trained states") {
  const auto p = noisy();
  const auto data = p.sample(100, 31);
  for (const auto& loss : builtin_windows()) {
    CAPTURE(loss.label());
    const RunOutput dual = run(data, 0.2, 1.5, loss, p.kernel(), Representation::dual);
    const RunOutput feat = run(data, 0.2, 1.5, loss, p.kernel(), Representation::feature);
    const auto& d = std::get<DualLearner>(dual.state);
    const auto cd = estimator_coeffs(dual);
    const auto cf = estimator_coeffs(feat);
    for (std::size_t k = 0; k < cd.size(); ++k) CHECK(cd[k] == doctest::Approx(cf[k]).epsilon(1e-9).scale(1.0));

    const double exact_rk = rkhs_error_exact(cd, p);
    CHECK(std::abs(rkhs_error_gram(d.expansion(), p) - exact_rk) <= 1e-6 * std::max(1.0, exact_rk));

    const double l2 = l2_error_exact(cd, p);
    CHECK(l2 <= p.kernel().eigenvalues()[0] * exact_rk + 1e-12);

    const McEstimate mc = l2_error_mc([&](double x) { return dual.predict(x); }, p, 20000, 5);
    CHECK(std::abs(mc.mean - l2) <= 3.0 * mc.std_error + 1e-12);

    const double ex = excess_risk([&](double x) { return dual.predict(x); }, p);
    CHECK(ex == doctest::Approx(l2).epsilon(1e-9).scale(1.0));

    const ErrorReport rep = evaluate(feat, p);
    CHECK(rep.l2_sq == doctest::Approx(l2).epsilon(1e-9));
    CHECK(rep.rkhs_sq == doctest::Approx(exact_rk).epsilon(1e-9));
    CHECK(rep.excess_method == ErrorMethod::quad);
  }
}

TEST_CASE("expected risk of the target is the noise variance") {
  const auto p = noisy(16);
  const double risk = expected_risk([&](double x) { return p.eval_target(x); }, p);
  CHECK(risk == doctest::Approx(p.noise_variance()).epsilon(1e-12));
  CHECK(excess_risk([&](double x) { return p.eval_target(x); }, p) == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
}

TEST_CASE("non-spectral kernels fall back to Monte Carlo") {
  const auto p = noisy(16);
  const GaussianKernel g(0.1);
  const auto data = p.sample(50, 2);
  const RunOutput out = run(data, 0.2, 1.0, WindowingFunction::cauchy(), g, Representation::dual);
  EvalOptions opt;
  opt.mc_points = 5000;
  const ErrorReport rep = evaluate(out, p, opt);
  CHECK(rep.l2_method == ErrorMethod::mc);
  CHECK(rep.rkhs_method == ErrorMethod::unavailable);
  CHECK(std::isnan(rep.rkhs_sq));
  CHECK(rep.l2_sq > 0.0);
  CHECK(to_string(ErrorMethod::unavailable) == "none");
  CHECK(to_string(ErrorMethod::gram) == "gram");
}
