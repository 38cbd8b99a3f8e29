#include "rolr/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace rolr {
namespace {

constexpr double kE = std::numbers::e;

template <class... Args>
std::string describe(const Args&... kv) {
  std::ostringstream os;
  os.precision(10);
  bool first = true;
  auto put = [&](const auto& v) {
    if (!first) os << ';';
    first = false;
    os << v;
  };
  (put(kv), ...);
  return os.str();
}

std::string kv(const char* key, double v) {
  std::ostringstream os;
  os.precision(10);
  os << key << '=' << v;
  return os.str();
}

double holder_base(const TheoryInputs& in, double power) {
  return std::pow(in.M + in.kappa * in.M * std::sqrt(in.c_w), power);
}

}  // namespace

BoundCheckRecord make_record(std::string name, std::string params, double lhs, double rhs,
                             double tol) {
  BoundCheckRecord rec;
  rec.name = std::move(name);
  rec.params = std::move(params);
  rec.lhs = lhs;
  rec.rhs = rhs;
  rec.slack = rhs - lhs;
  rec.pass = rec.slack >= -tol * std::max(1.0, std::abs(rhs));
  return rec;
}

bool all_passed(std::span<const BoundCheckRecord> records) {
  return std::all_of(records.begin(), records.end(),
                     [](const BoundCheckRecord& r) { return r.informational || r.pass; });
}

BoundCheckRecord lemma1_check(std::span<const double> spectrum, double alpha, double s, double eta,
                              double w) {
  if (spectrum.empty()) throw std::invalid_argument("lemma1_check needs a nonempty spectrum");
  if (!(alpha > 0.0) || !(s > 0.0)) throw std::invalid_argument("lemma1_check needs alpha, s > 0");
  if (!(eta > 0.0) || !(w > 0.0)) throw std::invalid_argument("lemma1_check needs eta, w > 0");
  const double lam1 = *std::max_element(spectrum.begin(), spectrum.end());
  if (!(eta * w * lam1 < 1.0)) {
    throw std::invalid_argument("lemma1_check needs eta * W'+(0) * lambda_1 < 1");
  }
  auto h = [&](double x) { return std::pow(x, alpha) * std::pow(1.0 - eta * w * x, s); };
  double lhs = 0.0;
  for (double lam : spectrum) lhs = std::max(lhs, h(lam));
  // h increases up to its stationary point alpha / (eta w (alpha + s)).
  const double x_star = std::min(lam1, alpha / (eta * w * (alpha + s)));
  lhs = std::max(lhs, h(x_star));
  const double rhs = std::pow(alpha / (kE * w), alpha) * std::pow(eta * s, -alpha);
  return make_record("lemma1",
                     describe(kv("alpha", alpha), kv("s", s), kv("eta", eta), kv("w", w),
                              kv("lambda1", lam1)),
                     lhs, rhs);
}

std::vector<BoundCheckRecord> prop2_check(std::span<const StepRecord> log, double M, double c_w,
                                          double eta, double kappa) {
  const bool admissible = eta <= 1.0 / (kappa * kappa * c_w);
  std::vector<BoundCheckRecord> out;
  out.reserve(log.size());
  for (const StepRecord& rec : log) {
    const double rhs = M * M * c_w * eta * static_cast<double>(rec.t);
    BoundCheckRecord r = make_record("prop2", describe(kv("t", static_cast<double>(rec.t)), kv("eta", eta)),
                                     rec.norm_sq, rhs, 1e-9);
    if (!admissible) {
      r.informational = true;
      r.note = "precondition eta <= 1/(kappa^2 C_W) violated";
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<BoundCheckRecord> esigma_bound_check(std::span<const StepRecord> log,
                                                 const WindowingFunction& loss, double M,
                                                 double kappa, double eta, std::size_t T,
                                                 double sigma) {
  const double p = loss.p();
  const double rhs = kappa * loss.c_p() *
                     std::pow(M + kappa * M * std::sqrt(loss.c_w()), 2.0 * p + 1.0) *
                     std::pow(eta * static_cast<double>(T), p + 0.5) / std::pow(sigma, 2.0 * p);
  std::vector<BoundCheckRecord> out;
  out.reserve(log.size());
  for (const StepRecord& rec : log) {
    const double lhs = std::abs(loss.w_plus_zero() - rec.w_prime) *
                       std::abs(rec.prediction - rec.y) * std::sqrt(rec.kernel_diag);
    out.push_back(make_record("esigma",
                              describe(kv("t", static_cast<double>(rec.t)), kv("sigma", sigma)),
                              lhs, rhs));
  }
  return out;
}

std::vector<BoundCheckRecord> step_size_conditions(const WindowingFunction& loss, double kappa,
                                                   double eta0, double eta, std::size_t T) {
  std::vector<BoundCheckRecord> out;
  BoundCheckRecord floor = make_record("eta0_floor", describe(kv("kappa", kappa)),
                                       min_eta0(loss, kappa), eta0);
  floor.informational = true;
  floor.note = floor.pass ? "eta0 clears the admissible floor"
                          : "eta0 below the admissible floor";
  out.push_back(std::move(floor));

  const double lt = std::log(static_cast<double>(T));
  const double base = 1.0 / kE + 2.0 * kappa * kappa * loss.w_plus_zero();
  const double cap = lt > 0.0 ? 1.0 / (base * base * lt) : std::numeric_limits<double>::infinity();
  BoundCheckRecord logc = make_record("eta_log_condition",
                                      describe(kv("T", static_cast<double>(T)), kv("kappa", kappa)),
                                      eta, cap);
  logc.informational = true;
  logc.note = logc.pass ? "log T step condition holds" : "log T step condition does not hold";
  out.push_back(std::move(logc));
  return out;
}

TheoryInputs theory_inputs(const SyntheticProblem& problem, const WindowingFunction& loss,
                           double eta0, double beta) {
  TheoryInputs in;
  in.kappa = problem.kernel().kappa_bound();
  in.M = problem.M();
  in.g_norm_sq = problem.g_norm_sq();
  in.f_l2_norm_sq = problem.l2_norm_sq();
  in.f_rkhs_norm_sq = problem.rkhs_norm_sq();
  in.noise_variance = problem.noise_variance();
  in.r = problem.r();
  in.eta0 = eta0;
  in.beta = beta;
  in.trace_beta = problem.kernel().trace_power(beta);
  in.w_plus_zero = loss.w_plus_zero();
  in.c_w = loss.c_w();
  in.p = loss.p();
  in.c_p = loss.c_p();
  return in;
}

double constant_c1(const TheoryInputs& in) {
  const double tail = in.kappa + std::sqrt(2.0 / (kE * in.w_plus_zero));
  return 2.0 * in.kappa * in.kappa * in.c_p * in.c_p * holder_base(in, 4.0 * in.p + 2.0) * tail *
         tail;
}

double constant_c2(const TheoryInputs& in) {
  const double kw = in.kappa * in.w_plus_zero;
  return 6.0 * in.f_rkhs_norm_sq +
         8.0 * kw * kw * (in.noise_variance + 2.0 * in.f_l2_norm_sq + constant_c1(in)) +
         2.0 * in.kappa * in.kappa * in.c_p * in.c_p * holder_base(in, 4.0 * in.p + 2.0);
}

double theorem1_constant(const TheoryInputs& in) {
  const double w = in.w_plus_zero;
  const double kw = in.kappa * w;
  const double c1 = constant_c1(in);
  const double mix = in.kappa * in.kappa + 1.0 / (2.0 * kE * w);
  const double eta_pow = std::pow(in.eta0, -(2.0 * in.p + 2.0));
  return 2.0 * std::pow(in.r / (kE * w), 2.0 * in.r) * in.g_norm_sq * std::pow(in.eta0, 2.0 * in.r) +
         4.0 * in.eta0 * kw * kw * (in.noise_variance + 2.0 * in.f_l2_norm_sq + c1) * mix * mix *
             (1.0 + eta_pow) +
         c1 * eta_pow;
}

double theorem2_constant(const TheoryInputs& in) {
  const double w = in.w_plus_zero;
  const double r = in.r;
  const double b = in.beta;
  const double k2 = in.kappa * in.kappa;
  const double eta_pow = std::pow(in.eta0, -(2.0 * in.p + 3.0));
  const double first = 2.0 * std::pow((r - 0.5) / (kE * w), 2.0 * r - 1.0) * in.g_norm_sq *
                       std::pow(in.eta0, 2.0 * r - 1.0);
  const double second = 2.0 * k2 * in.c_p * in.c_p * holder_base(in, 4.0 * in.p + 2.0) * eta_pow;
  const double capacity = std::pow(in.kappa, 2.0 - 2.0 * b) +
                          std::pow((1.0 - b) / (kE * w), 1.0 - b) / b;
  const double third = 2.0 * w * w * in.trace_beta *
                       (k2 * constant_c2(in) * (1.0 + eta_pow) + in.M * in.M) * capacity *
                       std::pow(in.eta0, -(1.0 + b));
  return first + second + third;
}

BoundCheckRecord theorem1_sanity(double mean_l2_error, const TheoryInputs& in, std::size_t T,
                                 double sigma) {
  const double t = static_cast<double>(T);
  const double r = in.r;
  const double p = in.p;
  // log T vanishes at T = 1; keep the bias term alive there.
  const double lt = std::max(std::log(t), 1.0);
  const double rate = std::max(std::pow(t, -2.0 * r / (2.0 * r + 1.0)) * lt,
                               std::pow(t, (2.0 * p + 2.0) / (2.0 * r + 1.0)) *
                                   std::pow(sigma, -4.0 * p));
  const double c = theorem1_constant(in);
  BoundCheckRecord rec = make_record(
      "theorem1", describe(kv("T", t), kv("sigma", sigma), kv("eta0", in.eta0), kv("C", c)),
      mean_l2_error, c * rate);
  return rec;
}

BoundCheckRecord theorem2_sanity(double mean_rkhs_error, const TheoryInputs& in, std::size_t T,
                                 double sigma) {
  const double t = static_cast<double>(T);
  const double r = in.r;
  const double p = in.p;
  const double b = in.beta;
  const double rate = std::max(std::pow(t, -(2.0 * r - 1.0) / (2.0 * r + b)),
                               std::pow(t, (2.0 * p + 3.0) / (2.0 * r + b)) *
                                   std::pow(sigma, -4.0 * p));
  const double c = theorem2_constant(in);
  return make_record("theorem2",
                     describe(kv("T", t), kv("sigma", sigma), kv("eta0", in.eta0),
                              kv("beta", b), kv("C", c)),
                     mean_rkhs_error, c * rate);
}

}  // namespace rolr
