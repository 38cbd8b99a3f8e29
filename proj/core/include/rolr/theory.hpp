#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rolr/learner.hpp"
#include "rolr/losses.hpp"
#include "rolr/problems.hpp"

namespace rolr {

/// One numerical check of an inequality lhs <= rhs.
struct BoundCheckRecord {
  std::string name;
  std::string params;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool pass = false;
  /// Informational records describe which hypothesis holds; they never fail a suite.
  bool informational = false;
  std::string note;
};

/// Fills slack and pass: pass iff slack >= -tol * max(1, |rhs|).
BoundCheckRecord make_record(std::string name, std::string params, double lhs, double rhs,
                             double tol = 1e-12);

/// True iff every non-informational record passes.
bool all_passed(std::span<const BoundCheckRecord> records);

/// Operator-norm bound: max over the spectrum of lambda^alpha (1 - eta w lambda)^s
/// against (alpha / (e w))^alpha (eta s)^{-alpha}. The left side also includes the
/// sup of the continuous relaxation on (0, lambda_1].
/// Throws std::invalid_argument unless alpha > 0, s > 0 and eta w lambda_1 < 1.
BoundCheckRecord lemma1_check(std::span<const double> spectrum, double alpha, double s, double eta,
                              double w_plus_zero);

/// ||f_{t+1}||_K^2 <= M^2 C_W eta t at every logged step, with relative tolerance
/// 1e-9. If eta > 1/(kappa^2 C_W) the records are marked informational.
std::vector<BoundCheckRecord> prop2_check(std::span<const StepRecord> log, double M, double c_w,
                                          double eta, double kappa);

/// Per-step bound on the perturbation |W'+(0) - W'(xi_t)| |f_t(x_t) - y_t| sqrt(K(x_t, x_t))
/// by kappa c_p (M + kappa M sqrt(C_W))^{2p+1} (eta T)^{p+1/2} / sigma^{2p}.
std::vector<BoundCheckRecord> esigma_bound_check(std::span<const StepRecord> log,
                                                 const WindowingFunction& loss, double M,
                                                 double kappa, double eta, std::size_t T,
                                                 double sigma);

/// Informational: whether eta0 clears the floor, and whether
/// eta <= 1 / ((1/e + 2 kappa^2 W'+(0))^2 log T) also holds.
std::vector<BoundCheckRecord> step_size_conditions(const WindowingFunction& loss, double kappa,
                                                   double eta0, double eta, std::size_t T);

/// Problem and loss constants entering the explicit rate constants.
struct TheoryInputs {
  double kappa = 1.0;
  double M = 1.0;
  double g_norm_sq = 0.0;
  double f_l2_norm_sq = 0.0;
  double f_rkhs_norm_sq = 0.0;
  double noise_variance = 0.0;
  double r = 0.5;
  double eta0 = 1.0;
  double beta = 1.0;
  double trace_beta = 0.0;  // Tr(L_K^beta)
  double w_plus_zero = 1.0;
  double c_w = 1.0;
  double p = 1.0;
  double c_p = 0.0;
};

/// Fills TheoryInputs from a problem; beta (0 < beta <= 1) only matters for the
/// RKHS constant.
TheoryInputs theory_inputs(const SyntheticProblem& problem, const WindowingFunction& loss,
                           double eta0, double beta = 1.0);

/// 2 kappa^2 c_p^2 (M + kappa M sqrt(C_W))^{4p+2} (kappa + sqrt(2/(e W'+(0))))^2.
double constant_c1(const TheoryInputs& in);
/// 6||f||_K^2 + 8 (kappa W'+(0))^2 (E(f_rho) + 2||f||_rho^2 + C1)
/// + 2 kappa^2 c_p^2 (M + kappa M sqrt(C_W))^{4p+2}.
double constant_c2(const TheoryInputs& in);
/// Constant C of the L2 rate.
double theorem1_constant(const TheoryInputs& in);
/// Constant C~ of the RKHS rate, with the a-priori norm constant taken as C2.
double theorem2_constant(const TheoryInputs& in);

/// mean L2 error <= C max{T^{-2r/(2r+1)} log T, T^{(2p+2)/(2r+1)} sigma^{-4p}}.
BoundCheckRecord theorem1_sanity(double mean_l2_error, const TheoryInputs& in, std::size_t T,
                                 double sigma);
/// mean RKHS error <= C~ max{T^{-(2r-1)/(2r+beta)}, T^{(2p+3)/(2r+beta)} sigma^{-4p}}.
BoundCheckRecord theorem2_sanity(double mean_rkhs_error, const TheoryInputs& in, std::size_t T,
                                 double sigma);

}  // namespace rolr
