#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rolr/kernels.hpp"
#include "rolr/learner.hpp"
#include "rolr/losses.hpp"
#include "rolr/sample.hpp"

namespace rolr {

/// How batch gradient descent obtains g_t(x_i) over the training inputs.
enum class GramMode {
  automatic,  // factored when the kernel has a feature map, else dense up to 10^4 points
  dense,      // precomputed T x T kernel matrix
  factored,   // G = Psi Psi^T with Psi the T x N feature matrix
  matrix_free // kernel rows recomputed on every iteration
};

struct BatchGDOptions {
  double sigma = 1.0;
  double eta1 = 1.0;
  double theta = 0.0;  // eta_t = eta1 * t^{-theta}
  std::size_t n_iters = 1;
  GramMode mode = GramMode::automatic;
};

/// g_t = sum_{i <= T} a_i K(x_i, .) after `iteration` full-gradient updates.
struct BatchGDState {
  std::vector<double> support;
  std::vector<double> coeffs;
  std::size_t iteration = 0;
  const Kernel* kernel = nullptr;
  GramMode mode_used = GramMode::dense;

  KernelExpansion expansion() const { return {support, coeffs, kernel}; }
  double predict(double x) const { return expansion()(x); }
};

/// Batch gradient descent with robust loss:
/// g_{t+1} = g_t - (eta_t / T) sum_i W'(xi_{t,i}) (g_t(x_i) - y_i) K_{x_i}, g_1 = 0.
/// Throws std::invalid_argument on bad options and DivergenceError on a non-finite iterate.
BatchGDState batch_gd_run(std::span<const Sample> data, const WindowingFunction& loss,
                          const Kernel& kernel, const BatchGDOptions& options);

/// (1/T) sum_i L_sigma(g(x_i) - y_i).
double empirical_risk(const BatchGDState& state, std::span<const Sample> data,
                      const WindowingFunction& loss, double sigma);

/// ceil(T^{1/((1+beta)(1-theta))} + 1), with 0 < beta < 1 and 0 <= theta < 1.
std::size_t early_stop_iters(std::size_t T, double beta, double theta);

/// Online least squares g_{t+1} = g_t - eta (g_t(x_t) - y_t) K_{x_t}: the online
/// learner with the identity window W(s) = s.
DualLearner online_ls_run(std::span<const Sample> stream, double eta, const Kernel& kernel);

}  // namespace rolr
