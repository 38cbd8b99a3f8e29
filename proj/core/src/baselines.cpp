#include "rolr/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rolr {
namespace {

constexpr std::size_t kDenseLimit = 10000;

// Computes pred[i] = g(x_i) for the current coefficients.
class GramOperator {
 public:
  GramOperator(std::span<const Sample> data, const Kernel& kernel, GramMode mode)
      : data_(data), kernel_(kernel), n_(data.size()), mode_(resolve(mode, kernel, data.size())) {
    if (mode_ == GramMode::dense) {
      gram_.resize(n_ * n_);
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i; j < n_; ++j) {
          const double k = kernel_(data_[i].x, data_[j].x);
          gram_[i * n_ + j] = k;
          gram_[j * n_ + i] = k;
        }
      }
    } else if (mode_ == GramMode::factored) {
      dim_ = kernel_.feature_dim();
      if (dim_ == 0) throw std::invalid_argument("factored Gram mode needs a kernel feature map");
      features_.resize(n_ * dim_);
      for (std::size_t i = 0; i < n_; ++i) {
        kernel_.feature_map(data_[i].x, {features_.data() + i * dim_, dim_});
      }
      projected_.resize(dim_);
    }
  }

  GramMode mode() const { return mode_; }

  void apply(std::span<const double> a, std::span<double> pred) {
    switch (mode_) {
      case GramMode::dense:
        for (std::size_t i = 0; i < n_; ++i) {
          const double* row = gram_.data() + i * n_;
          double s = 0.0;
          for (std::size_t j = 0; j < n_; ++j) s += row[j] * a[j];
          pred[i] = s;
        }
        break;
      case GramMode::factored:
        std::fill(projected_.begin(), projected_.end(), 0.0);
        for (std::size_t j = 0; j < n_; ++j) {
          const double* row = features_.data() + j * dim_;
          for (std::size_t k = 0; k < dim_; ++k) projected_[k] += a[j] * row[k];
        }
        for (std::size_t i = 0; i < n_; ++i) {
          const double* row = features_.data() + i * dim_;
          double s = 0.0;
          for (std::size_t k = 0; k < dim_; ++k) s += row[k] * projected_[k];
          pred[i] = s;
        }
        break;
      case GramMode::matrix_free:
      case GramMode::automatic:
        for (std::size_t i = 0; i < n_; ++i) {
          double s = 0.0;
          for (std::size_t j = 0; j < n_; ++j) s += a[j] * kernel_(data_[j].x, data_[i].x);
          pred[i] = s;
        }
        break;
    }
  }

 private:
  static GramMode resolve(GramMode mode, const Kernel& kernel, std::size_t n) {
    if (mode != GramMode::automatic) return mode;
    if (kernel.feature_dim() > 0 && kernel.feature_dim() < n) return GramMode::factored;
    return n <= kDenseLimit ? GramMode::dense : GramMode::matrix_free;
  }

  std::span<const Sample> data_;
  const Kernel& kernel_;
  std::size_t n_;
  GramMode mode_;
  std::size_t dim_ = 0;
  std::vector<double> gram_;
  std::vector<double> features_;
  std::vector<double> projected_;
};

}  // namespace

BatchGDState batch_gd_run(std::span<const Sample> data, const WindowingFunction& loss,
                          const Kernel& kernel, const BatchGDOptions& options) {
  if (data.empty()) throw std::invalid_argument("batch_gd_run needs at least one sample");
  if (options.n_iters < 1) throw std::invalid_argument("batch_gd_run needs n_iters >= 1");
  if (!(options.eta1 > 0.0)) throw std::invalid_argument("batch_gd_run needs eta1 > 0");
  if (!(options.theta >= 0.0 && options.theta < 1.0)) {
    throw std::invalid_argument("batch_gd_run needs 0 <= theta < 1");
  }
  if (!(options.sigma > 0.0)) throw std::invalid_argument("batch_gd_run needs sigma > 0");

  const std::size_t n = data.size();
  BatchGDState state;
  state.kernel = &kernel;
  state.support.reserve(n);
  for (const Sample& s : data) state.support.push_back(s.x);
  state.coeffs.assign(n, 0.0);

  GramOperator gram(data, kernel, options.mode);
  state.mode_used = gram.mode();
  std::vector<double> pred(n, 0.0);
  std::vector<double> step(n);
  const double inv_n = 1.0 / static_cast<double>(n);

  for (std::size_t it = 1; it <= options.n_iters; ++it) {
    const double eta_t = options.eta1 * std::pow(static_cast<double>(it), -options.theta);
    // Gradient factors for every sample first; the coefficient update is a barrier.
    for (std::size_t i = 0; i < n; ++i) {
      const UpdateFactor f = update_factor(loss, eta_t * inv_n, options.sigma, pred[i], data[i].y);
      if (!std::isfinite(f.coefficient)) {
        throw DivergenceError("batch gradient descent iterate became non-finite");
      }
      step[i] = f.coefficient;
    }
    for (std::size_t i = 0; i < n; ++i) state.coeffs[i] += step[i];
    state.iteration = it;
    gram.apply(state.coeffs, pred);
  }
  return state;
}

double empirical_risk(const BatchGDState& state, std::span<const Sample> data,
                      const WindowingFunction& loss, double sigma) {
  if (data.empty()) return 0.0;
  double total = 0.0;
  for (const Sample& s : data) {
    const double u = state.predict(s.x) - s.y;
    total += loss.value(u * u / (sigma * sigma));
  }
  return total / static_cast<double>(data.size());
}

std::size_t early_stop_iters(std::size_t T, double beta, double theta) {
  if (T < 1) throw std::invalid_argument("early_stop_iters needs T >= 1");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("early_stop_iters needs 0 < beta < 1");
  if (!(theta >= 0.0 && theta < 1.0)) {
    throw std::invalid_argument("early_stop_iters needs 0 <= theta < 1");
  }
  const double value =
      std::pow(static_cast<double>(T), 1.0 / ((1.0 + beta) * (1.0 - theta))) + 1.0;
  // pow() can land a few ulps above an exact integer (1000^{2/3} = 100); snap those
  // before taking the ceiling.
  const double nearest = std::round(value);
  if (std::abs(value - nearest) <= 1e-9 * nearest) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(value));
}

DualLearner online_ls_run(std::span<const Sample> stream, double eta, const Kernel& kernel) {
  DualLearner learner(kernel, WindowingFunction::identity(), eta, 1.0);
  consume(learner, stream, false);
  return learner;
}

}  // namespace rolr
