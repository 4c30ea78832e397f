#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "sasha/errors.hpp"
#include "sasha/layers.hpp"

namespace sasha {

enum class OptAlgo { adam, adamw };
enum class LrSchedule { constant, cosine };

struct OptimizerConfig {
  OptAlgo algorithm = OptAlgo::adamw;
  double lr0 = 1e-3;
  double weight_decay = 0.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  LrSchedule schedule = LrSchedule::constant;
  std::int64_t total_steps = 0;  // cosine horizon; required when schedule == cosine

  void validate() const {
    if (!(lr0 > 0.0)) throw ConfigError("optimizer: lr0 must be positive");
    if (weight_decay < 0.0) throw ConfigError("optimizer: weight_decay must be nonnegative");
    if (schedule == LrSchedule::cosine && total_steps <= 0)
      throw ConfigError("optimizer: cosine schedule needs total_steps > 0");
  }
};

/// Learning rate for a given 0-based step: lr0 at step 0, 0 at step >= total.
inline double scheduled_lr(const OptimizerConfig& cfg, std::int64_t step) {
  if (cfg.schedule == LrSchedule::constant) return cfg.lr0;
  const double t = std::min<double>(1.0, static_cast<double>(step) / static_cast<double>(cfg.total_steps));
  constexpr double kPi = 3.14159265358979323846;
  return cfg.lr0 * 0.5 * (1.0 + std::cos(kPi * t));
}

/// First and second moment accumulators, one flat buffer per parameter tensor.
struct AdamState {
  std::vector<Vec> m;
  std::vector<Vec> v;

  explicit AdamState(const ParamRefs& params) {
    m.reserve(params.size());
    v.reserve(params.size());
    for (const auto& p : params) {
      m.emplace_back(p.data->size(), 0.0);
      v.emplace_back(p.data->size(), 0.0);
    }
  }
};

/// One Adam / AdamW update with the scheduled learning rate for `step`
/// (0-based). Refuses the step if any gradient is non-finite.
inline void optimizer_step(const ParamRefs& params, const ParamRefs& grads, AdamState& state,
                           const OptimizerConfig& cfg, std::int64_t step) {
  cfg.validate();
  if (params.size() != grads.size() || params.size() != state.m.size())
    throw DimensionError("optimizer_step: parameter/gradient/state count mismatch");
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (grads[i].data->size() != params[i].data->size())
      throw DimensionError("optimizer_step: shape mismatch for " + params[i].name);
    if (!all_finite(*grads[i].data))
      throw NumericError("optimizer_step: non-finite gradient in " + grads[i].name +
                         " at step " + std::to_string(step));
  }

  const double lr = scheduled_lr(cfg, step);
  const double t = static_cast<double>(step + 1);
  const double bc1 = 1.0 - std::pow(cfg.beta1, t);
  const double bc2 = 1.0 - std::pow(cfg.beta2, t);

  for (std::size_t i = 0; i < params.size(); ++i) {
    Vec& theta = *params[i].data;
    const Vec& g = *grads[i].data;
    Vec& m = state.m[i];
    Vec& v = state.v[i];
    for (std::size_t j = 0; j < theta.size(); ++j) {
      double gj = g[j];
      if (cfg.algorithm == OptAlgo::adam) gj += cfg.weight_decay * theta[j];
      m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * gj;
      v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * gj * gj;
      const double mhat = m[j] / bc1;
      const double vhat = v[j] / bc2;
      if (cfg.algorithm == OptAlgo::adamw) theta[j] -= lr * cfg.weight_decay * theta[j];
      theta[j] -= lr * mhat / (std::sqrt(vhat) + cfg.eps);
    }
    if (!all_finite(theta))
      throw NumericError("optimizer_step: non-finite parameter in " + params[i].name +
                         " after step " + std::to_string(step));
  }
}

/// Scales the gradients so their global L2 norm is at most `max_norm`.
/// Returns the pre-clip norm.
inline double clip_global_norm(const ParamRefs& grads, double max_norm) {
  double sq = 0.0;
  for (const auto& g : grads) sq += squared_norm(*g.data);
  const double nrm = std::sqrt(sq);
  if (nrm > max_norm && nrm > 0.0) {
    const double scale = max_norm / nrm;
    for (const auto& g : grads)
      for (double& x : *g.data) x *= scale;
  }
  return nrm;
}

}  // namespace sasha
