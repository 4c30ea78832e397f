#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sasha/layers.hpp"

namespace sasha {

/// Central finite differences of a scalar loss with respect to every
/// registered parameter. The loss callable must read the parameters through
/// the same underlying storage the refs point at.
inline std::vector<Vec> fd_gradient(const std::function<double()>& loss, const ParamRefs& params,
                                    double step = 1e-5) {
  std::vector<Vec> out;
  out.reserve(params.size());
  for (const auto& p : params) {
    Vec g(p.data->size());
    for (std::size_t j = 0; j < g.size(); ++j) {
      double& theta = (*p.data)[j];
      const double saved = theta;
      theta = saved + step;
      const double lp = loss();
      theta = saved - step;
      const double lm = loss();
      theta = saved;
      g[j] = (lp - lm) / (2.0 * step);
    }
    out.push_back(std::move(g));
  }
  return out;
}

struct GradCheckResult {
  double max_rel_err = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

/// Compares analytic gradients against central finite differences.
/// Error metric is |a - n| / max(|a|, |n|, 1) so tiny gradients are judged
/// on an absolute scale.
inline GradCheckResult check_gradients(const std::function<double()>& loss, const ParamRefs& params,
                                       const ParamRefs& analytic, double step = 1e-5) {
  const std::vector<Vec> numeric = fd_gradient(loss, params, step);
  GradCheckResult res;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Vec& a = *analytic[i].data;
    const Vec& n = numeric[i];
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double denom = std::max({std::abs(a[j]), std::abs(n[j]), 1.0});
      const double rel = std::abs(a[j] - n[j]) / denom;
      if (rel > res.max_rel_err) {
        res.max_rel_err = rel;
        res.worst_param = params[i].name;
        res.worst_index = j;
        res.analytic = a[j];
        res.numeric = n[j];
      }
    }
  }
  return res;
}

}  // namespace sasha
