#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sasha/errors.hpp"
#include "sasha/tensor.hpp"

namespace sasha {

/// A named view into one parameter (or gradient) tensor. Networks expose
/// their tensors through vectors of these so optimizers, checkpoints and the
/// finite-difference checker can treat every model uniformly. The referenced
/// buffers never resize after construction.
struct NamedParam {
  std::string name;
  Vec* data = nullptr;
  std::vector<std::size_t> shape;
};

using ParamRefs = std::vector<NamedParam>;

inline NamedParam param_ref(std::string name, Mat& m) {
  return {std::move(name), &m.a, {m.rows, m.cols}};
}

inline NamedParam param_ref(std::string name, Vec& v) {
  return {std::move(name), &v, {v.size()}};
}

inline ParamRefs operator+(ParamRefs a, const ParamRefs& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline std::size_t param_count(const ParamRefs& refs) {
  std::size_t n = 0;
  for (const auto& r : refs) n += r.data->size();
  return n;
}

inline bool params_finite(const ParamRefs& refs) {
  for (const auto& r : refs)
    if (!all_finite(*r.data)) return false;
  return true;
}

inline void zero_params(const ParamRefs& refs) {
  for (const auto& r : refs) std::fill(r.data->begin(), r.data->end(), 0.0);
}

// ---------------------------------------------------------------------------
// Dense layer. W is (out x in), y = W x + b.

struct Linear {
  Mat W;
  Vec b;

  Linear() = default;
  Linear(std::size_t out, std::size_t in) : W(out, in), b(out, 0.0) {}

  std::size_t out_dim() const { return W.rows; }
  std::size_t in_dim() const { return W.cols; }
};

/// Weights uniform in +-1/sqrt(fan_in), biases zero.
inline void init_linear(Linear& l, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(l.in_dim()));
  for (double& w : l.W.a) w = rng.uniform(-bound, bound);
  std::fill(l.b.begin(), l.b.end(), 0.0);
}

inline ParamRefs linear_refs(Linear& l, const std::string& prefix) {
  return {param_ref(prefix + ".weight", l.W), param_ref(prefix + ".bias", l.b)};
}

inline void linear_forward(const Linear& l, std::span<const double> x, std::span<double> y) {
  if (x.size() != l.in_dim() || y.size() != l.out_dim())
    throw DimensionError("linear: input width " + std::to_string(x.size()) + " vs expected " +
                         std::to_string(l.in_dim()));
  for (std::size_t o = 0; o < l.out_dim(); ++o) y[o] = l.b[o] + dot(l.W.row(o), x);
}

/// Y = X W^T + b, applied row-wise.
inline Mat linear_forward_rows(const Linear& l, const Mat& X) {
  Mat Y(X.rows, l.out_dim());
  for (std::size_t r = 0; r < X.rows; ++r) linear_forward(l, X.row(r), Y.row(r));
  return Y;
}

/// Accumulates parameter gradients for one row; optionally adds W^T dy into dx.
inline void linear_backward(const Linear& l, std::span<const double> x, std::span<const double> dy,
                            Linear& grad, std::span<double> dx = {}) {
  for (std::size_t o = 0; o < l.out_dim(); ++o) {
    const double g = dy[o];
    if (g == 0.0) continue;
    grad.b[o] += g;
    axpy(g, x, grad.W.row(o));
    if (!dx.empty()) axpy(g, l.W.row(o), dx);
  }
}

// ---------------------------------------------------------------------------
// Gated attention scoring block:  scores = score(sigmoid(proj_a x) * tanh(proj_b x)).
// proj_a, proj_b: d -> h; score: h -> m. Returns raw (pre-softmax) scores.

struct GatedAttentionParams {
  Linear proj_a;
  Linear proj_b;
  Linear score;

  GatedAttentionParams() = default;
  GatedAttentionParams(std::size_t d, std::size_t hidden, std::size_t m)
      : proj_a(hidden, d), proj_b(hidden, d), score(m, hidden) {}

  std::size_t in_dim() const { return proj_a.in_dim(); }
  std::size_t hidden_dim() const { return proj_a.out_dim(); }
  std::size_t heads() const { return score.out_dim(); }
};

inline void init_gated_attention(GatedAttentionParams& p, Rng& rng) {
  init_linear(p.proj_a, rng);
  init_linear(p.proj_b, rng);
  init_linear(p.score, rng);
}

inline ParamRefs gated_attention_refs(GatedAttentionParams& p, const std::string& prefix) {
  return linear_refs(p.proj_a, prefix + ".proj_a") + linear_refs(p.proj_b, prefix + ".proj_b") +
         linear_refs(p.score, prefix + ".score");
}

/// Forward activations needed by the backward pass.
struct GatedAttentionCache {
  Mat sig;   // n x h, sigmoid(proj_a x)
  Mat tnh;   // n x h, tanh(proj_b x)
  Mat gate;  // n x h, elementwise product
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Raw attention scores for each row of `X` (n x d) -> (n x m).
inline Mat gated_attention(const GatedAttentionParams& p, const Mat& X,
                           GatedAttentionCache* cache = nullptr) {
  if (X.cols != p.in_dim())
    throw DimensionError("gated_attention: feature width " + std::to_string(X.cols) +
                         " vs expected " + std::to_string(p.in_dim()));
  const std::size_t n = X.rows, h = p.hidden_dim(), m = p.heads();
  Mat sig(n, h), tnh(n, h), gate(n, h), scores(n, m);
  for (std::size_t r = 0; r < n; ++r) {
    auto x = X.row(r);
    auto s = sig.row(r), t = tnh.row(r), g = gate.row(r);
    linear_forward(p.proj_a, x, s);
    linear_forward(p.proj_b, x, t);
    for (std::size_t j = 0; j < h; ++j) {
      s[j] = sigmoid(s[j]);
      t[j] = std::tanh(t[j]);
      g[j] = s[j] * t[j];
    }
    linear_forward(p.score, g, scores.row(r));
  }
  if (cache) {
    cache->sig = std::move(sig);
    cache->tnh = std::move(tnh);
    cache->gate = std::move(gate);
  }
  return scores;
}

/// Backward of gated_attention. Accumulates into `grad`; optionally adds the
/// input gradient into `dX` (same shape as X).
inline void gated_attention_backward(const GatedAttentionParams& p, const Mat& X,
                                     const GatedAttentionCache& cache, const Mat& dScores,
                                     GatedAttentionParams& grad, Mat* dX = nullptr) {
  const std::size_t n = X.rows, h = p.hidden_dim();
  Vec dgate(h), da(h), db(h);
  for (std::size_t r = 0; r < n; ++r) {
    auto ds = dScores.row(r);
    bool live = false;
    for (double v : ds)
      if (v != 0.0) live = true;
    if (!live) continue;

    std::fill(dgate.begin(), dgate.end(), 0.0);
    linear_backward(p.score, cache.gate.row(r), ds, grad.score, dgate);
    auto s = cache.sig.row(r), t = cache.tnh.row(r);
    for (std::size_t j = 0; j < h; ++j) {
      da[j] = dgate[j] * t[j] * s[j] * (1.0 - s[j]);
      db[j] = dgate[j] * s[j] * (1.0 - t[j] * t[j]);
    }
    std::span<double> dx = dX ? dX->row(r) : std::span<double>{};
    linear_backward(p.proj_a, X.row(r), da, grad.proj_a, dx);
    linear_backward(p.proj_b, X.row(r), db, grad.proj_b, dx);
  }
}

// ---------------------------------------------------------------------------
// Masked softmax. `masked[i] != 0` removes entry i (probability exactly 0).

using Mask = std::vector<std::uint8_t>;

inline Vec masked_softmax(std::span<const double> scores, const Mask& masked) {
  const std::size_t n = scores.size();
  if (masked.size() != n) throw DimensionError("masked_softmax: mask length mismatch");
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i)
    if (!masked[i]) hi = std::max(hi, scores[i]);
  if (!std::isfinite(hi)) throw ExhaustedActionsError("masked_softmax: every entry is masked");
  Vec p(n, 0.0);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (masked[i]) continue;
    p[i] = std::exp(scores[i] - hi);
    z += p[i];
  }
  for (std::size_t i = 0; i < n; ++i) p[i] /= z;
  return p;
}

inline Vec softmax(std::span<const double> scores) {
  return masked_softmax(scores, Mask(scores.size(), 0));
}

/// d(loss)/d(scores) given d(loss)/d(probabilities) for (masked) softmax.
inline Vec softmax_backward(std::span<const double> p, std::span<const double> dp) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += p[i] * dp[i];
  Vec ds(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) ds[i] = p[i] * (dp[i] - acc);
  return ds;
}

// ---------------------------------------------------------------------------
// Layer normalization with a learned gain (no bias).

struct LayerNorm {
  Vec gain;

  LayerNorm() = default;
  explicit LayerNorm(std::size_t d) : gain(d, 1.0) {}

  static constexpr double kEps = 1e-5;
};

inline ParamRefs layer_norm_refs(LayerNorm& ln, const std::string& prefix) {
  return {param_ref(prefix + ".gain", ln.gain)};
}

struct LayerNormCache {
  Vec normed;
  double inv_std = 0.0;
};

inline void layer_norm_forward(const LayerNorm& ln, std::span<const double> x, std::span<double> y,
                               LayerNormCache* cache = nullptr) {
  const std::size_t d = x.size();
  if (ln.gain.size() != d) throw DimensionError("layer_norm: width mismatch");
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(d);
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(d);
  const double inv_std = 1.0 / std::sqrt(var + LayerNorm::kEps);
  Vec normed(d);
  for (std::size_t i = 0; i < d; ++i) {
    normed[i] = (x[i] - mean) * inv_std;
    y[i] = ln.gain[i] * normed[i];
  }
  if (cache) {
    cache->normed = std::move(normed);
    cache->inv_std = inv_std;
  }
}

inline void layer_norm_backward(const LayerNorm& ln, const LayerNormCache& cache,
                                std::span<const double> dy, LayerNorm& grad,
                                std::span<double> dx) {
  const std::size_t d = dy.size();
  Vec dn(d);
  double mean_dn = 0.0, mean_dn_n = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    grad.gain[i] += dy[i] * cache.normed[i];
    dn[i] = dy[i] * ln.gain[i];
    mean_dn += dn[i];
    mean_dn_n += dn[i] * cache.normed[i];
  }
  mean_dn /= static_cast<double>(d);
  mean_dn_n /= static_cast<double>(d);
  for (std::size_t i = 0; i < d; ++i)
    dx[i] += cache.inv_std * (dn[i] - mean_dn - cache.normed[i] * mean_dn_n);
}

// ---------------------------------------------------------------------------
// Cross entropy on a 2-class logit pair.

inline Vec softmax2(std::span<const double> logits) {
  const double hi = std::max(logits[0], logits[1]);
  const double e0 = std::exp(logits[0] - hi), e1 = std::exp(logits[1] - hi);
  return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

inline double cross_entropy_logits(std::span<const double> logits, int label) {
  const double hi = std::max(logits[0], logits[1]);
  const double lse = hi + std::log(std::exp(logits[0] - hi) + std::exp(logits[1] - hi));
  return lse - logits[label];
}

/// d(CE)/d(logits) = softmax(logits) - onehot(label), scaled by `weight`.
inline void cross_entropy_backward(std::span<const double> logits, int label, double weight,
                                   std::span<double> dlogits) {
  const Vec p = softmax2(logits);
  dlogits[0] += weight * (p[0] - (label == 0 ? 1.0 : 0.0));
  dlogits[1] += weight * (p[1] - (label == 1 ? 1.0 : 0.0));
}

}  // namespace sasha
