#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "claclab/core/errors.hpp"
#include "claclab/ndiff/mlp.hpp"

namespace claclab::ndiff {

/// Adam moments and constants for one parameter set.
struct AdamState {
  std::uint64_t step = 0;
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  static AdamState for_params(const std::vector<Tensor>& params, double learning_rate) {
    AdamState s;
    s.learning_rate = learning_rate;
    for (const auto& p : params) {
      s.m.emplace_back(p.shape());
      s.v.emplace_back(p.shape());
    }
    return s;
  }

  static AdamState for_net(const Mlp& net, double learning_rate) { return for_params(net.params(), learning_rate); }

  friend bool operator==(const AdamState&, const AdamState&) = default;
};

/// One bias-corrected Adam update of `params` along `grads`.
inline void adam_step(std::vector<Tensor>& params, const Grads& grads, AdamState& state) {
  if (grads.tensors.size() != params.size() || state.m.size() != params.size() || state.v.size() != params.size()) {
    throw InvalidArgument("adam_step: parameter, gradient and moment counts differ");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    require_same_shape(params[i], grads.tensors[i], "adam_step gradient");
    require_same_shape(params[i], state.m[i], "adam_step moment");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i].values();
    const auto& g = grads.tensors[i].values();
    auto& m = state.m[i].values();
    auto& v = state.v[i].values();
    for (std::size_t j = 0; j < p.size(); ++j) {
      m[j] = state.beta1 * m[j] + (1.0 - state.beta1) * g[j];
      v[j] = state.beta2 * v[j] + (1.0 - state.beta2) * g[j] * g[j];
      const double m_hat = m[j] / c1;
      const double v_hat = v[j] / c2;
      p[j] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
  }
}

inline void adam_step(Mlp& net, const Grads& grads, AdamState& state) { adam_step(net.params(), grads, state); }

/// target <- tau * online + (1 - tau) * target, elementwise.
inline void polyak_update(std::vector<Tensor>& target, const std::vector<Tensor>& online, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidArgument("polyak_update: tau must lie in [0, 1]");
  if (target.size() != online.size()) throw InvalidArgument("polyak_update: parameter counts differ");
  for (std::size_t i = 0; i < target.size(); ++i) {
    require_same_shape(target[i], online[i], "polyak_update");
    auto& t = target[i].values();
    const auto& o = online[i].values();
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = tau * o[j] + (1.0 - tau) * t[j];
  }
}

inline void polyak_update(Mlp& target, const Mlp& online, double tau) {
  if (target.layer_sizes() != online.layer_sizes()) throw InvalidArgument("polyak_update: architectures differ");
  polyak_update(target.params(), online.params(), tau);
}

}  // namespace claclab::ndiff
