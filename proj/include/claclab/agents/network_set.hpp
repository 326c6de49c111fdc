#pragma once

#include <cstddef>
#include <vector>

#include "claclab/agents/config.hpp"
#include "claclab/core/rng.hpp"
#include "claclab/ndiff/mlp.hpp"
#include "claclab/ndiff/optim.hpp"

namespace claclab::agents {

/// Value, target value, twin Q and policy networks with their optimizers.
///
/// The policy head emits [mean_0..mean_{k-1}, raw_log_std_0..raw_log_std_{k-1}].
/// The target value network is only ever moved by polyak_update.
struct NetworkSet {
  std::size_t obs_dim = 0;
  std::size_t act_dim = 0;
  ndiff::Mlp value;
  ndiff::Mlp value_target;
  ndiff::Mlp q1;
  ndiff::Mlp q2;
  ndiff::Mlp policy;
  ndiff::AdamState value_opt;
  ndiff::AdamState q1_opt;
  ndiff::AdamState q2_opt;
  ndiff::AdamState policy_opt;

  static NetworkSet create(std::size_t obs_dim, std::size_t act_dim, const AgentConfig& cfg, Rng& rng) {
    auto sizes = [&](std::size_t in, std::size_t out) {
      std::vector<std::size_t> s{in};
      s.insert(s.end(), cfg.hidden.begin(), cfg.hidden.end());
      s.push_back(out);
      return s;
    };
    NetworkSet n;
    n.obs_dim = obs_dim;
    n.act_dim = act_dim;
    n.value = ndiff::Mlp(sizes(obs_dim, 1), rng);
    n.value_target = n.value;
    n.q1 = ndiff::Mlp(sizes(obs_dim + act_dim, 1), rng);
    n.q2 = ndiff::Mlp(sizes(obs_dim + act_dim, 1), rng);
    n.policy = ndiff::Mlp(sizes(obs_dim, 2 * act_dim), rng);
    n.value_opt = ndiff::AdamState::for_net(n.value, cfg.lr_value);
    n.q1_opt = ndiff::AdamState::for_net(n.q1, cfg.lr_q);
    n.q2_opt = ndiff::AdamState::for_net(n.q2, cfg.lr_q);
    n.policy_opt = ndiff::AdamState::for_net(n.policy, cfg.lr_policy);
    return n;
  }

  friend bool operator==(const NetworkSet&, const NetworkSet&) = default;
};

}  // namespace claclab::agents
