#pragma once

// Finite-horizon dynamic programming over a discretized action grid for the
// continuous N-chain. Used as an independent reference for the best
// achievable episode return.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace claclab::oracle {

struct ChainDp {
  double optimal_return = 0.0;     // expected return from the start state
  std::vector<double> best_action;  // per non-terminal state, in [0, 1]
};

inline ChainDp solve_chain_dp(const std::vector<double>& hidden, double sharpness, std::size_t horizon,
                              std::size_t grid_points = 1001) {
  const std::size_t n = hidden.size() + 1;  // states 0..n-1, n-1 terminal
  std::vector<double> value(n, 0.0), next(n, 0.0);
  ChainDp out;
  out.best_action.assign(hidden.size(), 0.0);
  for (std::size_t t = 1; t <= horizon; ++t) {
    for (std::size_t s = 0; s + 1 < n; ++s) {
      double best = -INFINITY;
      for (std::size_t g = 0; g < grid_points; ++g) {
        const double a = static_cast<double>(g) / static_cast<double>(grid_points - 1);
        const double p = std::exp(-sharpness * std::abs(a - hidden[s]));
        const double advance = (s + 2 == n) ? 0.0 : -1.0 + value[s + 1];
        const double stay = -1.0 + value[s];
        const double q = p * advance + (1.0 - p) * stay;
        if (q > best) {
          best = q;
          if (t == horizon) out.best_action[s] = a;
        }
      }
      next[s] = best;
    }
    next[n - 1] = 0.0;
    value = next;
  }
  out.optimal_return = value[0];
  return out;
}

}  // namespace claclab::oracle
