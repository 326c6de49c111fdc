#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "claclab/core/errors.hpp"

namespace claclab::distrib {

/// Joint pmf p(s, a) over a finite state x action grid, row-major by state.
class DiscreteJoint {
 public:
  DiscreteJoint(std::size_t states, std::size_t actions, std::vector<double> pmf)
      : states_(states), actions_(actions), pmf_(std::move(pmf)) {
    if (states_ == 0 || actions_ == 0 || pmf_.size() != states_ * actions_) {
      throw InvalidArgument("DiscreteJoint: pmf size does not match grid");
    }
    double total = 0.0;
    for (double p : pmf_) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw InvalidArgument("DiscreteJoint: negative or non-finite mass");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("DiscreteJoint: masses do not sum to 1");
  }

  std::size_t states() const noexcept { return states_; }
  std::size_t actions() const noexcept { return actions_; }
  double operator()(std::size_t s, std::size_t a) const noexcept { return pmf_[s * actions_ + a]; }

  std::vector<double> state_marginal() const {
    std::vector<double> p(states_, 0.0);
    for (std::size_t s = 0; s < states_; ++s)
      for (std::size_t a = 0; a < actions_; ++a) p[s] += (*this)(s, a);
    return p;
  }

  std::vector<double> action_marginal() const {
    std::vector<double> p(actions_, 0.0);
    for (std::size_t s = 0; s < states_; ++s)
      for (std::size_t a = 0; a < actions_; ++a) p[a] += (*this)(s, a);
    return p;
  }

  DiscreteJoint transposed() const {
    std::vector<double> t(pmf_.size());
    for (std::size_t s = 0; s < states_; ++s)
      for (std::size_t a = 0; a < actions_; ++a) t[a * states_ + s] = (*this)(s, a);
    return DiscreteJoint(actions_, states_, std::move(t));
  }

 private:
  std::size_t states_;
  std::size_t actions_;
  std::vector<double> pmf_;
};

/// Shannon entropy in nats with 0 ln 0 = 0.
inline double discrete_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

/// I(S; A) = sum p(s,a) ln[p(s,a) / (p(s) p(a))].
inline double discrete_mi(const DiscreteJoint& j) {
  const auto ps = j.state_marginal();
  const auto pa = j.action_marginal();
  double mi = 0.0;
  for (std::size_t s = 0; s < j.states(); ++s) {
    for (std::size_t a = 0; a < j.actions(); ++a) {
      const double p = j(s, a);
      if (p > 0.0) mi += p * std::log(p / (ps[s] * pa[a]));
    }
  }
  return mi;
}

/// Entropy-difference route: H(p_a) - E_s[H(pi(.|s))].
inline double mi_from_entropies(const DiscreteJoint& j) {
  const auto ps = j.state_marginal();
  double conditional = 0.0;
  for (std::size_t s = 0; s < j.states(); ++s) {
    if (!(ps[s] > 0.0)) continue;
    std::vector<double> policy(j.actions());
    for (std::size_t a = 0; a < j.actions(); ++a) policy[a] = j(s, a) / ps[s];
    conditional += ps[s] * discrete_entropy(policy);
  }
  return discrete_entropy(j.action_marginal()) - conditional;
}

}  // namespace claclab::distrib
