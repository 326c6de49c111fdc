#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "claclab/core/errors.hpp"
#include "claclab/core/rng.hpp"
#include "claclab/ndiff/tensor.hpp"

namespace claclab::replay {

struct Transition {
  std::vector<double> state;
  std::vector<double> action;             // squashed, in (-1, 1)^k
  std::vector<double> action_pre_squash;
  double reward = 0.0;
  std::vector<double> next_state;
  bool done = false;  // absorbing; cuts the bootstrap term

  friend bool operator==(const Transition&, const Transition&) = default;
};

/// Minibatch laid out as matrices for the network passes.
struct Batch {
  ndiff::Tensor states;       // (B, obs)
  ndiff::Tensor actions;      // (B, act)
  ndiff::Tensor pre_squash;   // (B, act)
  std::vector<double> rewards;
  ndiff::Tensor next_states;  // (B, obs)
  std::vector<double> dones;  // 1.0 when absorbing

  std::size_t size() const noexcept { return rewards.size(); }
};

inline Batch make_batch(std::span<const Transition> items) {
  if (items.empty()) throw InvalidArgument("make_batch: no transitions");
  const std::size_t b = items.size();
  const std::size_t obs = items[0].state.size();
  const std::size_t act = items[0].action.size();
  Batch batch{ndiff::Tensor::matrix(b, obs), ndiff::Tensor::matrix(b, act), ndiff::Tensor::matrix(b, act),
              std::vector<double>(b), ndiff::Tensor::matrix(b, obs), std::vector<double>(b)};
  for (std::size_t i = 0; i < b; ++i) {
    const auto& t = items[i];
    std::copy(t.state.begin(), t.state.end(), batch.states.row(i).begin());
    std::copy(t.action.begin(), t.action.end(), batch.actions.row(i).begin());
    std::copy(t.action_pre_squash.begin(), t.action_pre_squash.end(), batch.pre_squash.row(i).begin());
    std::copy(t.next_state.begin(), t.next_state.end(), batch.next_states.row(i).begin());
    batch.rewards[i] = t.reward;
    batch.dones[i] = t.done ? 1.0 : 0.0;
  }
  return batch;
}

/// Fixed-capacity FIFO memory with uniform sampling (with replacement).
class ReplayBuffer {
 public:
  static constexpr std::size_t kDefaultCapacity = 1'000'000;

  ReplayBuffer(std::size_t observation_dim, std::size_t action_dim, std::size_t capacity = kDefaultCapacity)
      : obs_dim_(observation_dim), act_dim_(action_dim), capacity_(capacity) {
    if (capacity_ == 0) throw InvalidArgument("ReplayBuffer: capacity must be positive");
  }

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }

  void push(Transition t) {
    if (t.state.size() != obs_dim_ || t.next_state.size() != obs_dim_ || t.action.size() != act_dim_ ||
        t.action_pre_squash.size() != act_dim_) {
      throw InvalidArgument("ReplayBuffer::push: transition dimensions do not match the buffer");
    }
    if (!std::isfinite(t.reward)) throw InvalidArgument("ReplayBuffer::push: reward must be finite");
    if (items_.size() < capacity_) {
      items_.push_back(std::move(t));
    } else {
      items_[head_] = std::move(t);
      head_ = (head_ + 1) % capacity_;
    }
  }

  // i = 0 is the oldest surviving transition.
  const Transition& operator[](std::size_t i) const { return items_[(head_ + i) % items_.size()]; }

  std::vector<std::size_t> sample_indices(std::size_t batch, Rng& rng) const {
    if (items_.empty()) throw PreconditionError("ReplayBuffer::sample: buffer is empty");
    std::vector<std::size_t> idx(batch);
    for (auto& i : idx) i = rng.index(items_.size());
    return idx;
  }

  std::vector<Transition> sample(std::size_t batch, Rng& rng) const {
    std::vector<Transition> out;
    out.reserve(batch);
    for (auto i : sample_indices(batch, rng)) out.push_back((*this)[i]);
    return out;
  }

  Batch sample_batch(std::size_t batch, Rng& rng) const {
    const auto items = sample(batch, rng);
    return make_batch(items);
  }

 private:
  std::size_t obs_dim_;
  std::size_t act_dim_;
  std::size_t capacity_;
  std::size_t head_ = 0;  // oldest element once the ring is full
  std::vector<Transition> items_;
};

}  // namespace claclab::replay
