#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "claclab/core/errors.hpp"
#include "claclab/core/rng.hpp"
#include "claclab/ndiff/tensor.hpp"

namespace claclab::ndiff {

/// Fully connected network: ReLU on every hidden layer, identity output.
///
/// Parameters are kept as a flat list [W0, b0, W1, b1, ...] where Wl has shape
/// (fan_in, fan_out) and bl has shape (fan_out), so a batch X of shape
/// (batch, fan_in) maps to X * Wl + bl.
class Mlp {
 public:
  Mlp() = default;

  explicit Mlp(std::vector<std::size_t> layer_sizes) : layer_sizes_(std::move(layer_sizes)) {
    if (layer_sizes_.size() < 2) throw InvalidArgument("Mlp needs at least input and output widths");
    for (auto w : layer_sizes_) {
      if (w == 0) throw InvalidArgument("Mlp layer width must be positive");
    }
    for (std::size_t l = 0; l + 1 < layer_sizes_.size(); ++l) {
      params_.emplace_back(std::vector<std::size_t>{layer_sizes_[l], layer_sizes_[l + 1]});
      params_.emplace_back(std::vector<std::size_t>{layer_sizes_[l + 1]});
    }
  }

  // Weights uniform in +-1/sqrt(fan_in), biases zero.
  Mlp(std::vector<std::size_t> layer_sizes, Rng& rng) : Mlp(std::move(layer_sizes)) {
    for (std::size_t l = 0; l < num_layers(); ++l) {
      const double bound = 1.0 / std::sqrt(static_cast<double>(layer_sizes_[l]));
      for (double& w : weight(l).values()) w = rng.uniform(-bound, bound);
    }
  }

  const std::vector<std::size_t>& layer_sizes() const noexcept { return layer_sizes_; }
  std::size_t num_layers() const noexcept { return params_.size() / 2; }
  std::size_t input_width() const noexcept { return layer_sizes_.front(); }
  std::size_t output_width() const noexcept { return layer_sizes_.back(); }

  Tensor& weight(std::size_t layer) { return params_[2 * layer]; }
  const Tensor& weight(std::size_t layer) const { return params_[2 * layer]; }
  Tensor& bias(std::size_t layer) { return params_[2 * layer + 1]; }
  const Tensor& bias(std::size_t layer) const { return params_[2 * layer + 1]; }

  std::vector<Tensor>& params() noexcept { return params_; }
  const std::vector<Tensor>& params() const noexcept { return params_; }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& p : params_) n += p.size();
    return n;
  }

  // Names used in checkpoint containers: W0, b0, W1, ...
  static std::string param_name(std::size_t index) {
    return (index % 2 == 0 ? "W" : "b") + std::to_string(index / 2);
  }

  friend bool operator==(const Mlp&, const Mlp&) = default;

 private:
  std::vector<std::size_t> layer_sizes_;
  std::vector<Tensor> params_;
};

/// One gradient tensor per parameter tensor of the owning Mlp.
struct Grads {
  std::vector<Tensor> tensors;

  static Grads zeros_like(const Mlp& net) {
    Grads g;
    for (const auto& p : net.params()) g.tensors.emplace_back(p.shape());
    return g;
  }

  void zero() {
    for (auto& t : tensors) t.fill(0.0);
  }

  bool congruent_with(const Mlp& net) const {
    if (tensors.size() != net.params().size()) return false;
    for (std::size_t i = 0; i < tensors.size(); ++i) {
      if (!tensors[i].same_shape(net.params()[i])) return false;
    }
    return true;
  }
};

/// Activations kept from a forward pass for the matching backward pass.
struct ForwardCache {
  Tensor input;
  std::vector<Tensor> hidden;  // post-ReLU output of each hidden layer
};

struct Backprop {
  Grads grads;       // empty when parameter gradients were not requested
  Tensor input_grad; // dLoss/dInput, shape (batch, input width)
};

namespace detail {

inline Tensor as_batch(const Mlp& net, const Tensor& input) {
  if (input.rank() == 1 && input.size() == net.input_width()) {
    return Tensor({1, input.size()}, input.values());
  }
  if (input.rank() != 2 || input.cols() != net.input_width()) {
    throw InvalidArgument("forward: input shape " + input.shape_string() + " does not match input width " +
                          std::to_string(net.input_width()));
  }
  return input;
}

inline Tensor affine(const Tensor& x, const Tensor& w, const Tensor& b) {
  Tensor out = Tensor::matrix(x.rows(), w.cols());
  auto o = out.mat();
  o.noalias() = x.mat() * w.mat();
  o.rowwise() += Eigen::Map<const Eigen::RowVectorXd>(b.data().data(), Eigen::Index(b.size()));
  return out;
}

inline void relu_inplace(Tensor& t) {
  for (double& v : t.values()) v = v > 0.0 ? v : 0.0;
}

}  // namespace detail

/// Forward pass keeping the activations needed by backward().
inline Tensor forward(const Mlp& net, const Tensor& input, ForwardCache& cache) {
  cache.input = detail::as_batch(net, input);
  cache.hidden.clear();
  const Tensor* x = &cache.input;
  for (std::size_t l = 0; l + 1 < net.num_layers(); ++l) {
    cache.hidden.push_back(detail::affine(*x, net.weight(l), net.bias(l)));
    detail::relu_inplace(cache.hidden.back());
    x = &cache.hidden.back();
  }
  const std::size_t last = net.num_layers() - 1;
  return detail::affine(*x, net.weight(last), net.bias(last));
}

inline Tensor forward(const Mlp& net, const Tensor& input) {
  ForwardCache cache;
  return forward(net, input, cache);
}

/// Reverse pass for a cached forward. `upstream` is dLoss/dOutput.
///
/// With param_grads=false only the input gradient is produced, which is all
/// the policy update needs from the critics.
inline Backprop backward(const Mlp& net, const ForwardCache& cache, const Tensor& upstream, bool param_grads = true) {
  const std::size_t batch = cache.input.rows();
  if (upstream.rank() != 2 || upstream.rows() != batch || upstream.cols() != net.output_width()) {
    throw InvalidArgument("backward: upstream shape " + upstream.shape_string() + " does not match output (" +
                          std::to_string(batch) + ", " + std::to_string(net.output_width()) + ")");
  }
  Backprop out;
  if (param_grads) out.grads = Grads::zeros_like(net);

  Tensor g = upstream;
  for (std::size_t l = net.num_layers(); l-- > 0;) {
    const Tensor& prev = l == 0 ? cache.input : cache.hidden[l - 1];
    if (param_grads) {
      out.grads.tensors[2 * l].mat().noalias() = prev.mat().transpose() * g.mat();
      Eigen::Map<Eigen::RowVectorXd>(out.grads.tensors[2 * l + 1].data().data(), Eigen::Index(g.cols())) =
          g.mat().colwise().sum();
    }
    Tensor g_prev = Tensor::matrix(batch, net.weight(l).rows());
    g_prev.mat().noalias() = g.mat() * net.weight(l).mat().transpose();
    if (l > 0) {
      const auto& act = prev.values();
      auto& gp = g_prev.values();
      for (std::size_t i = 0; i < gp.size(); ++i) {
        if (!(act[i] > 0.0)) gp[i] = 0.0;
      }
    }
    g = std::move(g_prev);
  }
  out.input_grad = std::move(g);
  return out;
}

/// Convenience form that recomputes the forward pass.
inline Backprop backward(const Mlp& net, const Tensor& input, const Tensor& upstream) {
  ForwardCache cache;
  forward(net, input, cache);
  return backward(net, cache, upstream);
}

}  // namespace claclab::ndiff
