#ifndef DILEMMA_NN_HPP
#define DILEMMA_NN_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "dilemma/core.hpp"
#include "dilemma/rng.hpp"

namespace dilemma {

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonFiniteLoss : public Error {
 public:
  using Error::Error;
};

// One-hidden-layer value network: q = w2 * relu(w1 * x + b1) + b2.
//
// w1 is held input-major internally so that the mostly one-hot inputs of the
// simulation only touch the columns of active inputs. The public accessors
// and the flat parameter vector use the conventional (hidden x input)
// row-major layout, ordered w1, b1, w2, b2.
class Network {
 public:
  Network() = default;
  // Zero-initialized network. Throws DimensionMismatch on a zero dimension.
  Network(std::size_t input_dim, std::size_t hidden_size, std::size_t output_dim);

  std::size_t input_dim() const { return input_dim_; }
  std::size_t hidden_size() const { return hidden_size_; }
  std::size_t output_dim() const { return output_dim_; }
  std::size_t parameter_count() const;

  double& w1(std::size_t hidden, std::size_t input) { return w1t_[input * hidden_size_ + hidden]; }
  double w1(std::size_t hidden, std::size_t input) const { return w1t_[input * hidden_size_ + hidden]; }
  double& b1(std::size_t hidden) { return b1_[hidden]; }
  double b1(std::size_t hidden) const { return b1_[hidden]; }
  double& w2(std::size_t out, std::size_t hidden) { return w2_[out * hidden_size_ + hidden]; }
  double w2(std::size_t out, std::size_t hidden) const { return w2_[out * hidden_size_ + hidden]; }
  double& b2(std::size_t out) { return b2_[out]; }
  double b2(std::size_t out) const { return b2_[out]; }

  std::vector<double> parameters() const;
  void set_parameters(std::span<const double> params);
  bool all_finite() const;

  // Writes q-values into `q` (length output_dim) and the hidden
  // pre-activations into `pre` (length hidden_size).
  void forward_into(std::span<const double> state, std::span<double> pre, std::span<double> q) const;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  friend struct Gradient;

  std::size_t input_dim_ = 0;
  std::size_t hidden_size_ = 0;
  std::size_t output_dim_ = 0;
  std::vector<double> w1t_;
  std::vector<double> b1_;
  std::vector<double> w2_;
  std::vector<double> b2_;
};

// Weights uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], biases zero.
Network init_network(std::size_t input_dim, std::size_t hidden_size, std::size_t output_dim, RngStream& rng);

std::vector<double> forward(const Network& net, std::span<const double> state);

// One supervised example: only output `action` is trained toward `target`.
struct Sample {
  std::span<const double> state;
  std::size_t action = 0;
  double target = 0.0;
};

// Mean over the batch of (q[action] - target)^2.
double batch_loss(const Network& net, std::span<const Sample> batch);

// Gradient of batch_loss in parameters() order.
std::vector<double> loss_gradient(const Network& net, std::span<const Sample> batch);

// One full-batch gradient-descent step on batch_loss, in place.
// Throws DimensionMismatch, NonFiniteLoss, or Error for an empty batch.
void apply_grad_step(Network& net, std::span<const Sample> batch, double lr);

inline Network grad_step(Network net, std::span<const Sample> batch, double lr) {
  apply_grad_step(net, batch, lr);
  return net;
}

// Debug dump: one parameter per line, %.17g, (w1, b1, w2, b2) row-major.
void write_parameters(std::ostream& out, const Network& net);

}  // namespace dilemma

#endif  // DILEMMA_NN_HPP
