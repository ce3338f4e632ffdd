#include "dilemma/nn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace dilemma {

Network::Network(std::size_t input_dim, std::size_t hidden_size, std::size_t output_dim)
    : input_dim_(input_dim), hidden_size_(hidden_size), output_dim_(output_dim) {
  if (input_dim == 0 || hidden_size == 0 || output_dim == 0) {
    throw DimensionMismatch("network dimensions must be >= 1");
  }
  w1t_.assign(input_dim * hidden_size, 0.0);
  b1_.assign(hidden_size, 0.0);
  w2_.assign(output_dim * hidden_size, 0.0);
  b2_.assign(output_dim, 0.0);
}

std::size_t Network::parameter_count() const {
  return w1t_.size() + b1_.size() + w2_.size() + b2_.size();
}

std::vector<double> Network::parameters() const {
  std::vector<double> p;
  p.reserve(parameter_count());
  for (std::size_t h = 0; h < hidden_size_; ++h) {
    for (std::size_t i = 0; i < input_dim_; ++i) p.push_back(w1(h, i));
  }
  p.insert(p.end(), b1_.begin(), b1_.end());
  p.insert(p.end(), w2_.begin(), w2_.end());
  p.insert(p.end(), b2_.begin(), b2_.end());
  return p;
}

void Network::set_parameters(std::span<const double> p) {
  if (p.size() != parameter_count()) throw DimensionMismatch("parameter vector has wrong length");
  std::size_t k = 0;
  for (std::size_t h = 0; h < hidden_size_; ++h) {
    for (std::size_t i = 0; i < input_dim_; ++i) w1(h, i) = p[k++];
  }
  for (auto& v : b1_) v = p[k++];
  for (auto& v : w2_) v = p[k++];
  for (auto& v : b2_) v = p[k++];
}

bool Network::all_finite() const {
  for (const auto* vec : {&w1t_, &b1_, &w2_, &b2_}) {
    for (double v : *vec) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

void Network::forward_into(std::span<const double> state, std::span<double> pre, std::span<double> q) const {
  if (state.size() != input_dim_) throw DimensionMismatch("state length does not match network input_dim");
  const std::size_t H = hidden_size_;
  std::copy(b1_.begin(), b1_.end(), pre.begin());
  for (std::size_t i = 0; i < input_dim_; ++i) {
    const double x = state[i];
    if (x == 0.0) continue;
    const double* col = &w1t_[i * H];
    for (std::size_t h = 0; h < H; ++h) pre[h] += x * col[h];
  }
  for (std::size_t o = 0; o < output_dim_; ++o) {
    const double* row = &w2_[o * H];
    double acc = 0.0;
    for (std::size_t h = 0; h < H; ++h) acc += row[h] * (pre[h] > 0.0 ? pre[h] : 0.0);
    q[o] = acc + b2_[o];
  }
}

Network init_network(std::size_t input_dim, std::size_t hidden_size, std::size_t output_dim, RngStream& rng) {
  Network net(input_dim, hidden_size, output_dim);
  const double s1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
  const double s2 = 1.0 / std::sqrt(static_cast<double>(hidden_size));
  for (std::size_t h = 0; h < hidden_size; ++h) {
    for (std::size_t i = 0; i < input_dim; ++i) net.w1(h, i) = rng.uniform(-s1, s1);
  }
  for (std::size_t o = 0; o < output_dim; ++o) {
    for (std::size_t h = 0; h < hidden_size; ++h) net.w2(o, h) = rng.uniform(-s2, s2);
  }
  return net;
}

std::vector<double> forward(const Network& net, std::span<const double> state) {
  std::vector<double> pre(net.hidden_size());
  std::vector<double> q(net.output_dim());
  net.forward_into(state, pre, q);
  return q;
}

namespace {

void check_sample(const Network& net, const Sample& s) {
  if (s.state.size() != net.input_dim()) throw DimensionMismatch("sample state length does not match input_dim");
  if (s.action >= net.output_dim()) throw DimensionMismatch("sample action index out of range");
}

}  // namespace

double batch_loss(const Network& net, std::span<const Sample> batch) {
  if (batch.empty()) return 0.0;
  std::vector<double> pre(net.hidden_size());
  std::vector<double> q(net.output_dim());
  double sum = 0.0;
  for (const auto& s : batch) {
    check_sample(net, s);
    net.forward_into(s.state, pre, q);
    const double err = q[s.action] - s.target;
    sum += err * err;
  }
  return sum / static_cast<double>(batch.size());
}

// Dense gradient buffers laid out like the network's internal storage.
struct Gradient {
  std::vector<double> w1t, b1, w2, b2;
  double loss = 0.0;

  static Gradient compute(const Network& net, std::span<const Sample> batch) {
    if (batch.empty()) throw Error("gradient step needs a nonempty batch");
    const std::size_t H = net.hidden_size_;
    Gradient g;
    g.w1t.assign(net.w1t_.size(), 0.0);
    g.b1.assign(H, 0.0);
    g.w2.assign(net.w2_.size(), 0.0);
    g.b2.assign(net.output_dim_, 0.0);

    std::vector<double> pre(H);
    std::vector<double> q(net.output_dim_);
    std::vector<double> dpre(H);
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    double sum = 0.0;
    for (const auto& s : batch) {
      check_sample(net, s);
      net.forward_into(s.state, pre, q);
      const double err = q[s.action] - s.target;
      sum += err * err;
      const double dq = 2.0 * err * inv_b;
      if (dq == 0.0) continue;
      const double* w2row = &net.w2_[s.action * H];
      double* gw2row = &g.w2[s.action * H];
      for (std::size_t h = 0; h < H; ++h) {
        const bool active = pre[h] > 0.0;
        gw2row[h] += dq * (active ? pre[h] : 0.0);
        dpre[h] = active ? dq * w2row[h] : 0.0;
        g.b1[h] += dpre[h];
      }
      g.b2[s.action] += dq;
      for (std::size_t i = 0; i < net.input_dim_; ++i) {
        const double x = s.state[i];
        if (x == 0.0) continue;
        double* col = &g.w1t[i * H];
        for (std::size_t h = 0; h < H; ++h) col[h] += x * dpre[h];
      }
    }
    g.loss = sum * inv_b;
    return g;
  }

  static void apply(Network& net, const Gradient& g, double lr) {
    for (std::size_t k = 0; k < net.w1t_.size(); ++k) net.w1t_[k] -= lr * g.w1t[k];
    for (std::size_t k = 0; k < net.b1_.size(); ++k) net.b1_[k] -= lr * g.b1[k];
    for (std::size_t k = 0; k < net.w2_.size(); ++k) net.w2_[k] -= lr * g.w2[k];
    for (std::size_t k = 0; k < net.b2_.size(); ++k) net.b2_[k] -= lr * g.b2[k];
  }
};

std::vector<double> loss_gradient(const Network& net, std::span<const Sample> batch) {
  const Gradient g = Gradient::compute(net, batch);
  Network tmp(net.input_dim(), net.hidden_size(), net.output_dim());
  Gradient::apply(tmp, g, -1.0);
  return tmp.parameters();
}

void apply_grad_step(Network& net, std::span<const Sample> batch, double lr) {
  if (!(lr >= 0.0) || !std::isfinite(lr)) throw Error("learning rate must be finite and non-negative");
  const Gradient g = Gradient::compute(net, batch);
  if (!std::isfinite(g.loss)) throw NonFiniteLoss("non-finite loss in gradient step");
  if (lr == 0.0) return;
  Gradient::apply(net, g, lr);
  if (!net.all_finite()) throw NonFiniteLoss("gradient step produced non-finite parameters");
}

void write_parameters(std::ostream& out, const Network& net) {
  char buf[32];
  for (double v : net.parameters()) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out << buf;
  }
}

}  // namespace dilemma
