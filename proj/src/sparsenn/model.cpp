// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/sparsenn/model.hpp"

#include <cmath>

#include "pcqa/distort/rng.hpp"

namespace pcqa {
namespace {

struct Wiring {
  int source;
  int skip;
};

// Activation indices: 0 is the input, layer l writes l + 1.
std::vector<Wiring> wiring(const ModelConfig& c) {
  std::vector<Wiring> w;
  for (int b = 0; b < c.depth; ++b) {
    const int x = 3 * b;
    const bool narrow_input = b == 0 && c.in_channels != c.width;
    ResidualVariant v = c.variant;
    if (narrow_input && (v == ResidualVariant::B || v == ResidualVariant::C)) v = ResidualVariant::D;
    w.push_back({x, -1});
    w.push_back({x + 1, v == ResidualVariant::B ? x : -1});
    int skip3 = -1;
    if (v == ResidualVariant::C) skip3 = x;
    if (v == ResidualVariant::D) skip3 = x + 1;
    w.push_back({x + 2, skip3});
  }
  return w;
}

int kernel_volume(const ModelConfig& c) { return c.kernel_size * c.kernel_size * c.kernel_size; }

void fill_normal(std::span<double> values, double stddev, CounterRng rng) {
  for (double& v : values) v = stddev * rng.normal();
}

std::span<double> view(FeatureMatrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
std::span<double> view(Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

std::string to_string(ResidualVariant v) {
  switch (v) {
    case ResidualVariant::A: return "A";
    case ResidualVariant::B: return "B";
    case ResidualVariant::C: return "C";
    case ResidualVariant::D: return "D";
  }
  return "?";
}

ResidualVariant parse_residual_variant(const std::string& s) {
  if (s == "A") return ResidualVariant::A;
  if (s == "B") return ResidualVariant::B;
  if (s == "C") return ResidualVariant::C;
  if (s == "D") return ResidualVariant::D;
  throw ValidationError("unknown residual variant '" + s + "' (expected A, B, C or D)");
}

std::string to_string(PoolMode m) { return m == PoolMode::avg ? "avg" : "max"; }

PoolMode parse_pool_mode(const std::string& s) {
  if (s == "avg") return PoolMode::avg;
  if (s == "max") return PoolMode::max;
  throw ValidationError("unknown pooling mode '" + s + "'");
}

void ModelConfig::validate() const {
  if (depth < 1) throw ValidationError("model depth must be at least 1");
  if (width < 1 || hidden < 1 || in_channels < 1) throw ValidationError("model widths must be positive");
  if (kernel_size < 1 || kernel_size % 2 == 0) throw ValidationError("kernel size must be odd and positive");
}

Parameters Parameters::zeros(const ModelConfig& c) {
  c.validate();
  Parameters p;
  const int vol = kernel_volume(c);
  for (int l = 0; l < 3 * c.depth; ++l) {
    const int cin = l == 0 ? c.in_channels : c.width;
    p.conv.push_back({FeatureMatrix::Zero(vol * cin, c.width), Eigen::VectorXd::Zero(c.width),
                      Eigen::VectorXd::Zero(c.width)});
  }
  p.fc1_w = FeatureMatrix::Zero(c.hidden, c.width * c.depth);
  p.fc1_b = Eigen::VectorXd::Zero(c.hidden);
  p.fc2_w = FeatureMatrix::Zero(1, c.hidden);
  p.fc2_b = Eigen::VectorXd::Zero(1);
  return p;
}

void Parameters::set_zero() {
  for (auto v : views()) std::fill(v.begin(), v.end(), 0.0);
}

std::vector<std::span<double>> Parameters::views() {
  std::vector<std::span<double>> out;
  for (auto& c : conv) {
    out.push_back(view(c.weight));
    out.push_back(view(c.gamma));
    out.push_back(view(c.beta));
  }
  out.push_back(view(fc1_w));
  out.push_back(view(fc1_b));
  out.push_back(view(fc2_w));
  out.push_back(view(fc2_b));
  return out;
}

std::size_t Parameters::count() const {
  std::size_t n = 0;
  for (const auto& c : conv) n += static_cast<std::size_t>(c.weight.size() + c.gamma.size() + c.beta.size());
  return n + static_cast<std::size_t>(fc1_w.size() + fc1_b.size() + fc2_w.size() + fc2_b.size());
}

ResSCNN::ResSCNN(const ModelConfig& config) : config_(config), params_(Parameters::zeros(config)) {
  for (int l = 0; l < 3 * config_.depth; ++l)
    running_.push_back({Eigen::VectorXd::Zero(config_.width), Eigen::VectorXd::Ones(config_.width)});
}

ResSCNN ResSCNN::initialized(const ModelConfig& config, std::uint64_t seed) {
  ResSCNN m(config);
  const int vol = kernel_volume(config);
  std::uint64_t stream = 0;
  for (int l = 0; l < 3 * config.depth; ++l) {
    auto& c = m.params_.conv[static_cast<std::size_t>(l)];
    const int cin = l == 0 ? config.in_channels : config.width;
    fill_normal(view(c.weight), std::sqrt(2.0 / (vol * cin)), CounterRng(seed, ++stream));
    c.gamma.setOnes();
  }
  fill_normal(view(m.params_.fc1_w), std::sqrt(2.0 / (config.width * config.depth)), CounterRng(seed, ++stream));
  fill_normal(view(m.params_.fc2_w), std::sqrt(2.0 / config.hidden), CounterRng(seed, ++stream));
  return m;
}

template <bool Train>
double ResSCNN::run(const SparseTensor& x, ForwardCache* cache) const {
  if (x.feats().cols() != config_.in_channels)
    throw ValidationError("model expects " + std::to_string(config_.in_channels) + " input channels, got " +
                          std::to_string(x.feats().cols()));
  ForwardCache local;
  ForwardCache& c = cache != nullptr ? *cache : local;
  c.input = &x;
  c.map = build_kernel_map(x, config_.kernel_size);
  c.layers.clear();
  c.activations.clear();
  c.argmax.assign(static_cast<std::size_t>(config_.depth), {});
  c.activations.push_back(x.feats());

  const auto wires = wiring(config_);
  for (std::size_t l = 0; l < wires.size(); ++l) {
    const auto& p = params_.conv[l];
    ForwardCache::Layer layer{wires[l].source, wires[l].skip, {}, {}};
    const FeatureMatrix conv = subm_conv(c.activations[static_cast<std::size_t>(layer.source)], p.weight, c.map);
    FeatureMatrix z = Train ? batch_norm_train(conv, p.gamma, p.beta, &layer.bn)
                            : batch_norm_eval(conv, p.gamma, p.beta, running_[l]);
    if (layer.skip >= 0) z += c.activations[static_cast<std::size_t>(layer.skip)];
    if constexpr (Train) layer.mask = (z.array() > 0.0).cast<double>();
    c.activations.push_back(z.cwiseMax(0.0));
    c.layers.push_back(std::move(layer));
  }

  const Eigen::Index w = config_.width;
  c.pooled.resize(w * config_.depth);
  for (int b = 0; b < config_.depth; ++b)
    c.pooled.segment(b * w, w) = global_pool(c.activations[static_cast<std::size_t>(3 * b + 3)], config_.pooling,
                                             &c.argmax[static_cast<std::size_t>(b)]);
  c.hidden_pre = params_.fc1_w * c.pooled + params_.fc1_b;
  c.output = (params_.fc2_w * c.hidden_pre.cwiseMax(0.0))(0) + params_.fc2_b(0);
  return c.output;
}

double ResSCNN::forward_train(const SparseTensor& x, ForwardCache& cache) const { return run<true>(x, &cache); }
double ResSCNN::forward_train(const SparseTensor& x) const { return run<true>(x, nullptr); }
double ResSCNN::forward_eval(const SparseTensor& x) const { return run<false>(x, nullptr); }

void ResSCNN::backward(const ForwardCache& cache, double d_output, Parameters& grads) const {
  if (cache.input == nullptr || cache.layers.size() != params_.conv.size())
    throw ValidationError("backward needs the cache of a training forward pass");
  const Eigen::VectorXd relu_h = cache.hidden_pre.cwiseMax(0.0);
  grads.fc2_w.row(0) += d_output * relu_h.transpose();
  grads.fc2_b(0) += d_output;
  const Eigen::VectorXd d_h =
      (params_.fc2_w.row(0).transpose() * d_output).cwiseProduct((cache.hidden_pre.array() > 0.0).cast<double>().matrix());
  grads.fc1_w.noalias() += d_h * cache.pooled.transpose();
  grads.fc1_b += d_h;
  const Eigen::VectorXd d_pooled = params_.fc1_w.transpose() * d_h;

  std::vector<FeatureMatrix> d_act(cache.activations.size());
  for (std::size_t i = 1; i < d_act.size(); ++i)
    d_act[i] = FeatureMatrix::Zero(cache.activations[i].rows(), cache.activations[i].cols());
  const Eigen::Index w = config_.width;
  for (int b = 0; b < config_.depth; ++b) {
    const auto idx = static_cast<std::size_t>(3 * b + 3);
    d_act[idx] += global_pool_backward(d_pooled.segment(b * w, w), cache.activations[idx].rows(), config_.pooling,
                                       cache.argmax[static_cast<std::size_t>(b)]);
  }

  for (std::size_t l = cache.layers.size(); l-- > 0;) {
    const auto& layer = cache.layers[l];
    const FeatureMatrix dz = d_act[l + 1].cwiseProduct(layer.mask);
    if (layer.skip > 0) d_act[static_cast<std::size_t>(layer.skip)] += dz;
    auto& g = grads.conv[l];
    const FeatureMatrix d_conv = batch_norm_backward(layer.bn, params_.conv[l].gamma, dz, g.gamma, g.beta);
    const auto src = static_cast<std::size_t>(layer.source);
    subm_conv_backward(cache.activations[src], params_.conv[l].weight, cache.map, d_conv,
                       src > 0 ? &d_act[src] : nullptr, g.weight);
  }
}

void ResSCNN::update_running_stats(const ForwardCache& cache) {
  for (std::size_t l = 0; l < running_.size(); ++l) {
    const auto& batch = cache.layers[l].bn.batch;
    running_[l].mean = kBatchNormMomentum * running_[l].mean + (1.0 - kBatchNormMomentum) * batch.mean;
    running_[l].var = kBatchNormMomentum * running_[l].var + (1.0 - kBatchNormMomentum) * batch.var;
  }
}

double loss_and_gradients(const ResSCNN& model, const SparseTensor& x, double label, Parameters& grads,
                          ForwardCache* cache) {
  ForwardCache local;
  ForwardCache& c = cache != nullptr ? *cache : local;
  const SmoothL1 l = smooth_l1(model.forward_train(x, c), label);
  model.backward(c, l.grad, grads);
  return l.loss;
}

void sgd_step(ResSCNN& model, Parameters& grads, double lr, int accumulated) {
  if (accumulated < 1) throw ValidationError("sgd step over zero accumulated samples");
  const double scale = lr / accumulated;
  auto p = model.params().views();
  auto g = grads.views();
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < p[i].size(); ++j) p[i][j] -= scale * g[i][j];
  }
}

}  // namespace pcqa
