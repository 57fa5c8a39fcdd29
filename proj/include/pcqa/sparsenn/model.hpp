// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pcqa/sparsenn/kernel_map.hpp"
#include "pcqa/sparsenn/layers.hpp"
#include "pcqa/sparsenn/sparse_tensor.hpp"

namespace pcqa {

// Where each block's shortcut starts and ends. With L1..L3 the three
// convolutions of a block and x its input:
//   A  none
//   B  x added to the output of L2
//   C  x added to the output of L3
//   D  output of L1 added to the output of L3
// Shortcuts join after batch norm and before the ReLU. When x is narrower
// than the block (the first block), B and C fall back to the D span.
enum class ResidualVariant { A, B, C, D };

std::string to_string(ResidualVariant v);
ResidualVariant parse_residual_variant(const std::string& s);
std::string to_string(PoolMode m);
PoolMode parse_pool_mode(const std::string& s);

struct ModelConfig {
  int depth = 4;         // blocks
  int width = 64;        // channels in every block
  int hidden = 32;       // FC-1 output
  int in_channels = 3;
  int kernel_size = 3;
  ResidualVariant variant = ResidualVariant::D;
  PoolMode pooling = PoolMode::avg;

  void validate() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct ConvParams {
  FeatureMatrix weight;  // (kernel volume * C_in) x C_out
  Eigen::VectorXd gamma;
  Eigen::VectorXd beta;
};

// Trainable parameters; gradients use the same type.
struct Parameters {
  std::vector<ConvParams> conv;  // 3 per block
  FeatureMatrix fc1_w;           // hidden x (width * depth)
  Eigen::VectorXd fc1_b;
  FeatureMatrix fc2_w;  // 1 x hidden
  Eigen::VectorXd fc2_b;

  static Parameters zeros(const ModelConfig& config);
  void set_zero();
  // Every parameter block in a fixed order, for optimizers and checks.
  std::vector<std::span<double>> views();
  std::size_t count() const;
};

// Intermediates kept by a training-mode forward pass.
struct ForwardCache {
  const SparseTensor* input = nullptr;
  KernelMap map;
  struct Layer {
    int source = 0;  // index into activations of the layer input
    int skip = -1;   // index into activations of the shortcut, or -1
    BatchNormCache bn;
    FeatureMatrix mask;  // 1 where the pre-activation was positive
  };
  std::vector<Layer> layers;
  std::vector<FeatureMatrix> activations;  // [0] = input features, then one per layer
  std::vector<std::vector<Eigen::Index>> argmax;
  Eigen::VectorXd pooled;
  Eigen::VectorXd hidden_pre;
  double output = 0.0;
};

class ResSCNN {
 public:
  ResSCNN() : ResSCNN(ModelConfig{}) {}
  explicit ResSCNN(const ModelConfig& config);  // all-zero weights, unit running variance

  // He-normal convolution and FC weights, zero biases, unit gamma.
  static ResSCNN initialized(const ModelConfig& config, std::uint64_t seed);

  const ModelConfig& config() const { return config_; }
  Parameters& params() { return params_; }
  const Parameters& params() const { return params_; }
  std::vector<BatchNormStats>& running_stats() { return running_; }
  const std::vector<BatchNormStats>& running_stats() const { return running_; }

  // Batch norm from the rows of this sample; fills `cache` for backward.
  double forward_train(const SparseTensor& x, ForwardCache& cache) const;
  double forward_train(const SparseTensor& x) const;
  // Batch norm from the running statistics.
  double forward_eval(const SparseTensor& x) const;

  // Gradients of a loss with dL/dQ = d_output, accumulated into `grads`.
  void backward(const ForwardCache& cache, double d_output, Parameters& grads) const;

  // Running-statistic update from a training pass (momentum 0.9).
  void update_running_stats(const ForwardCache& cache);

  std::size_t parameter_count() const { return params_.count(); }

 private:
  template <bool Train>
  double run(const SparseTensor& x, ForwardCache* cache) const;

  ModelConfig config_;
  Parameters params_;
  std::vector<BatchNormStats> running_;
};

// Loss and gradients for one labeled sample.
double loss_and_gradients(const ResSCNN& model, const SparseTensor& x, double label, Parameters& grads,
                          ForwardCache* cache = nullptr);

// theta -= lr * grads / accumulated
void sgd_step(ResSCNN& model, Parameters& grads, double lr, int accumulated);

}  // namespace pcqa
