// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include <vector>

#include "pcqa/sparsenn/kernel_map.hpp"
#include "pcqa/sparsenn/sparse_tensor.hpp"

namespace pcqa {

// Sub-manifold convolution. `weight` stacks the per-offset C_in x C_out
// matrices, so it is (volume * C_in) x C_out and out(u) = sum_i in(u+i) W_i.
FeatureMatrix subm_conv(const FeatureMatrix& in, const FeatureMatrix& weight, const KernelMap& map);

// Accumulates into d_weight and, unless it is null, into d_in (shaped like `in`).
void subm_conv_backward(const FeatureMatrix& in, const FeatureMatrix& weight, const KernelMap& map,
                        const FeatureMatrix& d_out, FeatureMatrix* d_in, FeatureMatrix& d_weight);

inline constexpr double kBatchNormEps = 1e-5;
inline constexpr double kBatchNormMomentum = 0.9;

struct BatchNormStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd var;  // biased, over the rows of one sample
};

struct BatchNormCache {
  FeatureMatrix xhat;
  Eigen::VectorXd inv_std;
  BatchNormStats batch;
};

// Training mode: normalizes by the statistics of the rows of `x`.
FeatureMatrix batch_norm_train(const FeatureMatrix& x, const Eigen::VectorXd& gamma, const Eigen::VectorXd& beta,
                               BatchNormCache* cache);
// Inference mode: normalizes by the given running statistics.
FeatureMatrix batch_norm_eval(const FeatureMatrix& x, const Eigen::VectorXd& gamma, const Eigen::VectorXd& beta,
                              const BatchNormStats& running);
// Returns dL/dx and accumulates dL/dgamma, dL/dbeta.
FeatureMatrix batch_norm_backward(const BatchNormCache& cache, const Eigen::VectorXd& gamma,
                                  const FeatureMatrix& d_out, Eigen::VectorXd& d_gamma, Eigen::VectorXd& d_beta);

enum class PoolMode { avg, max };

// One value per channel over all rows. For max pooling `argmax` receives
// the first row attaining each maximum.
Eigen::VectorXd global_pool(const FeatureMatrix& x, PoolMode mode, std::vector<Eigen::Index>* argmax = nullptr);
FeatureMatrix global_pool_backward(const Eigen::VectorXd& d_pooled, Eigen::Index rows, PoolMode mode,
                                   const std::vector<Eigen::Index>& argmax);

struct SmoothL1 {
  double loss = 0.0;
  double grad = 0.0;  // d loss / d prediction
};

SmoothL1 smooth_l1(double prediction, double label);

}  // namespace pcqa
