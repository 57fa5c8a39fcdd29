// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/sparsenn/layers.hpp"

#include <cmath>
#include <string>

#include "pcqa/error.hpp"

namespace pcqa {
namespace {

void check_width(const FeatureMatrix& in, const FeatureMatrix& weight, const KernelMap& map) {
  const auto volume = static_cast<Eigen::Index>(map.volume());
  if (weight.rows() != volume * in.cols())
    throw ValidationError("convolution expects " + std::to_string(weight.rows() / volume) +
                          " input channels, got " + std::to_string(in.cols()));
}

FeatureMatrix gather(const FeatureMatrix& x, const std::vector<std::uint32_t>& rows) {
  FeatureMatrix g(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) g.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  return g;
}

}  // namespace

FeatureMatrix subm_conv(const FeatureMatrix& in, const FeatureMatrix& weight, const KernelMap& map) {
  check_width(in, weight, map);
  const Eigen::Index cin = in.cols();
  const std::size_t centre = map.center();
  FeatureMatrix out = in * weight.middleRows(static_cast<Eigen::Index>(centre) * cin, cin);
  for (std::size_t k = 0; k < map.volume(); ++k) {
    if (k == centre || map.pair_count(k) == 0) continue;
    const FeatureMatrix y = gather(in, map.in_rows[k]) * weight.middleRows(static_cast<Eigen::Index>(k) * cin, cin);
    const auto& outs = map.out_rows[k];
    for (std::size_t i = 0; i < outs.size(); ++i) out.row(outs[i]) += y.row(static_cast<Eigen::Index>(i));
  }
  return out;
}

void subm_conv_backward(const FeatureMatrix& in, const FeatureMatrix& weight, const KernelMap& map,
                        const FeatureMatrix& d_out, FeatureMatrix* d_in, FeatureMatrix& d_weight) {
  check_width(in, weight, map);
  const Eigen::Index cin = in.cols();
  const std::size_t centre = map.center();
  for (std::size_t k = 0; k < map.volume(); ++k) {
    if (map.pair_count(k) == 0) continue;
    const auto rows = static_cast<Eigen::Index>(k) * cin;
    if (k == centre) {
      d_weight.middleRows(rows, cin).noalias() += in.transpose() * d_out;
      if (d_in != nullptr) d_in->noalias() += d_out * weight.middleRows(rows, cin).transpose();
      continue;
    }
    const FeatureMatrix g_in = gather(in, map.in_rows[k]);
    const FeatureMatrix g_dout = gather(d_out, map.out_rows[k]);
    d_weight.middleRows(rows, cin).noalias() += g_in.transpose() * g_dout;
    if (d_in == nullptr) continue;
    const FeatureMatrix g_din = g_dout * weight.middleRows(rows, cin).transpose();
    const auto& ins = map.in_rows[k];
    for (std::size_t i = 0; i < ins.size(); ++i) d_in->row(ins[i]) += g_din.row(static_cast<Eigen::Index>(i));
  }
}

FeatureMatrix batch_norm_train(const FeatureMatrix& x, const Eigen::VectorXd& gamma, const Eigen::VectorXd& beta,
                               BatchNormCache* cache) {
  const double n = static_cast<double>(x.rows());
  const Eigen::VectorXd mean = x.colwise().sum().transpose() / n;
  const FeatureMatrix centred = x.rowwise() - mean.transpose();
  const Eigen::VectorXd var = centred.array().square().colwise().sum().transpose() / n;
  const Eigen::VectorXd inv_std = (var.array() + kBatchNormEps).rsqrt();
  FeatureMatrix xhat = centred.array().rowwise() * inv_std.transpose().array();
  FeatureMatrix y = (xhat.array().rowwise() * gamma.transpose().array()).rowwise() + beta.transpose().array();
  if (cache != nullptr) {
    cache->xhat = std::move(xhat);
    cache->inv_std = inv_std;
    cache->batch = BatchNormStats{mean, var};
  }
  return y;
}

FeatureMatrix batch_norm_eval(const FeatureMatrix& x, const Eigen::VectorXd& gamma, const Eigen::VectorXd& beta,
                              const BatchNormStats& running) {
  const Eigen::ArrayXd scale = gamma.array() * (running.var.array() + kBatchNormEps).rsqrt();
  const Eigen::ArrayXd shift = beta.array() - running.mean.array() * scale;
  return (x.array().rowwise() * scale.transpose()).rowwise() + shift.transpose();
}

FeatureMatrix batch_norm_backward(const BatchNormCache& cache, const Eigen::VectorXd& gamma,
                                  const FeatureMatrix& d_out, Eigen::VectorXd& d_gamma, Eigen::VectorXd& d_beta) {
  const double n = static_cast<double>(d_out.rows());
  const Eigen::VectorXd sum_dy = d_out.colwise().sum().transpose();
  const Eigen::VectorXd sum_dy_xhat = (d_out.array() * cache.xhat.array()).colwise().sum().transpose();
  d_gamma += sum_dy_xhat;
  d_beta += sum_dy;
  // dx = gamma * inv_std / n * (n dy - sum(dy) - xhat * sum(dy xhat))
  const Eigen::ArrayXd k = gamma.array() * cache.inv_std.array() / n;
  FeatureMatrix dx = (n * d_out.array()).rowwise() - sum_dy.transpose().array();
  dx.array() -= cache.xhat.array().rowwise() * sum_dy_xhat.transpose().array();
  dx.array().rowwise() *= k.transpose();
  return dx;
}

Eigen::VectorXd global_pool(const FeatureMatrix& x, PoolMode mode, std::vector<Eigen::Index>* argmax) {
  if (x.rows() == 0) throw ValidationError("global pooling of an empty tensor");
  if (mode == PoolMode::avg) return x.colwise().sum().transpose() / static_cast<double>(x.rows());
  Eigen::VectorXd out(x.cols());
  if (argmax != nullptr) argmax->assign(static_cast<std::size_t>(x.cols()), 0);
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    Eigen::Index best = 0;
    for (Eigen::Index r = 1; r < x.rows(); ++r) {
      if (x(r, c) > x(best, c)) best = r;
    }
    out(c) = x(best, c);
    if (argmax != nullptr) (*argmax)[static_cast<std::size_t>(c)] = best;
  }
  return out;
}

FeatureMatrix global_pool_backward(const Eigen::VectorXd& d_pooled, Eigen::Index rows, PoolMode mode,
                                   const std::vector<Eigen::Index>& argmax) {
  if (mode == PoolMode::avg) {
    FeatureMatrix d(rows, d_pooled.size());
    d.rowwise() = d_pooled.transpose() / static_cast<double>(rows);
    return d;
  }
  FeatureMatrix d = FeatureMatrix::Zero(rows, d_pooled.size());
  for (Eigen::Index c = 0; c < d_pooled.size(); ++c) d(argmax[static_cast<std::size_t>(c)], c) = d_pooled(c);
  return d;
}

SmoothL1 smooth_l1(double prediction, double label) {
  const double x = prediction - label;
  if (std::abs(x) < 1.0) return {0.5 * x * x, x};
  return {std::abs(x) - 0.5, x > 0.0 ? 1.0 : -1.0};
}

}  // namespace pcqa
