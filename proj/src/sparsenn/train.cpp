// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/sparsenn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>

#include "pcqa/distort/registry.hpp"
#include "pcqa/sparsenn/sparse_tensor.hpp"

namespace pcqa {

PointCloud augment(const PointCloud& cloud, double scale, double angle_deg) {
  cloud.validate();
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& p : cloud.positions) centroid += p;
  centroid /= static_cast<double>(cloud.size());
  const double a = angle_deg * std::numbers::pi / 180.0;
  const double c = std::cos(a), s = std::sin(a);
  PointCloud out = cloud;
  out.normals.reset();
  for (Vec3& p : out.positions) {
    const Vec3 d = scale * (p - centroid);
    p = centroid + Vec3(c * d.x() - s * d.y(), s * d.x() + c * d.y(), d.z());
  }
  return out;
}

PointCloud augment(const PointCloud& cloud, CounterRng& rng, const AugmentConfig& config) {
  const double scale = rng.uniform(config.scale_min, config.scale_max);
  const double angle = rng.uniform(config.rotation_min_deg, config.rotation_max_deg);
  return augment(cloud, scale, angle);
}

void TrainConfig::validate() const {
  if (!(lr > 0.0)) throw ValidationError("learning rate must be positive");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ValidationError("lr decay must lie in (0, 1]");
  if (accumulation < 1) throw ValidationError("accumulation length must be at least 1");
  if (max_epochs < 1 && max_steps <= 0) throw ValidationError("training needs max_epochs or max_steps");
  if (!(voxel_size > 0.0)) throw ValidationError("voxel size must be positive");
  if (!(augment.scale_min > 0.0 && augment.scale_min <= augment.scale_max))
    throw ValidationError("bad augmentation scale range");
  if (!(label_min < label_max)) throw ValidationError("label scale needs min < max");
}

TrainResult train(ResSCNN model, const std::vector<TrainSample>& samples, const TrainConfig& config,
                  const std::function<void(const ResSCNN&, int epoch)>& on_epoch) {
  config.validate();
  if (samples.empty()) throw ValidationError("training split is empty");
  TrainResult result{std::move(model), {}, {}, 0.0};
  ResSCNN& m = result.model;

  double label_mean = 0.0;
  for (const auto& s : samples) {
    if (s.label < config.label_min || s.label > config.label_max)
      result.warnings.push_back("sample " + s.id + " label " + format_parameter(s.label) + " outside [" +
                                format_parameter(config.label_min) + ", " + format_parameter(config.label_max) + "]");
    label_mean += s.label;
  }
  label_mean /= static_cast<double>(samples.size());
  if (config.init_output_bias) m.params().fc2_b(0) = label_mean;

  // Without augmentation every epoch sees the same tensors.
  std::vector<std::optional<SparseTensor>> fixed(samples.size());
  if (!config.augmentation) {
    for (std::size_t i = 0; i < samples.size(); ++i) fixed[i] = voxelize(samples[i].cloud, config.voxel_size);
  }

  Parameters grads = Parameters::zeros(m.config());
  ForwardCache cache;
  double lr = config.lr;
  long step = 0;
  int pending = 0;
  const long step_limit = config.max_steps > 0 ? config.max_steps : -1;
  for (int epoch = 1; config.max_steps > 0 || epoch <= config.max_epochs; ++epoch) {
    CounterRng shuffle(derive_seed({config.seed, 0x5u}), static_cast<std::uint64_t>(epoch));
    const auto order = random_permutation(samples.size(), shuffle);
    for (std::size_t idx : order) {
      if (step == step_limit) break;
      ++step;
      const TrainSample& s = samples[idx];
      std::optional<SparseTensor> drawn;
      if (!config.augmentation) {
        drawn = *fixed[idx];
      } else {
        CounterRng rng(derive_seed({config.seed, 0xau}), static_cast<std::uint64_t>(step));
        drawn = voxelize(augment(s.cloud, rng, config.augment), config.voxel_size);
      }
      const double loss = loss_and_gradients(m, *drawn, s.label, grads, &cache);
      m.update_running_stats(cache);
      ++pending;
      result.curve.push_back({step, epoch, lr, loss});
      if (pending == config.accumulation) {
        sgd_step(m, grads, lr, pending);
        grads.set_zero();
        pending = 0;
      }
    }
    if (pending > 0) {
      sgd_step(m, grads, lr, pending);
      grads.set_zero();
      pending = 0;
    }
    lr *= config.gamma;
    if (on_epoch) on_epoch(m, epoch);
    if (step == step_limit) break;
  }
  const std::size_t tail = std::min(result.curve.size(), samples.size());
  for (std::size_t i = result.curve.size() - tail; i < result.curve.size(); ++i)
    result.last_epoch_mean_loss += result.curve[i].loss / static_cast<double>(tail);
  return result;
}

double predict(const ResSCNN& model, const PointCloud& cloud, double voxel_size) {
  return model.forward_eval(voxelize(cloud, voxel_size));
}

void write_loss_curve(std::ostream& out, const std::vector<LossRecord>& curve) {
  out << "step,epoch,lr,loss\n";
  for (const auto& r : curve)
    out << r.step << ',' << r.epoch << ',' << format_parameter(r.lr) << ',' << format_parameter(r.loss) << '\n';
}

}  // namespace pcqa
