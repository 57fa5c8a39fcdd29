// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "pcqa/distort/rng.hpp"
#include "pcqa/pcio/point_cloud.hpp"
#include "pcqa/sparsenn/model.hpp"

namespace pcqa {

struct AugmentConfig {
  double scale_min = 0.8;
  double scale_max = 1.2;
  double rotation_min_deg = 0.0;
  double rotation_max_deg = 360.0;
};

// Scales by `scale` about the centroid, then rotates by `angle_deg` about
// the z axis through the centroid. Colors are untouched.
PointCloud augment(const PointCloud& cloud, double scale, double angle_deg);
// Draws the scale and angle uniformly from the configured ranges.
PointCloud augment(const PointCloud& cloud, CounterRng& rng, const AugmentConfig& config);

struct TrainConfig {
  double lr = 1e-3;
  double gamma = 0.99;   // lr decay per epoch
  int accumulation = 8;  // samples per SGD step
  int max_epochs = 100;
  long max_steps = 0;    // samples to process; 0 means max_epochs decides
  bool augmentation = true;
  AugmentConfig augment;
  double voxel_size = 1.0;
  std::uint64_t seed = 0;
  // Starts the output bias at the mean training label.
  bool init_output_bias = true;
  double label_min = 1.0;
  double label_max = 5.0;

  void validate() const;
};

struct TrainSample {
  std::string id;
  PointCloud cloud;
  double label = 0.0;
};

struct LossRecord {
  long step = 0;  // 1-based count of processed samples
  int epoch = 0;  // 1-based
  double lr = 0.0;
  double loss = 0.0;
};

struct TrainResult {
  ResSCNN model;
  std::vector<LossRecord> curve;
  std::vector<std::string> warnings;
  double last_epoch_mean_loss = 0.0;  // mean over the final sample-count steps
};

// Batch size 1: each sample is augmented, voxelized, run forward and
// backward; every `accumulation` samples (and at the end of each epoch) the
// summed gradient is applied. Samples are shuffled per epoch from the seed.
TrainResult train(ResSCNN model, const std::vector<TrainSample>& samples, const TrainConfig& config,
                  const std::function<void(const ResSCNN&, int epoch)>& on_epoch = {});

// Inference: voxelize without augmentation, batch norm from running stats.
double predict(const ResSCNN& model, const PointCloud& cloud, double voxel_size = 1.0);

void write_loss_curve(std::ostream& out, const std::vector<LossRecord>& curve);

}  // namespace pcqa
