// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>

#include "pcqa/sparsenn/model.hpp"

namespace pcqa {

// Binary layout, little endian: magic "RSCNNCK1", u32 version, the model
// config as seven i32, then for each conv layer weight, gamma, beta,
// running mean and running variance, then FC-1 and FC-2 weights and biases.
// Every blob is a u64 element count followed by that many f64.
void save_checkpoint(const ResSCNN& model, std::ostream& out);
void save_checkpoint(const ResSCNN& model, const std::filesystem::path& path);

ResSCNN load_checkpoint(std::istream& in);
ResSCNN load_checkpoint(const std::filesystem::path& path);

// Loads and checks that the stored architecture equals `expected`.
ResSCNN load_checkpoint(const std::filesystem::path& path, const ModelConfig& expected);

}  // namespace pcqa
