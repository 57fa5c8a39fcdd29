// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pcqa/annotate/pseudo_mos.hpp"
#include "pcqa/app/config.hpp"
#include "pcqa/distort/distort.hpp"

namespace pcqa {

struct ManifestHeader {
  std::uint64_t dataset_seed = 0;
  double psnr_cap = kDefaultPsnrCap;
  LabelScale label_scale;
  std::map<std::string, std::filesystem::path> references;  // id -> absolute path
};

struct ManifestRecord {
  std::string sample_id;
  std::string reference_id;
  int distortion_id = 1;
  int level = 1;
  std::uint64_t seed = 0;
  std::filesystem::path path;  // absolute once loaded; empty when generation failed
  std::optional<std::string> error;
  Provenance provenance;
  std::optional<double> pseudo_mos;
  std::optional<double> mos;
  std::optional<std::string> source_metric;

  bool ok() const { return !error.has_value(); }
};

// JSON lines: one header object, then one object per sample. Paths are
// stored relative to the manifest's directory.
struct Manifest {
  ManifestHeader header;
  std::vector<ManifestRecord> records;

  // Unique sample ids, known references, label fields within the scale.
  // With `check_files` every referenced file must exist.
  void validate(bool check_files) const;

  const ManifestRecord& find(const std::string& sample_id) const;
  std::vector<std::string> reference_ids() const;

  static Manifest load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

// Train/test partition of manifest rows by reference id.
struct SplitRows {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

SplitRows split_by_reference(const Manifest& manifest, const SplitSpec& split);

}  // namespace pcqa
