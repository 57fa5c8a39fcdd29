// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pcqa/error.hpp"
#include "pcqa/pcio/point_cloud.hpp"

namespace pcqa {

struct DistortionSpec;
struct Provenance;

class AdapterError : public RuntimeError {
 public:
  enum class Kind { not_configured, tool_missing, nonzero_exit, unreadable_output };

  AdapterError(Kind kind, const std::string& what) : RuntimeError(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// How to run the tool for one distortion id. Each argument may contain the
// placeholders {in}, {out} and {p1}..{pk}; the latter expand to the per-level
// parameters of that distortion, in registry order.
struct AdapterEntry {
  std::string command;
  std::vector<std::string> args;
  bool serialize = true;  // run at most one instance of this adapter at a time
};

struct AdapterConfig {
  std::map<int, AdapterEntry> entries;

  bool has(int distortion_id) const { return entries.contains(distortion_id); }

  // JSON: {"<id>": {"command": "...", "args": ["..."], "serialize": true}, ...}
  static AdapterConfig from_json_text(const std::string& text);
  static AdapterConfig load(const std::filesystem::path& path);
};

// Expands the argument template for `spec`; exposed so the expansion can be
// checked without running anything.
std::vector<std::string> expand_adapter_args(const AdapterEntry& entry, const DistortionSpec& spec,
                                             const std::string& in_path, const std::string& out_path);

// Writes the cloud to a temporary PLY, runs the configured tool and loads
// what it produced.
PointCloud external_codec(const PointCloud& cloud, const DistortionSpec& spec, const AdapterConfig& config,
                          Provenance* provenance = nullptr);

}  // namespace pcqa
