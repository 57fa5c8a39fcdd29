// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcqa/error.hpp"

namespace pcqa {

inline constexpr int kDistortionCount = 31;
inline constexpr int kLevelCount = 7;

enum class Category { photometric, geometric, local, compression, external };

std::string_view to_string(Category c);

struct DistortionSpec {
  int distortion_id = 1;  // 1..31
  int level = 1;          // 1..7
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const DistortionSpec&, const DistortionSpec&) = default;
};

// One named parameter with its seven per-level values.
struct LevelParameter {
  std::string_view name;
  std::array<double, kLevelCount> values;
};

struct DistortionDescriptor {
  int id = 0;
  std::string_view name;
  Category category = Category::photometric;
  bool alters_geometry = false;  // positions or point count may change
  bool alters_color = false;
  std::vector<LevelParameter> parameters;

  bool is_native() const { return category != Category::external; }
  double param(int level, std::size_t which = 0) const;
};

// All 31 distortion types, indexed by id - 1.
std::span<const DistortionDescriptor> distortion_registry();
const DistortionDescriptor& describe_distortion(int id);

// Ids with an in-process generator (everything except external adapters).
std::vector<int> native_distortion_ids();

// Formats a parameter value the way it is handed to external tools:
// shortest round-trip decimal, so 0.9375 stays "0.9375" and 27 stays "27".
std::string format_parameter(double v);

}  // namespace pcqa
