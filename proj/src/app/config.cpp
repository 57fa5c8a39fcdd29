// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/app/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pcqa {
namespace {

using nlohmann::json;

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ValidationError("config: '" + where + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ValidationError("config: unknown key '" + where + "." + key + "'");
  }
}

}  // namespace

std::vector<int> AppConfig::distortion_ids() const {
  return distortions.empty() ? native_distortion_ids() : distortions;
}

std::vector<MetricId> AppConfig::metric_ids() const { return metrics.empty() ? builtin_metrics() : metrics; }

void AppConfig::validate() const {
  std::set<int> seen;
  for (int id : distortions) {
    DistortionSpec{id, 1, 0}.validate();
    if (!seen.insert(id).second) throw ValidationError("config: distortion " + std::to_string(id) + " listed twice");
  }
  if (!(psnr_cap > 0.0)) throw ValidationError("config: psnr_cap must be positive");
  label_scale.validate();
  if (!(voxel_size > 0.0)) throw ValidationError("config: voxel_size must be positive");
  model.validate();
  train.validate();
  for (const auto& t : split.test_references) {
    if (std::find(split.train_references.begin(), split.train_references.end(), t) != split.train_references.end())
      throw ValidationError("split: reference '" + t + "' is in both train and test");
  }
  for (int d : ablation_depths) {
    if (d < 1) throw ValidationError("config: ablation depths must be positive");
  }
}

AppConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  AppConfig c;
  try {
    check_keys(j, "config", {"seed", "distortions", "metrics", "psnr_cap", "label_scale", "voxel_size", "annotate",
                             "split", "model", "train", "ablation"});
    read(j, "seed", c.seed);
    if (j.contains("distortions")) {
      const auto& d = j.at("distortions");
      if (d.is_string()) {
        if (d.get<std::string>() != "native") c.distortions = parse_id_list(d.get<std::string>());
      } else {
        c.distortions = d.get<std::vector<int>>();
      }
    }
    if (j.contains("metrics")) {
      for (const auto& name : j.at("metrics").get<std::vector<std::string>>()) c.metrics.push_back(MetricId::parse(name));
    }
    read(j, "psnr_cap", c.psnr_cap);
    if (j.contains("label_scale")) {
      const auto s = j.at("label_scale").get<std::vector<double>>();
      if (s.size() != 2) throw ValidationError("config: label_scale must be [min, max]");
      c.label_scale = {s[0], s[1]};
    }
    read(j, "voxel_size", c.voxel_size);
    if (j.contains("annotate")) {
      const auto& a = j.at("annotate");
      check_keys(a, "annotate", {"holdout_references", "regression", "min_scores"});
      read(a, "holdout_references", c.holdout_references);
      if (a.contains("regression")) c.regression = parse_regression_kind(a.at("regression").get<std::string>());
      read(a, "min_scores", c.min_scores);
    }
    if (j.contains("split")) {
      const auto& s = j.at("split");
      check_keys(s, "split", {"train_references", "test_references"});
      read(s, "train_references", c.split.train_references);
      read(s, "test_references", c.split.test_references);
    }
    if (j.contains("model")) {
      const auto& m = j.at("model");
      check_keys(m, "model", {"depth", "width", "hidden", "kernel_size", "variant", "pooling", "seed"});
      read(m, "depth", c.model.depth);
      read(m, "width", c.model.width);
      read(m, "hidden", c.model.hidden);
      read(m, "kernel_size", c.model.kernel_size);
      if (m.contains("variant")) c.model.variant = parse_residual_variant(m.at("variant").get<std::string>());
      if (m.contains("pooling")) c.model.pooling = parse_pool_mode(m.at("pooling").get<std::string>());
      read(m, "seed", c.model_seed);
    }
    if (j.contains("train")) {
      const auto& t = j.at("train");
      check_keys(t, "train", {"lr", "gamma", "accumulation", "epochs", "max_steps", "augmentation", "scale_range",
                              "rotation_range", "seed", "init_output_bias"});
      read(t, "lr", c.train.lr);
      read(t, "gamma", c.train.gamma);
      read(t, "accumulation", c.train.accumulation);
      read(t, "epochs", c.train.max_epochs);
      read(t, "max_steps", c.train.max_steps);
      read(t, "augmentation", c.train.augmentation);
      read(t, "seed", c.train.seed);
      read(t, "init_output_bias", c.train.init_output_bias);
      if (t.contains("scale_range")) {
        const auto r = t.at("scale_range").get<std::vector<double>>();
        if (r.size() != 2) throw ValidationError("config: train.scale_range must be [min, max]");
        c.train.augment.scale_min = r[0];
        c.train.augment.scale_max = r[1];
      }
      if (t.contains("rotation_range")) {
        const auto r = t.at("rotation_range").get<std::vector<double>>();
        if (r.size() != 2) throw ValidationError("config: train.rotation_range must be [min, max]");
        c.train.augment.rotation_min_deg = r[0];
        c.train.augment.rotation_max_deg = r[1];
      }
    }
    if (j.contains("ablation")) {
      const auto& a = j.at("ablation");
      check_keys(a, "ablation", {"depths", "variants"});
      read(a, "depths", c.ablation_depths);
      if (a.contains("variants")) {
        c.ablation_variants.clear();
        for (const auto& v : a.at("variants").get<std::vector<std::string>>())
          c.ablation_variants.push_back(parse_residual_variant(v));
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  c.train.voxel_size = c.voxel_size;
  c.train.label_min = c.label_scale.min;
  c.train.label_max = c.label_scale.max;
  c.validate();
  return c;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<int> parse_id_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      const auto dash = item.find('-');
      std::size_t used = 0;
      if (dash == std::string::npos) {
        out.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } else {
        const int lo = std::stoi(item.substr(0, dash));
        const int hi = std::stoi(item.substr(dash + 1));
        if (lo > hi) throw std::invalid_argument(item);
        for (int v = lo; v <= hi; ++v) out.push_back(v);
      }
    } catch (const std::logic_error&) {
      throw ValidationError("bad id list entry '" + item + "'");
    }
  }
  if (out.empty()) throw ValidationError("empty id list");
  return out;
}

std::vector<std::string> parse_name_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  if (out.empty()) throw ValidationError("empty name list");
  return out;
}

}  // namespace pcqa
