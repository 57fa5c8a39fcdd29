// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/app/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "json.hpp"

namespace pcqa {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::filesystem::path absolute_dir(const std::filesystem::path& file) {
  return std::filesystem::absolute(file).parent_path().lexically_normal();
}

std::string relative_to(const std::filesystem::path& p, const std::filesystem::path& dir) {
  return std::filesystem::absolute(p).lexically_normal().lexically_relative(dir).generic_string();
}

void check_label(const std::optional<double>& v, const LabelScale& s, const std::string& what,
                 const std::string& id) {
  if (v && !(*v >= s.min && *v <= s.max))
    throw ValidationError("sample " + id + ": " + what + " outside the declared label scale");
}

}  // namespace

void Manifest::validate(bool check_files) const {
  header.label_scale.validate();
  std::set<std::string> ids;
  for (const auto& r : records) {
    if (r.sample_id.empty()) throw ValidationError("manifest record with an empty sample_id");
    if (!ids.insert(r.sample_id).second) throw ValidationError("duplicate sample_id '" + r.sample_id + "'");
    if (!header.references.contains(r.reference_id))
      throw ValidationError("sample " + r.sample_id + ": unknown reference '" + r.reference_id + "'");
    DistortionSpec{r.distortion_id, r.level, r.seed}.validate();
    check_label(r.pseudo_mos, header.label_scale, "pseudo_mos", r.sample_id);
    check_label(r.mos, header.label_scale, "mos", r.sample_id);
    if (check_files && r.ok() && !std::filesystem::exists(r.path))
      throw ValidationError("sample " + r.sample_id + ": missing file " + r.path.string());
  }
  if (check_files) {
    for (const auto& [id, path] : header.references) {
      if (!std::filesystem::exists(path)) throw ValidationError("reference " + id + ": missing file " + path.string());
    }
  }
}

const ManifestRecord& Manifest::find(const std::string& sample_id) const {
  for (const auto& r : records) {
    if (r.sample_id == sample_id) return r;
  }
  throw ValidationError("unknown sample '" + sample_id + "'");
}

std::vector<std::string> Manifest::reference_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, path] : header.references) out.push_back(id);
  return out;
}

Manifest Manifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read manifest: " + path.string());
  const auto dir = absolute_dir(path);
  Manifest m;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const json j = json::parse(line);
      if (!have_header) {
        if (j.value("type", "") != "header") throw ValidationError("manifest: first line must be the header");
        m.header.dataset_seed = j.at("dataset_seed").get<std::uint64_t>();
        m.header.psnr_cap = j.at("psnr_cap").get<double>();
        const auto scale = j.at("label_scale").get<std::vector<double>>();
        if (scale.size() != 2) throw ValidationError("manifest: label_scale must have two entries");
        m.header.label_scale = {scale[0], scale[1]};
        for (const auto& [id, p] : j.at("references").items())
          m.header.references[id] = (dir / p.get<std::string>()).lexically_normal();
        have_header = true;
        continue;
      }
      ManifestRecord r;
      r.sample_id = j.at("sample_id").get<std::string>();
      r.reference_id = j.at("reference_id").get<std::string>();
      r.distortion_id = j.at("distortion_id").get<int>();
      r.level = j.at("level").get<int>();
      r.seed = j.at("seed").get<std::uint64_t>();
      if (j.contains("path")) r.path = (dir / j.at("path").get<std::string>()).lexically_normal();
      if (j.contains("error")) r.error = j.at("error").get<std::string>();
      if (j.contains("provenance")) {
        const auto& p = j.at("provenance");
        r.provenance.tool = p.at("tool").get<std::string>();
        r.provenance.params = p.at("params").get<std::map<std::string, std::string>>();
      }
      if (j.contains("pseudo_mos")) r.pseudo_mos = j.at("pseudo_mos").get<double>();
      if (j.contains("mos")) r.mos = j.at("mos").get<double>();
      if (j.contains("source_metric")) r.source_metric = j.at("source_metric").get<std::string>();
      if (r.ok() && r.path.empty()) throw ValidationError("sample " + r.sample_id + " has neither path nor error");
      m.records.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ValidationError("manifest line " + std::to_string(line_no) + ": " + e.what());
  }
  if (!have_header) throw ValidationError("manifest is empty: " + path.string());
  m.validate(false);
  return m;
}

void Manifest::save(const std::filesystem::path& path) const {
  const auto dir = absolute_dir(path);
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot write manifest: " + path.string());
  ordered_json h;
  h["type"] = "header";
  h["dataset_seed"] = header.dataset_seed;
  h["psnr_cap"] = header.psnr_cap;
  h["label_scale"] = {header.label_scale.min, header.label_scale.max};
  ordered_json refs = ordered_json::object();
  for (const auto& [id, p] : header.references) refs[id] = relative_to(p, dir);
  h["references"] = refs;
  out << h.dump() << '\n';
  for (const auto& r : records) {
    ordered_json j;
    j["sample_id"] = r.sample_id;
    j["reference_id"] = r.reference_id;
    j["distortion_id"] = r.distortion_id;
    j["level"] = r.level;
    j["seed"] = r.seed;
    if (r.ok()) j["path"] = relative_to(r.path, dir);
    if (r.error) j["error"] = *r.error;
    ordered_json prov;
    prov["tool"] = r.provenance.tool;
    prov["params"] = ordered_json(r.provenance.params);
    j["provenance"] = prov;
    if (r.pseudo_mos) j["pseudo_mos"] = *r.pseudo_mos;
    if (r.mos) j["mos"] = *r.mos;
    if (r.source_metric) j["source_metric"] = *r.source_metric;
    out << j.dump() << '\n';
  }
  if (!out) throw RuntimeError("failed writing manifest: " + path.string());
}

SplitRows split_by_reference(const Manifest& manifest, const SplitSpec& split) {
  const auto refs = manifest.reference_ids();
  auto known = [&](const std::string& id) { return std::find(refs.begin(), refs.end(), id) != refs.end(); };
  std::set<std::string> test(split.test_references.begin(), split.test_references.end());
  std::set<std::string> train(split.train_references.begin(), split.train_references.end());
  for (const auto& id : test) {
    if (!known(id)) throw ValidationError("split: unknown test reference '" + id + "'");
    if (train.contains(id)) throw ValidationError("split: reference '" + id + "' is in both train and test");
  }
  for (const auto& id : train) {
    if (!known(id)) throw ValidationError("split: unknown train reference '" + id + "'");
  }
  if (train.empty()) {
    for (const auto& id : refs) {
      if (!test.contains(id)) train.insert(id);
    }
  }
  SplitRows rows;
  for (std::size_t i = 0; i < manifest.records.size(); ++i) {
    const auto& r = manifest.records[i];
    if (!r.ok()) continue;
    if (test.contains(r.reference_id)) rows.test.push_back(i);
    else if (train.contains(r.reference_id)) rows.train.push_back(i);
  }
  return rows;
}

}  // namespace pcqa
