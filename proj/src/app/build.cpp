// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "pcqa/app/commands.hpp"
#include "pcqa/app/parallel.hpp"
#include "pcqa/pcio/ply.hpp"

namespace pcqa {
namespace {

std::string sample_name(const std::string& ref, int id, int level) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_d%02d_l%d", id, level);
  return ref + buf;
}

Provenance registry_provenance(const DistortionSpec& spec) {
  const auto& d = describe_distortion(spec.distortion_id);
  Provenance p{(d.is_native() ? "native:" : "external:") + std::string(d.name), {}};
  for (std::size_t k = 0; k < d.parameters.size(); ++k)
    p.params[std::string(d.parameters[k].name)] = format_parameter(d.param(spec.level, k));
  return p;
}

}  // namespace

BuildSummary cmd_build(const BuildOptions& options) {
  const AppConfig& config = options.config;
  if (!fs::is_directory(options.refs_dir))
    throw ValidationError("reference directory not found: " + options.refs_dir.string());
  std::vector<fs::path> ref_files;
  for (const auto& entry : fs::directory_iterator(options.refs_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ply") ref_files.push_back(entry.path());
  }
  std::sort(ref_files.begin(), ref_files.end());
  if (ref_files.empty()) throw ValidationError("no reference .ply files in " + options.refs_dir.string());

  const auto ids = config.distortion_ids();
  for (int id : ids) {
    if (!describe_distortion(id).is_native() && !(options.adapters && options.adapters->has(id)) && options.log)
      *options.log << "warning: distortion " << id << " has no adapter; its rows will fail\n";
  }

  Manifest manifest;
  manifest.header.dataset_seed = config.seed;
  manifest.header.psnr_cap = config.psnr_cap;
  manifest.header.label_scale = config.label_scale;
  std::vector<std::string> ref_ids;
  std::vector<PointCloud> refs;
  for (const auto& f : ref_files) {
    const std::string id = f.stem().string();
    manifest.header.references[id] = fs::absolute(f).lexically_normal();
    ref_ids.push_back(id);
    refs.push_back(load_ply(f));
  }

  struct Job {
    std::size_t ref;
    DistortionSpec spec;
    std::string sample_id;
  };
  std::vector<Job> jobs;
  for (std::size_t r = 0; r < refs.size(); ++r) {
    for (int id : ids) {
      const std::uint64_t seed = derive_seed({config.seed, hash_string(ref_ids[r]), static_cast<std::uint64_t>(id)});
      for (int level = 1; level <= kLevelCount; ++level)
        jobs.push_back({r, DistortionSpec{id, level, seed}, sample_name(ref_ids[r], id, level)});
    }
  }

  const fs::path sample_dir = options.out_dir / "samples";
  fs::create_directories(sample_dir);
  const AdapterConfig* adapters = options.adapters ? &*options.adapters : nullptr;
  const auto results = parallel_map<Provenance>(jobs.size(), options.jobs, [&](std::size_t i) {
    const Job& job = jobs[i];
    Provenance prov;
    const PointCloud out = apply_distortion(refs[job.ref], job.spec, adapters, &prov);
    save_ply(out, sample_dir / (job.sample_id + ".ply"), PlyFormat::binary_le);
    return prov;
  });

  BuildSummary summary;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Job& job = jobs[i];
    ManifestRecord r;
    r.sample_id = job.sample_id;
    r.reference_id = ref_ids[job.ref];
    r.distortion_id = job.spec.distortion_id;
    r.level = job.spec.level;
    r.seed = job.spec.seed;
    if (results[i].value) {
      r.path = fs::absolute(sample_dir / (job.sample_id + ".ply")).lexically_normal();
      r.provenance = *results[i].value;
    } else {
      try {
        std::rethrow_exception(results[i].error);
      } catch (const std::exception& e) {
        r.error = e.what();
      }
      r.provenance = registry_provenance(job.spec);
      summary.failures.push_back(r.sample_id + ": " + *r.error);
    }
    manifest.records.push_back(std::move(r));
  }
  summary.manifest = options.out_dir / "manifest.jsonl";
  summary.rows = manifest.records.size();
  manifest.save(summary.manifest);
  if (options.log) {
    *options.log << "build: " << summary.rows << " rows, " << summary.failures.size() << " failed\n";
    for (const auto& f : summary.failures) *options.log << "  failed " << f << '\n';
  }
  return summary;
}

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot write " + path.string());
  out << text;
  if (!out) throw RuntimeError("failed writing " + path.string());
}

}  // namespace pcqa
