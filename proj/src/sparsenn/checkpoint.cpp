// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/sparsenn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace pcqa {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

constexpr char kMagic[8] = {'R', 'S', 'C', 'N', 'N', 'C', 'K', '1'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw ValidationError("checkpoint is truncated");
  return v;
}

void put_blob(std::ostream& out, const double* data, Eigen::Index n) {
  put<std::uint64_t>(out, static_cast<std::uint64_t>(n));
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n * sizeof(double)));
}

void get_blob(std::istream& in, double* data, Eigen::Index n) {
  const auto stored = get<std::uint64_t>(in);
  if (stored != static_cast<std::uint64_t>(n)) throw ValidationError("checkpoint blob size does not match the model");
  if (!in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(n * sizeof(double))))
    throw ValidationError("checkpoint is truncated");
}

template <typename M>
void put_matrix(std::ostream& out, const M& m) {
  put_blob(out, m.data(), m.size());
}

template <typename M>
void get_matrix(std::istream& in, M& m) {
  get_blob(in, m.data(), m.size());
}

}  // namespace

void save_checkpoint(const ResSCNN& model, std::ostream& out) {
  out.write(kMagic, sizeof kMagic);
  put(out, kVersion);
  const auto& c = model.config();
  for (int v : {c.depth, c.width, c.hidden, c.in_channels, c.kernel_size, static_cast<int>(c.variant),
                static_cast<int>(c.pooling)})
    put<std::int32_t>(out, v);
  const auto& p = model.params();
  for (std::size_t l = 0; l < p.conv.size(); ++l) {
    put_matrix(out, p.conv[l].weight);
    put_matrix(out, p.conv[l].gamma);
    put_matrix(out, p.conv[l].beta);
    put_matrix(out, model.running_stats()[l].mean);
    put_matrix(out, model.running_stats()[l].var);
  }
  put_matrix(out, p.fc1_w);
  put_matrix(out, p.fc1_b);
  put_matrix(out, p.fc2_w);
  put_matrix(out, p.fc2_b);
  if (!out) throw RuntimeError("failed to write checkpoint");
}

void save_checkpoint(const ResSCNN& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeError("cannot write checkpoint: " + path.string());
  save_checkpoint(model, out);
}

ResSCNN load_checkpoint(std::istream& in) {
  char magic[8];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw ValidationError("not a checkpoint file (bad magic)");
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion) throw ValidationError("unsupported checkpoint version " + std::to_string(version));
  ModelConfig c;
  c.depth = get<std::int32_t>(in);
  c.width = get<std::int32_t>(in);
  c.hidden = get<std::int32_t>(in);
  c.in_channels = get<std::int32_t>(in);
  c.kernel_size = get<std::int32_t>(in);
  const auto variant = get<std::int32_t>(in);
  const auto pooling = get<std::int32_t>(in);
  if (variant < 0 || variant > 3 || pooling < 0 || pooling > 1) throw ValidationError("corrupt checkpoint config");
  c.variant = static_cast<ResidualVariant>(variant);
  c.pooling = static_cast<PoolMode>(pooling);
  if (c.depth > 64 || c.width > 4096 || c.hidden > 4096 || c.in_channels > 4096 || c.kernel_size > 7)
    throw ValidationError("corrupt checkpoint config");
  c.validate();
  ResSCNN model(c);
  auto& p = model.params();
  for (std::size_t l = 0; l < p.conv.size(); ++l) {
    get_matrix(in, p.conv[l].weight);
    get_matrix(in, p.conv[l].gamma);
    get_matrix(in, p.conv[l].beta);
    get_matrix(in, model.running_stats()[l].mean);
    get_matrix(in, model.running_stats()[l].var);
  }
  get_matrix(in, p.fc1_w);
  get_matrix(in, p.fc1_b);
  get_matrix(in, p.fc2_w);
  get_matrix(in, p.fc2_b);
  return model;
}

ResSCNN load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read checkpoint: " + path.string());
  return load_checkpoint(in);
}

ResSCNN load_checkpoint(const std::filesystem::path& path, const ModelConfig& expected) {
  ResSCNN model = load_checkpoint(path);
  if (!(model.config() == expected)) throw ValidationError("checkpoint architecture does not match the configuration");
  return model;
}

}  // namespace pcqa
