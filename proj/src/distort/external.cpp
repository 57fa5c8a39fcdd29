// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/distort/external.hpp"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>

#include "json.hpp"
#include "pcqa/distort/distort.hpp"
#include "pcqa/pcio/ply.hpp"

extern char** environ;

namespace pcqa {
namespace {

std::mutex& adapter_mutex(int id) {
  static std::array<std::mutex, kDistortionCount + 1> mutexes;
  return mutexes[static_cast<std::size_t>(id)];
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
  return s;
}

// Removes the listed files when it goes out of scope.
struct TempFiles {
  std::vector<std::filesystem::path> paths;
  ~TempFiles() {
    std::error_code ec;
    for (const auto& p : paths) std::filesystem::remove(p, ec);
  }
};

int run_process(const std::string& command, const std::vector<std::string>& args) {
  std::vector<char*> argv;
  argv.push_back(const_cast<char*>(command.c_str()));
  for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, "/dev/null", O_WRONLY, 0);
  pid_t pid = 0;
  const int rc = posix_spawnp(&pid, command.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0)
    throw AdapterError(AdapterError::Kind::tool_missing,
                       "external tool '" + command + "' could not be started: " + std::strerror(rc));
  int status = 0;
  while (waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw RuntimeError("waitpid failed for '" + command + "'");
  }
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
}

}  // namespace

AdapterConfig AdapterConfig::from_json_text(const std::string& text) {
  AdapterConfig config;
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("adapter config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("adapter config must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    int id = 0;
    try {
      std::size_t used = 0;
      id = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ValidationError("adapter config key '" + key + "' is not a distortion id");
    }
    DistortionSpec{id, 1, 0}.validate();
    if (describe_distortion(id).is_native())
      throw ValidationError("adapter config key " + key + " names a native distortion");
    if (!value.is_object() || !value.contains("command") || !value["command"].is_string())
      throw ValidationError("adapter " + key + ": missing string field 'command'");
    AdapterEntry entry;
    entry.command = value["command"].get<std::string>();
    if (value.contains("args")) {
      if (!value["args"].is_array()) throw ValidationError("adapter " + key + ": 'args' must be an array");
      for (const auto& a : value["args"]) {
        if (!a.is_string()) throw ValidationError("adapter " + key + ": every arg must be a string");
        entry.args.push_back(a.get<std::string>());
      }
    }
    if (value.contains("serialize")) entry.serialize = value["serialize"].get<bool>();
    config.entries[id] = std::move(entry);
  }
  return config;
}

AdapterConfig AdapterConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read adapter config: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::vector<std::string> expand_adapter_args(const AdapterEntry& entry, const DistortionSpec& spec,
                                             const std::string& in_path, const std::string& out_path) {
  const auto& d = describe_distortion(spec.distortion_id);
  std::vector<std::string> out;
  for (std::string arg : entry.args) {
    arg = replace_all(arg, "{in}", in_path);
    arg = replace_all(arg, "{out}", out_path);
    for (std::size_t k = 0; k < d.parameters.size(); ++k)
      arg = replace_all(arg, "{p" + std::to_string(k + 1) + "}", format_parameter(d.param(spec.level, k)));
    if (const auto open = arg.find("{p"); open != std::string::npos && arg.find('}', open) != std::string::npos)
      throw ValidationError("adapter argument '" + arg + "' uses a parameter placeholder beyond {p" +
                            std::to_string(d.parameters.size()) + "}");
    out.push_back(std::move(arg));
  }
  return out;
}

PointCloud external_codec(const PointCloud& cloud, const DistortionSpec& spec, const AdapterConfig& config,
                          Provenance* provenance) {
  spec.validate();
  const auto it = config.entries.find(spec.distortion_id);
  if (it == config.entries.end())
    throw AdapterError(AdapterError::Kind::not_configured,
                       "adapter not configured for distortion id " + std::to_string(spec.distortion_id));
  const AdapterEntry& entry = it->second;

  static std::atomic<std::uint64_t> sequence{0};
  const std::string stem = "pcqa_ext_" + std::to_string(::getpid()) + "_" + std::to_string(sequence++) + "_d" +
                           std::to_string(spec.distortion_id) + "_l" + std::to_string(spec.level);
  const auto dir = std::filesystem::temp_directory_path();
  TempFiles temps{{dir / (stem + "_in.ply"), dir / (stem + "_out.ply")}};
  const std::string in_path = temps.paths[0].string();
  const std::string out_path = temps.paths[1].string();

  save_ply(cloud, in_path, PlyFormat::binary_le);
  const auto args = expand_adapter_args(entry, spec, in_path, out_path);

  int code = 0;
  if (entry.serialize) {
    std::lock_guard lock(adapter_mutex(spec.distortion_id));
    code = run_process(entry.command, args);
  } else {
    code = run_process(entry.command, args);
  }
  if (code != 0)
    throw AdapterError(AdapterError::Kind::nonzero_exit,
                       "external tool '" + entry.command + "' exited with status " + std::to_string(code));

  PointCloud result;
  try {
    result = load_ply(out_path);
    result.validate();
  } catch (const Error& e) {
    throw AdapterError(AdapterError::Kind::unreadable_output,
                       "output of external tool '" + entry.command + "' is unreadable: " + e.what());
  }

  if (provenance != nullptr) {
    const auto& d = describe_distortion(spec.distortion_id);
    provenance->tool = entry.command;
    provenance->params.clear();
    for (std::size_t k = 0; k < d.parameters.size(); ++k)
      provenance->params[std::string(d.parameters[k].name)] = format_parameter(d.param(spec.level, k));
  }
  return result;
}

}  // namespace pcqa
