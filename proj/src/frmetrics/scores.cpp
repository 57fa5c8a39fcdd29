// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/frmetrics/scores.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace pcqa {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_value(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw ValidationError("score CSV line " + std::to_string(line_no) + ": non-numeric value '" + s + "'");
  return v;
}

std::vector<MetricScore> read_impl(std::istream& in, bool force_external) {
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("score CSV is empty");
  const auto header = split_csv_line(line);
  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) column[header[i]] = i;
  for (const char* required : {"metric_name", "reference_id", "degraded_id", "value"}) {
    if (!column.contains(required))
      throw ValidationError(std::string("score CSV: missing column '") + required + "'");
  }
  std::vector<MetricScore> out;
  std::set<std::pair<std::string, std::string>> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size())
      throw ValidationError("score CSV line " + std::to_string(line_no) + ": expected " +
                            std::to_string(header.size()) + " fields");
    MetricScore s;
    const std::string& name = fields[column["metric_name"]];
    if (name.empty()) throw ValidationError("score CSV line " + std::to_string(line_no) + ": empty metric name");
    s.metric = force_external ? MetricId::external(name) : MetricId::parse(name);
    s.reference_id = fields[column["reference_id"]];
    s.degraded_id = fields[column["degraded_id"]];
    if (s.reference_id.empty() || s.degraded_id.empty())
      throw ValidationError("score CSV line " + std::to_string(line_no) + ": empty id");
    s.value = parse_value(fields[column["value"]], line_no);
    if (!seen.emplace(name, s.degraded_id).second)
      throw ValidationError("score CSV: duplicate key (" + name + ", " + s.degraded_id + ")");
    out.push_back(std::move(s));
  }
  return out;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read score file: " + path.string());
  return in;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::vector<MetricScore> read_scores(std::istream& in) { return read_impl(in, false); }

std::vector<MetricScore> read_scores(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return read_impl(in, false);
}

std::vector<MetricScore> ingest_external_scores(std::istream& in) { return read_impl(in, true); }

std::vector<MetricScore> ingest_external_scores(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return read_impl(in, true);
}

void write_scores(std::ostream& out, const std::vector<MetricScore>& scores) {
  out << "metric_name,reference_id,degraded_id,value\n";
  for (const auto& s : scores)
    out << s.metric.name() << ',' << s.reference_id << ',' << s.degraded_id << ',' << format_double(s.value) << '\n';
}

void write_scores(const std::filesystem::path& path, const std::vector<MetricScore>& scores) {
  std::ofstream out(path);
  if (!out) throw RuntimeError("cannot write score file: " + path.string());
  write_scores(out, scores);
}

}  // namespace pcqa
