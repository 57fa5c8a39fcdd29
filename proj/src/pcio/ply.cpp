// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "pcqa/pcio/ply.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace pcqa {
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary PLY I/O assumes a little-endian host");

enum class ScalarType { int8, uint8, int16, uint16, int32, uint32, float32, float64 };

std::optional<ScalarType> parse_scalar_type(std::string_view s) {
  if (s == "char" || s == "int8") return ScalarType::int8;
  if (s == "uchar" || s == "uint8") return ScalarType::uint8;
  if (s == "short" || s == "int16") return ScalarType::int16;
  if (s == "ushort" || s == "uint16") return ScalarType::uint16;
  if (s == "int" || s == "int32") return ScalarType::int32;
  if (s == "uint" || s == "uint32") return ScalarType::uint32;
  if (s == "float" || s == "float32") return ScalarType::float32;
  if (s == "double" || s == "float64") return ScalarType::float64;
  return std::nullopt;
}

std::size_t type_size(ScalarType t) {
  switch (t) {
    case ScalarType::int8:
    case ScalarType::uint8: return 1;
    case ScalarType::int16:
    case ScalarType::uint16: return 2;
    case ScalarType::int32:
    case ScalarType::uint32:
    case ScalarType::float32: return 4;
    case ScalarType::float64: return 8;
  }
  return 0;
}

bool is_integer(ScalarType t) { return t != ScalarType::float32 && t != ScalarType::float64; }

struct Property {
  std::string name;
  ScalarType type = ScalarType::float32;
  bool is_list = false;
  ScalarType count_type = ScalarType::uint8;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
};

struct Header {
  PlyFormat format = PlyFormat::ascii;
  std::vector<Element> elements;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> words;
  std::istringstream in{std::string(line)};
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

Header parse_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "ply") throw PlyError("malformed header: missing 'ply' magic");
  Header header;
  bool have_format = false;
  while (true) {
    if (!std::getline(in, line)) throw PlyError("malformed header: missing end_header");
    const auto words = split_words(trim(line));
    if (words.empty()) continue;
    const std::string& key = words[0];
    if (key == "end_header") break;
    if (key == "comment" || key == "obj_info") continue;
    if (key == "format") {
      if (words.size() != 3) throw PlyError("malformed header: bad format line");
      if (words[1] == "ascii") {
        header.format = PlyFormat::ascii;
      } else if (words[1] == "binary_little_endian") {
        header.format = PlyFormat::binary_le;
      } else {
        throw PlyError("malformed header: unsupported format '" + words[1] + "'");
      }
      have_format = true;
    } else if (key == "element") {
      if (words.size() != 3) throw PlyError("malformed header: bad element line");
      Element e;
      e.name = words[1];
      std::size_t consumed = 0;
      try {
        e.count = std::stoull(words[2], &consumed);
      } catch (const std::exception&) {
        consumed = 0;
      }
      if (consumed != words[2].size()) throw PlyError("malformed header: bad element count");
      header.elements.push_back(std::move(e));
    } else if (key == "property") {
      if (header.elements.empty()) throw PlyError("malformed header: property before element");
      Property p;
      if (words.size() == 5 && words[1] == "list") {
        auto ct = parse_scalar_type(words[2]);
        auto it = parse_scalar_type(words[3]);
        if (!ct || !it || !is_integer(*ct)) throw PlyError("malformed header: bad list property");
        p.is_list = true;
        p.count_type = *ct;
        p.type = *it;
        p.name = words[4];
      } else if (words.size() == 3) {
        auto t = parse_scalar_type(words[1]);
        if (!t) throw PlyError("malformed header: unknown property type '" + words[1] + "'");
        p.type = *t;
        p.name = words[2];
      } else {
        throw PlyError("malformed header: bad property line");
      }
      header.elements.back().properties.push_back(std::move(p));
    } else {
      throw PlyError("malformed header: unexpected line '" + std::string(trim(line)) + "'");
    }
  }
  if (!have_format) throw PlyError("malformed header: missing format line");
  return header;
}

double read_binary_scalar(const char* p, ScalarType t) {
  switch (t) {
    case ScalarType::int8: { std::int8_t v; std::memcpy(&v, p, 1); return v; }
    case ScalarType::uint8: { std::uint8_t v; std::memcpy(&v, p, 1); return v; }
    case ScalarType::int16: { std::int16_t v; std::memcpy(&v, p, 2); return v; }
    case ScalarType::uint16: { std::uint16_t v; std::memcpy(&v, p, 2); return v; }
    case ScalarType::int32: { std::int32_t v; std::memcpy(&v, p, 4); return v; }
    case ScalarType::uint32: { std::uint32_t v; std::memcpy(&v, p, 4); return v; }
    case ScalarType::float32: { float v; std::memcpy(&v, p, 4); return v; }
    case ScalarType::float64: { double v; std::memcpy(&v, p, 8); return v; }
  }
  return 0.0;
}

// Column indices of the vertex properties we care about.
struct VertexLayout {
  std::array<int, 3> xyz{-1, -1, -1};
  std::array<int, 3> rgb{-1, -1, -1};
  std::array<int, 3> normal{-1, -1, -1};
};

VertexLayout vertex_layout(const Element& vertex) {
  VertexLayout layout;
  static constexpr std::array<std::string_view, 3> kXyz{"x", "y", "z"};
  static constexpr std::array<std::string_view, 3> kRgb{"red", "green", "blue"};
  static constexpr std::array<std::string_view, 3> kNormal{"nx", "ny", "nz"};
  for (std::size_t i = 0; i < vertex.properties.size(); ++i) {
    const Property& p = vertex.properties[i];
    for (int a = 0; a < 3; ++a) {
      if (p.name == kXyz[a]) {
        if (p.is_list) throw PlyError("property type mismatch: '" + p.name + "' must be scalar");
        layout.xyz[a] = static_cast<int>(i);
      } else if (p.name == kRgb[a]) {
        if (p.is_list || !is_integer(p.type))
          throw PlyError("property type mismatch: '" + p.name + "' must be an integer scalar");
        layout.rgb[a] = static_cast<int>(i);
      } else if (p.name == kNormal[a]) {
        if (p.is_list) throw PlyError("property type mismatch: '" + p.name + "' must be scalar");
        layout.normal[a] = static_cast<int>(i);
      }
    }
  }
  for (int a = 0; a < 3; ++a) {
    if (layout.xyz[a] < 0) throw PlyError("missing attribute: vertex property '" + std::string(kXyz[a]) + "'");
    if (layout.rgb[a] < 0) throw PlyError("missing attribute: vertex property '" + std::string(kRgb[a]) + "'");
  }
  return layout;
}

bool has_normals(const VertexLayout& layout) {
  return layout.normal[0] >= 0 && layout.normal[1] >= 0 && layout.normal[2] >= 0;
}

void store_row(PointCloud& cloud, const VertexLayout& layout, const std::vector<double>& row) {
  Vec3 p(row[layout.xyz[0]], row[layout.xyz[1]], row[layout.xyz[2]]);
  Color c{};
  for (int a = 0; a < 3; ++a) {
    const double v = row[layout.rgb[a]];
    if (v < 0.0 || v > 255.0) throw PlyError("color value out of [0,255]");
    c[a] = static_cast<int>(v);
  }
  cloud.push_back(p, c);
  if (cloud.normals) {
    Vec3 n(row[layout.normal[0]], row[layout.normal[1]], row[layout.normal[2]]);
    const double len = n.norm();
    if (!(len > 0.0)) throw PlyError("zero-length normal in vertex data");
    cloud.normals->push_back(std::abs(len - 1.0) > 1e-9 ? Vec3(n / len) : n);
  }
}

PointCloud read_ascii(std::istream& in, const Header& header) {
  PointCloud cloud;
  std::string line;
  for (const Element& e : header.elements) {
    const bool is_vertex = e.name == "vertex";
    VertexLayout layout;
    if (is_vertex) {
      layout = vertex_layout(e);
      cloud.reserve(e.count);
      if (has_normals(layout)) cloud.normals.emplace();
    }
    std::vector<double> row(e.properties.size());
    for (std::size_t r = 0; r < e.count; ++r) {
      do {
        if (!std::getline(in, line)) throw PlyError("truncated body in element '" + e.name + "'");
      } while (trim(line).empty());
      if (!is_vertex) continue;
      std::istringstream ls(line);
      for (std::size_t i = 0; i < e.properties.size(); ++i) {
        const Property& p = e.properties[i];
        if (p.is_list) {
          std::size_t n = 0;
          if (!(ls >> n)) throw PlyError("truncated body: bad list count");
          double skip;
          for (std::size_t j = 0; j < n; ++j) {
            if (!(ls >> skip)) throw PlyError("truncated body: short list");
          }
          row[i] = 0.0;
        } else if (!(ls >> row[i])) {
          throw PlyError("truncated body: vertex row " + std::to_string(r) + " has too few values");
        }
      }
      store_row(cloud, layout, row);
    }
    if (is_vertex) break;
  }
  return cloud;
}

PointCloud read_binary(std::istream& in, const Header& header) {
  const std::vector<char> body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t offset = 0;
  auto need = [&](std::size_t n, const std::string& what) {
    if (offset + n > body.size()) throw PlyError("truncated body in " + what);
  };
  PointCloud cloud;
  for (const Element& e : header.elements) {
    const bool is_vertex = e.name == "vertex";
    VertexLayout layout;
    if (is_vertex) {
      layout = vertex_layout(e);
      cloud.reserve(e.count);
      if (has_normals(layout)) cloud.normals.emplace();
    }
    std::vector<double> row(e.properties.size());
    for (std::size_t r = 0; r < e.count; ++r) {
      for (std::size_t i = 0; i < e.properties.size(); ++i) {
        const Property& p = e.properties[i];
        if (p.is_list) {
          need(type_size(p.count_type), "element '" + e.name + "'");
          const auto n = static_cast<std::size_t>(read_binary_scalar(body.data() + offset, p.count_type));
          offset += type_size(p.count_type);
          need(n * type_size(p.type), "element '" + e.name + "'");
          offset += n * type_size(p.type);
          row[i] = 0.0;
        } else {
          need(type_size(p.type), "element '" + e.name + "'");
          row[i] = read_binary_scalar(body.data() + offset, p.type);
          offset += type_size(p.type);
        }
      }
      if (is_vertex) store_row(cloud, layout, row);
    }
    if (is_vertex) break;
  }
  return cloud;
}

bool fits_float(double v) { return static_cast<double>(static_cast<float>(v)) == v; }

void append_number(std::string& out, double v, bool as_float) {
  char buf[64];
  auto res = as_float ? std::to_chars(buf, buf + sizeof buf, static_cast<float>(v))
                      : std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

template <typename T>
void append_binary(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

}  // namespace

PointCloud load_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PlyError("cannot open PLY file: " + path.string());
  const Header header = parse_header(in);
  const Element* vertex = nullptr;
  for (const Element& e : header.elements) {
    if (e.name == "vertex") {
      vertex = &e;
      break;
    }
  }
  if (vertex == nullptr) throw PlyError("malformed header: no vertex element");
  vertex_layout(*vertex);  // reports missing attributes before touching the body
  if (vertex->count == 0) throw PlyError("PLY file declares zero vertices: " + path.string());
  PointCloud cloud = header.format == PlyFormat::ascii ? read_ascii(in, header) : read_binary(in, header);
  if (cloud.size() != vertex->count) throw PlyError("truncated body: vertex count mismatch");
  return cloud;
}

void save_ply(const PointCloud& cloud, const std::filesystem::path& path, PlyFormat format,
              PlyPrecision precision) {
  cloud.validate();
  bool as_float = precision == PlyPrecision::float32;
  if (precision == PlyPrecision::automatic) {
    as_float = true;
    for (const Vec3& p : cloud.positions) {
      if (!fits_float(p.x()) || !fits_float(p.y()) || !fits_float(p.z())) {
        as_float = false;
        break;
      }
    }
    if (as_float && cloud.normals) {
      for (const Vec3& n : *cloud.normals) {
        if (!fits_float(n.x()) || !fits_float(n.y()) || !fits_float(n.z())) {
          as_float = false;
          break;
        }
      }
    }
  }
  const char* real = as_float ? "float" : "double";

  std::string out;
  out += "ply\n";
  out += format == PlyFormat::ascii ? "format ascii 1.0\n" : "format binary_little_endian 1.0\n";
  out += "element vertex " + std::to_string(cloud.size()) + "\n";
  for (const char* axis : {"x", "y", "z"}) out += std::string("property ") + real + " " + axis + "\n";
  for (const char* ch : {"red", "green", "blue"}) out += std::string("property uchar ") + ch + "\n";
  if (cloud.normals) {
    for (const char* axis : {"nx", "ny", "nz"}) out += std::string("property ") + real + " " + axis + "\n";
  }
  out += "end_header\n";

  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.positions[i];
    const Color& c = cloud.colors[i];
    if (format == PlyFormat::ascii) {
      for (int a = 0; a < 3; ++a) {
        append_number(out, p[a], as_float);
        out += ' ';
      }
      out += std::to_string(c[0]) + ' ' + std::to_string(c[1]) + ' ' + std::to_string(c[2]);
      if (cloud.normals) {
        for (int a = 0; a < 3; ++a) {
          out += ' ';
          append_number(out, (*cloud.normals)[i][a], as_float);
        }
      }
      out += '\n';
    } else {
      for (int a = 0; a < 3; ++a) {
        if (as_float) append_binary(out, static_cast<float>(p[a]));
        else append_binary(out, p[a]);
      }
      for (int a = 0; a < 3; ++a) append_binary(out, static_cast<std::uint8_t>(c[a]));
      if (cloud.normals) {
        for (int a = 0; a < 3; ++a) {
          if (as_float) append_binary(out, static_cast<float>((*cloud.normals)[i][a]));
          else append_binary(out, (*cloud.normals)[i][a]);
        }
      }
    }
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw RuntimeError("cannot write PLY file: " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw RuntimeError("failed writing PLY file: " + path.string());
}

}  // namespace pcqa
