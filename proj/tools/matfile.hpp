#pragma once

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace matfile {

// Parse, shape, and IO problems with matrix files; the CLI maps these to its
// input-error exit code.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// In-memory form of the on-disk matrix format:
//   {"n": 2, "field": "real", "data": [[1.0, 0.5], [0.0, 2.0]]}
//   {"n": 1, "field": "complex", "data": [[[0.0, 1.0]]]}
// Entries are row-major; complex matrices interleave re,im (2*n*n doubles).
struct MatrixData {
  int n = 0;
  bool real = true;
  std::vector<double> entries;
};

inline MatrixData parse(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid matrix file: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("matrix file must be a JSON object");
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    if (key != "n" && key != "field" && key != "data")
      throw ParseError("unknown key \"" + key + "\" in matrix file");
  }
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw ParseError("\"n\" must be an integer");
  const long long n_ll = j["n"].get<long long>();
  if (n_ll < 1 || n_ll > 4096)
    throw ParseError("\"n\" must be between 1 and 4096, got " + std::to_string(n_ll));
  const int n = static_cast<int>(n_ll);
  if (!j.contains("field") || !j["field"].is_string())
    throw ParseError("\"field\" must be \"real\" or \"complex\"");
  const std::string field = j["field"].get<std::string>();
  if (field != "real" && field != "complex")
    throw ParseError("\"field\" must be \"real\" or \"complex\", got \"" + field + "\"");
  if (!j.contains("data") || !j["data"].is_array())
    throw ParseError("\"data\" must be an array of rows");
  const nlohmann::json& data = j["data"];
  if (static_cast<int>(data.size()) != n)
    throw ParseError("\"data\" has " + std::to_string(data.size()) + " rows, expected " +
                     std::to_string(n));

  MatrixData out;
  out.n = n;
  out.real = field == "real";
  out.entries.reserve(static_cast<size_t>(out.real ? n * n : 2 * n * n));
  for (int i = 0; i < n; ++i) {
    const nlohmann::json& row = data[i];
    const std::string at = "data row " + std::to_string(i);
    if (!row.is_array())
      throw ParseError(at + " is not an array");
    if (static_cast<int>(row.size()) != n)
      throw ParseError(at + " has " + std::to_string(row.size()) + " entries, expected " +
                       std::to_string(n));
    for (int k = 0; k < n; ++k) {
      const nlohmann::json& e = row[k];
      const std::string where = at + ", entry " + std::to_string(k);
      if (out.real) {
        if (!e.is_number()) throw ParseError(where + " must be a number");
        out.entries.push_back(e.get<double>());
      } else {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
          throw ParseError(where + " must be a two-element [re, im] array");
        out.entries.push_back(e[0].get<double>());
        out.entries.push_back(e[1].get<double>());
      }
    }
  }
  for (double v : out.entries)
    if (!std::isfinite(v)) throw ParseError("matrix entries must be finite");
  return out;
}

struct LoadedMatrix {
  MatrixData m;
  std::string text;  // raw bytes, for digests
};

inline LoadedMatrix load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  LoadedMatrix out;
  out.text = buf.str();
  out.m = parse(out.text);
  return out;
}

inline nlohmann::json to_json(const MatrixData& m) {
  nlohmann::json data = nlohmann::json::array();
  for (int i = 0; i < m.n; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int k = 0; k < m.n; ++k) {
      if (m.real) {
        row.push_back(m.entries[static_cast<size_t>(i) * m.n + k]);
      } else {
        const size_t at = 2 * (static_cast<size_t>(i) * m.n + k);
        row.push_back(nlohmann::json::array({m.entries[at], m.entries[at + 1]}));
      }
    }
    data.push_back(std::move(row));
  }
  return {{"n", m.n}, {"field", m.real ? "real" : "complex"}, {"data", std::move(data)}};
}

// Canonical text form; parse(emit(m)) reproduces m bit-exactly because the
// serializer prints shortest round-trip decimals.
inline std::string emit(const MatrixData& m) { return to_json(m).dump(2) + "\n"; }

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string digest(const std::string& bytes) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, fnv1a64(bytes));
  return buf;
}

}  // namespace matfile
