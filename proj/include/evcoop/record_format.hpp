// Copyright 2026 The evcoop Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EVCOOP_RECORD_FORMAT_HPP
#define EVCOOP_RECORD_FORMAT_HPP

// Line-oriented key/value text shared by the scenario, characteristic
// function and sweep files:
//
//   # comment
//   [section.name]
//   key=value key=value list=1,2,3
//
// Records that precede the first section header belong to section "".

#include <charconv>
#include <cmath>
#include <limits>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "evcoop/error.hpp"

namespace evcoop::text {

struct Record {
  int line = 0;
  std::vector<std::pair<std::string, std::string>> fields;

  const std::string* find(std::string_view key) const {
    for (const auto& [k, v] : fields) {
      if (k == key) return &v;
    }
    return nullptr;
  }
  bool has(std::string_view key) const { return find(key) != nullptr; }
  const std::string& at(std::string_view key) const {
    if (const auto* v = find(key)) return *v;
    throw Error(Errc::kParse, "line " + std::to_string(line) +
                                  ": missing key '" + std::string(key) + "'");
  }
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Record> records;
};

struct Document {
  std::vector<Section> sections;

  const Section* find(std::string_view name) const {
    for (const auto& s : sections) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline Document parse_document(std::string_view text) {
  Document doc;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw Error(Errc::kParse,
                    "line " + std::to_string(line_no) + ": unterminated header");
      }
      doc.sections.push_back(
          {std::string(trim(line.substr(1, line.size() - 2))), line_no, {}});
      continue;
    }
    if (doc.sections.empty()) doc.sections.push_back({"", 0, {}});
    Record rec;
    rec.line = line_no;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      std::string_view token = line.substr(i, j - i);
      auto eq = token.find('=');
      if (eq == std::string_view::npos || eq == 0) {
        throw Error(Errc::kParse, "line " + std::to_string(line_no) +
                                      ": expected key=value, got '" +
                                      std::string(token) + "'");
      }
      rec.fields.emplace_back(std::string(token.substr(0, eq)),
                              std::string(token.substr(eq + 1)));
      i = j;
    }
    doc.sections.back().records.push_back(std::move(rec));
  }
  return doc;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kUnreadableFile, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Locale-independent numeric parsing (decimal point only).
inline std::optional<double> try_parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

inline std::optional<long long> try_parse_int(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return v;
}

inline double parse_double(const Record& r, std::string_view key) {
  const std::string& s = r.at(key);
  if (s == "inf") return std::numeric_limits<double>::infinity();
  auto v = try_parse_double(s);
  if (!v) {
    throw Error(Errc::kParse, "line " + std::to_string(r.line) + ": key '" +
                                  std::string(key) + "' is not a number: '" +
                                  s + "'");
  }
  return *v;
}

inline double parse_double_or(const Record& r, std::string_view key,
                              double fallback) {
  return r.has(key) ? parse_double(r, key) : fallback;
}

inline long long parse_int(const Record& r, std::string_view key) {
  const std::string& s = r.at(key);
  auto v = try_parse_int(s);
  if (!v) {
    throw Error(Errc::kParse, "line " + std::to_string(r.line) + ": key '" +
                                  std::string(key) + "' is not an integer: '" +
                                  s + "'");
  }
  return *v;
}

inline long long parse_int_or(const Record& r, std::string_view key,
                              long long fallback) {
  return r.has(key) ? parse_int(r, key) : fallback;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto p = s.find(sep, start);
    out.push_back(s.substr(start, p == std::string_view::npos ? p : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

inline std::vector<double> parse_double_list(const Record& r,
                                             std::string_view key) {
  std::vector<double> out;
  for (auto part : split(r.at(key), ',')) {
    auto v = try_parse_double(part);
    if (!v) {
      throw Error(Errc::kParse, "line " + std::to_string(r.line) +
                                    ": bad number in list '" +
                                    std::string(key) + "'");
    }
    out.push_back(*v);
  }
  return out;
}

inline std::vector<int> parse_int_list(const Record& r, std::string_view key) {
  std::vector<int> out;
  for (auto part : split(r.at(key), ',')) {
    auto v = try_parse_int(part);
    if (!v) {
      throw Error(Errc::kParse, "line " + std::to_string(r.line) +
                                    ": bad integer in list '" +
                                    std::string(key) + "'");
    }
    out.push_back(static_cast<int>(*v));
  }
  return out;
}

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline std::string format_fixed(double v, int decimals) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::fixed, decimals);
  std::string s(buf, ptr);
  // Avoid printing "-0.000".
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) {
    s.erase(0, 1);
  }
  return s;
}

template <typename T, typename Fmt>
std::string join(const std::vector<T>& xs, Fmt fmt, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += fmt(xs[i]);
  }
  return out;
}

}  // namespace evcoop::text

#endif  // EVCOOP_RECORD_FORMAT_HPP
