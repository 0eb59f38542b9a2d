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

#ifndef EVCOOP_CFN_IO_HPP
#define EVCOOP_CFN_IO_HPP

// Characteristic-function files:
//   n=3
//   members=1 cost=1.850 energy=12.1
//   members=1,2 cost=1.635
// One line per nonempty coalition; energy is optional.

#include <string>
#include <string_view>

#include "evcoop/coalition.hpp"
#include "evcoop/game.hpp"
#include "evcoop/record_format.hpp"

namespace evcoop {

inline CharacteristicFunction parse_cfn(std::string_view content) {
  const text::Document doc = text::parse_document(content);
  const text::Section* root = doc.find("");
  if (!root || root->records.empty() || !root->records.front().has("n")) {
    throw Error(Errc::kParse, "first line must be n=<count>");
  }
  const long long n = text::parse_int(root->records.front(), "n");
  if (n < 1 || n > kMaxPlayers) {
    throw Error(Errc::kPlayerCountOutOfRange, "n=" + std::to_string(n));
  }
  CharacteristicFunction c(static_cast<int>(n));
  for (std::size_t i = 1; i < root->records.size(); ++i) {
    const text::Record& r = root->records[i];
    const auto members = text::parse_int_list(r, "members");
    for (int m : members) {
      if (m < 1 || m > n) {
        throw Error(Errc::kParse, "line " + std::to_string(r.line) + ": player " +
                                      std::to_string(m) + " outside 1.." + std::to_string(n));
      }
    }
    const Coalition s = Coalition::of(members);
    if (s.empty()) throw Error(Errc::kParse, "line " + std::to_string(r.line) + ": empty coalition");
    if (c.has(s)) {
      throw Error(Errc::kDuplicateId, "line " + std::to_string(r.line) + ": coalition " +
                                          s.to_string() + " listed twice");
    }
    c.set(s, text::parse_double(r, "cost"), text::parse_double_or(r, "energy", 0.0));
  }
  if (doc.sections.size() > 1) throw Error(Errc::kParse, "unexpected section in cfn file");
  return c;
}

inline CharacteristicFunction load_cfn(const std::string& path) {
  return parse_cfn(text::read_file(path));
}

inline std::string serialize_cfn(const CharacteristicFunction& c) {
  std::string out = "n=" + std::to_string(c.players()) + "\n";
  for (Coalition s : coalition_iter(c.players())) {
    if (!c.has(s)) continue;
    out += "members=" + text::join(s.members(), [](int m) { return std::to_string(m); }) +
           " cost=" + text::format_double(c.cost(s)) +
           " energy=" + text::format_double(c.energy(s)) + "\n";
  }
  return out;
}

}  // namespace evcoop

#endif  // EVCOOP_CFN_IO_HPP
