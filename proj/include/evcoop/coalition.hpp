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

#ifndef EVCOOP_COALITION_HPP
#define EVCOOP_COALITION_HPP

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "evcoop/error.hpp"

namespace evcoop {

inline constexpr int kMaxPlayers = 16;

// A set of aggregators (players 1..n) encoded as a bitmask: player i is bit
// i-1. The empty coalition only appears as the c(empty) = 0 base case.
class Coalition {
 public:
  constexpr Coalition() = default;
  constexpr explicit Coalition(std::uint32_t mask) : mask_(mask) {}

  static Coalition grand(int n) {
    check_player_count(n);
    return Coalition((std::uint32_t{1} << n) - 1);
  }
  static Coalition singleton(int player) {
    return Coalition(std::uint32_t{1} << (player - 1));
  }
  template <typename Range>
  static Coalition of(const Range& players) {
    std::uint32_t mask = 0;
    for (int p : players) mask |= std::uint32_t{1} << (p - 1);
    return Coalition(mask);
  }
  static Coalition of(std::initializer_list<int> players) {
    std::uint32_t mask = 0;
    for (int p : players) mask |= std::uint32_t{1} << (p - 1);
    return Coalition(mask);
  }

  static void check_player_count(int n) {
    if (n < 1 || n > kMaxPlayers) {
      throw Error(Errc::kPlayerCountOutOfRange,
                  "player count " + std::to_string(n) + " outside [1, 16]");
    }
  }

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool contains(int player) const {
    return player >= 1 && player <= 32 && ((mask_ >> (player - 1)) & 1u) != 0;
  }
  constexpr bool fits(int n) const { return (mask_ >> n) == 0; }

  constexpr Coalition with(int player) const {
    return Coalition(mask_ | (std::uint32_t{1} << (player - 1)));
  }
  constexpr Coalition without(int player) const {
    return Coalition(mask_ & ~(std::uint32_t{1} << (player - 1)));
  }
  constexpr Coalition operator|(Coalition o) const {
    return Coalition(mask_ | o.mask_);
  }
  constexpr Coalition operator&(Coalition o) const {
    return Coalition(mask_ & o.mask_);
  }
  constexpr bool disjoint(Coalition o) const { return (mask_ & o.mask_) == 0; }

  std::vector<int> members() const {
    std::vector<int> out;
    for (std::uint32_t m = mask_; m != 0; m &= m - 1) {
      out.push_back(std::countr_zero(m) + 1);
    }
    return out;
  }

  // "{1, 2}" form, as printed in result tables.
  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int p : members()) {
      if (!first) s += ", ";
      s += std::to_string(p);
      first = false;
    }
    return s + "}";
  }

  friend constexpr bool operator==(Coalition, Coalition) = default;
  friend constexpr auto operator<=>(Coalition, Coalition) = default;

 private:
  std::uint32_t mask_ = 0;
};

// All 2^n - 1 nonempty coalitions over players 1..n, increasing by bitmask.
inline std::vector<Coalition> coalition_iter(int n) {
  Coalition::check_player_count(n);
  const std::uint32_t end = std::uint32_t{1} << n;
  std::vector<Coalition> out;
  out.reserve(end - 1);
  for (std::uint32_t m = 1; m < end; ++m) out.emplace_back(m);
  return out;
}

}  // namespace evcoop

#endif  // EVCOOP_COALITION_HPP
