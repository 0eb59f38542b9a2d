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

#include <gtest/gtest.h>

#include <algorithm>

#include "evcoop/coalition.hpp"

namespace evcoop {
namespace {

TEST(Coalition, MembersAndPrinting) {
  const Coalition c = Coalition::of({3, 1});
  EXPECT_EQ(c.mask(), 0b101u);
  EXPECT_EQ(c.size(), 2);
  EXPECT_TRUE(c.contains(1));
  EXPECT_FALSE(c.contains(2));
  EXPECT_EQ(c.members(), (std::vector<int>{1, 3}));
  EXPECT_EQ(c.to_string(), "{1, 3}");
  EXPECT_EQ(Coalition().to_string(), "{}");
}

TEST(Coalition, SetOperations) {
  const Coalition a = Coalition::of({1, 2});
  const Coalition b = Coalition::singleton(3);
  EXPECT_TRUE(a.disjoint(b));
  EXPECT_EQ((a | b), Coalition::grand(3));
  EXPECT_TRUE((a & b).empty());
  EXPECT_EQ(a.with(3).without(1), Coalition::of({2, 3}));
  EXPECT_TRUE(a.fits(2));
  EXPECT_FALSE(b.fits(2));
}

TEST(Coalition, IterationCoversAllNonemptySubsetsInMaskOrder) {
  for (int n = 1; n <= 10; ++n) {
    const auto all = coalition_iter(n);
    ASSERT_EQ(all.size(), (std::size_t{1} << n) - 1);
    for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i].mask(), i + 1);
  }
}

TEST(Coalition, UnionClosureAndMembershipMatchSets) {
  for (int n = 1; n <= 5; ++n) {
    const auto all = coalition_iter(n);
    for (Coalition a : all) {
      for (Coalition b : all) {
        const Coalition u = a | b;
        EXPECT_TRUE(u.fits(n));
        EXPECT_FALSE(u.empty());
        for (int p = 1; p <= n; ++p) {
          EXPECT_EQ(u.contains(p), a.contains(p) || b.contains(p));
          EXPECT_EQ((a & b).contains(p), a.contains(p) && b.contains(p));
          const auto m = a.members();
          EXPECT_EQ(a.contains(p), std::find(m.begin(), m.end(), p) != m.end());
        }
        EXPECT_EQ(a.disjoint(b), (a & b).empty());
      }
    }
  }
}

TEST(Coalition, PlayerCountBounds) {
  EXPECT_NO_THROW(Coalition::grand(16));
  for (int bad : {0, 17, -1}) {
    try {
      Coalition::grand(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kPlayerCountOutOfRange);
    }
  }
  EXPECT_EQ(Coalition::grand(16).size(), 16);
}

}  // namespace
}  // namespace evcoop
