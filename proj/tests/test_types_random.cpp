// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "irsthz/random.hpp"
#include "irsthz/types.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace irsthz;

TEST(Units, DecibelRoundTrip)
{
  for (double db : {-80.0, -3.0, 0.0, 18.0, 21.0, 30.0}) {
    EXPECT_NEAR(linear_to_db(db_to_linear(db)), db, 1e-12);
    EXPECT_NEAR(watts_to_dbm(dbm_to_watts(db)), db, 1e-12);
  }
  EXPECT_DOUBLE_EQ(dbm_to_watts(30.0), 1.0);
  EXPECT_NEAR(dbm_to_watts(-80.0), 1e-11, 1e-24);
}

TEST(Units, WrapPhaseRange)
{
  for (double t : {-7.0 * pi, -two_pi, -1e-18, 0.0, 1.0, two_pi, 13.5}) {
    const double w = wrap_phase(t);
    EXPECT_GE(w, 0.0);
    EXPECT_LT(w, two_pi);
    EXPECT_NEAR(std::cos(w), std::cos(t), 1e-12);
    EXPECT_NEAR(std::sin(w), std::sin(t), 1e-12);
  }
}

TEST(Random, DerivedSeedsAreDeterministicAndDistinct)
{
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
  std::set<std::uint64_t> seen;
  for (std::uint64_t m = 0; m < 4; ++m)
    for (std::uint64_t a = 0; a < 50; ++a)
      for (std::uint64_t b = 0; b < 5; ++b)
        seen.insert(derive_seed(m, {a, b}));
  EXPECT_EQ(seen.size(), 4u * 50u * 5u);
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
}

TEST(Random, SameSeedSameStream)
{
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.uniform(), b.uniform());
    EXPECT_EQ(a.normal(), b.normal());
  }
}

TEST(Random, MomentsOfDraws)
{
  Rng rng(7);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0, sc2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    sc2 += std::norm(rng.complex_normal(2.0));
  }
  EXPECT_NEAR(su / n, 0.5, 0.005);
  EXPECT_NEAR(sn / n, 0.0, 0.01);
  EXPECT_NEAR(sn2 / n, 1.0, 0.01);
  EXPECT_NEAR(sc2 / n, 2.0, 0.02);
}
