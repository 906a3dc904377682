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

#include "irsthz/training.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace irsthz;

namespace {

PhysicalConstants test_constants()
{
  PhysicalConstants k;
  k.tx_gain = db_to_linear(18.0);
  k.rx_gain = db_to_linear(18.0);
  return k;
}

CascadeChannel random_channel(Rng& rng, int paths, const PhysicalConstants& k)
{
  CascadeChannel ch{{32, 0.5, 0.0}, {32, 0.5, 0.0}, {32, 0.25, pi}, {}};
  for (int l = 0; l < paths; ++l) {
    const PathAngles a{rng.uniform(-1.4, 1.4), rng.uniform(-1.4, 1.4), rng.uniform(-1.4, 1.4),
                       rng.uniform(-1.4, 1.4)};
    ch.paths.push_back(
        make_irs_path(k, ch.alice, ch.irs, ch.bob, a, rng.uniform(3, 8), rng.uniform(3, 8)));
  }
  return ch;
}

double nearest_sine(const std::vector<double>& grid, double angle)
{
  return std::sin(grid[nearest_in_sine(grid, angle)]);
}

struct Fixture
{
  PhysicalConstants k = test_constants();
  Rng rng{2024};
  CascadeChannel ch = random_channel(rng, 3, k);
  HierarchicalCodebook alice{ch.alice, 2, 64};
  HierarchicalCodebook bob{ch.bob, 2, 64};
  TrainingContext ctx{ch, k, alice, bob, irs_sweep_directions(64)};
};

} // namespace

TEST(Sounder, NoiselessReturnsScaledPower)
{
  Sounder s({2.0, 0.0, 1});
  EXPECT_DOUBLE_EQ(s.measure(cplx(0.3, -0.4)), 2.0 * 0.25);
  EXPECT_EQ(s.count(), 1);
}

TEST(Sounder, NoiseOnlyAveragesToNoisePower)
{
  Sounder s({0.0, 3.0, 5});
  double acc = 0.0;
  for (int i = 0; i < 100000; ++i)
    acc += s.measure(cplx(1.0, 1.0));
  EXPECT_NEAR(acc / 100000, 3.0, 0.05);
}

TEST(Sounder, SeedReproducesMeasurements)
{
  const CMatrix h = CMatrix::Identity(4, 4);
  const CVector v = CVector::Ones(4) / 2.0;
  Sounder a({1.0, 0.5, 9}), b({1.0, 0.5, 9});
  for (int i = 0; i < 10; ++i)
    EXPECT_EQ(a.measure_power(v, v, h, 3), b.measure_power(v, v, h, 3));
  EXPECT_THROW(a.measure_power(CVector::Ones(3), v, h), std::invalid_argument);
  EXPECT_THROW(a.measure_power(v, v, h, 0), std::invalid_argument);
}

TEST(Sounder, AlignedRankOneLink)
{
  const ArraySpec s{16, 0.5, 0.0};
  const CVector a = steering_vector(s, 0.3), b = steering_vector(s, -0.5);
  const CMatrix h = 0.01 * b * a.adjoint();
  Sounder snd({4.0, 0.0, 1});
  EXPECT_NEAR(snd.measure_power(a, b, h), 4.0 * 1e-4, 1e-16);
}

TEST(Phase1, NoiselessPicksNearestSweepDirection)
{
  Fixture f;
  Sounder s({1.0, 0.0, 1});
  for (std::size_t l = 0; l < f.ch.num_irs(); ++l) {
    const Phase1Result r = phase1(f.ctx, l, s);
    const PathAngles& a = f.ch.paths[l].angles;
    EXPECT_NEAR(std::sin(r.irs_aoa), nearest_sine(f.ctx.irs_sweep, a.irs_aoa), 1e-12);
    EXPECT_NEAR(std::sin(r.irs_aod), nearest_sine(f.ctx.irs_sweep, a.irs_aod), 1e-12);
    EXPECT_EQ(r.slots_alice, 64);
    EXPECT_EQ(r.slots_bob, 64);
  }
}

TEST(Phase1, NoiselessOverManyGeometries)
{
  const PhysicalConstants k = test_constants();
  Rng rng(55);
  for (int t = 0; t < 200; ++t) {
    const CascadeChannel ch = random_channel(rng, 1, k);
    const HierarchicalCodebook cb(ch.alice, 2, 64);
    const TrainingContext ctx{ch, k, cb, cb, irs_sweep_directions(64)};
    Sounder s({1.0, 0.0, 1});
    const Phase1Result r = phase1(ctx, 0, s);
    EXPECT_NEAR(std::sin(r.irs_aoa), nearest_sine(ctx.irs_sweep, ch.paths[0].angles.irs_aoa),
                1e-12);
    EXPECT_NEAR(std::sin(r.irs_aod), nearest_sine(ctx.irs_sweep, ch.paths[0].angles.irs_aod),
                1e-12);
  }
}

TEST(Phase1, HugeNoiseSpreadsTheChoice)
{
  Fixture f;
  Sounder s({1.0, 1.0, 3});
  std::set<int> slots;
  for (int t = 0; t < 300; ++t)
    slots.insert(phase1(f.ctx, 0, s).alice_slot);
  EXPECT_GT(slots.size(), 32u);
}

TEST(Phase2, NoiselessWithExactIrsAnglesFindsNearestLeaves)
{
  const PhysicalConstants k = test_constants();
  Rng rng(91);
  for (int t = 0; t < 200; ++t) {
    const CascadeChannel ch = random_channel(rng, 1, k);
    const HierarchicalCodebook cb(ch.alice, 2, 64);
    const TrainingContext ctx{ch, k, cb, cb, irs_sweep_directions(64)};
    Sounder s({1.0, 0.0, 1});
    Phase1Result exact;
    exact.irs_aoa = ch.paths[0].angles.irs_aoa;
    exact.irs_aod = ch.paths[0].angles.irs_aod;
    const Phase2Result r = phase2(ctx, 0, exact, s);
    const std::vector<double>& grid = cb.leaf_grid().directions;
    EXPECT_NEAR(std::sin(r.bob_aoa), nearest_sine(grid, ch.paths[0].angles.bob_aoa), 1e-12);
    EXPECT_NEAR(std::sin(r.alice_aod), nearest_sine(grid, ch.paths[0].angles.alice_aod), 1e-12);
    EXPECT_EQ(r.measurements_bob, 12);
    EXPECT_EQ(r.measurements_alice, 12);
  }
}

TEST(Phase2, MisalignedIrsStillReturnsGridAngles)
{
  Fixture f;
  Sounder s({1.0, 1e-30, 4});
  Phase1Result wrong;
  wrong.irs_aoa = 1.2;
  wrong.irs_aod = -1.3;
  const Phase2Result r = phase2(f.ctx, 0, wrong, s);
  const auto& g = f.alice.leaf_grid().directions;
  EXPECT_NE(std::find(g.begin(), g.end(), r.bob_aoa), g.end());
  EXPECT_LT(std::abs(std::sin(r.alice_aod) - nearest_sine(g, r.alice_aod)), 1e-12);
}

TEST(EstimateAngles, SlotTotalsAndDeterminism)
{
  Fixture f;
  Sounder a({1e-2, 1e-11, 77}), b({1e-2, 1e-11, 77});
  const ChannelEstimate ea = estimate_angles(f.ctx, a);
  const ChannelEstimate eb = estimate_angles(f.ctx, b);
  ASSERT_EQ(ea.paths.size(), 3u);
  for (std::size_t l = 0; l < 3; ++l) {
    EXPECT_EQ(ea.paths[l].irs_aoa, eb.paths[l].irs_aoa);
    EXPECT_EQ(ea.paths[l].irs_aod, eb.paths[l].irs_aod);
    EXPECT_EQ(ea.paths[l].alice_aod, eb.paths[l].alice_aod);
    EXPECT_EQ(ea.paths[l].bob_aoa, eb.paths[l].bob_aoa);
  }
  EXPECT_EQ(ea.slots.phase1, 3 * 2 * 64);
  EXPECT_LE(ea.slots.phase2, 3 * 2 * 2 * 6);
  EXPECT_EQ(ea.slots.total(), ea.slots.phase1 + ea.slots.phase2);
  EXPECT_EQ(a.count(), ea.slots.total());
}

TEST(Misalignment, DeterministicAndVanishingAtHighSnr)
{
  const std::vector<double> grid = {-10, 0, 10, 20, 30, 40, 60, 100};
  const auto a = misalignment_curve(32, 64, grid, 500, 3);
  const auto b = misalignment_curve(32, 64, grid, 500, 3);
  ASSERT_EQ(a.size(), grid.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].mp, b[i].mp);
    EXPECT_EQ(a[i].trials, 500);
    if (i > 0) {
      EXPECT_LE(a[i].mp, a[i - 1].mp + 0.05);
    }
  }
  EXPECT_GT(a.front().mp, 0.5);
  EXPECT_EQ(a.back().mp, 0.0);
  EXPECT_THROW(misalignment_curve(32, 64, grid, 0, 1), std::invalid_argument);
}

TEST(Misalignment, MoreBeamsMisalignMoreOften)
{
  const std::vector<double> grid = {0, 5, 10};
  const auto k2 = misalignment_curve(32, 64, grid, 3000, 11);
  const auto k3 = misalignment_curve(32, 96, grid, 3000, 11);
  for (std::size_t i = 0; i < grid.size(); ++i)
    EXPECT_GE(k3[i].mp, k2[i].mp);
}
