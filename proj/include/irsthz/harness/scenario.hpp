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

#ifndef IRSTHZ_HARNESS_SCENARIO_HPP
#define IRSTHZ_HARNESS_SCENARIO_HPP

#include "irsthz/channel.hpp"
#include "irsthz/harness/config.hpp"
#include "irsthz/random.hpp"

#include <cmath>
#include <optional>
#include <vector>

namespace irsthz {

struct Point
{
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Point a, Point b) { return std::hypot(b.x - a.x, b.y - a.y); }

/// Angle of `target` seen from an array at `origin` whose broadside points
/// along `orientation`: atan2(u . axis, u . broadside), axis = broadside + 90deg.
/// Returns nullopt for coincident points or targets behind the array.
inline std::optional<double> array_angle(Point origin, double orientation, Point target)
{
  const double dx = target.x - origin.x;
  const double dy = target.y - origin.y;
  if (std::hypot(dx, dy) < 1e-9)
    return std::nullopt;
  const double along_broadside = dx * std::cos(orientation) + dy * std::sin(orientation);
  const double along_axis = -dx * std::sin(orientation) + dy * std::cos(orientation);
  if (!(along_broadside > 0.0))
    return std::nullopt;
  return std::atan2(along_axis, along_broadside);
}

constexpr double terminal_orientation = 0.0; ///< Alice/Bob face +x
constexpr double irs_orientation = pi;       ///< IRSs face -x

struct Geometry
{
  Point alice;
  Point bob;
  std::vector<Point> irs;
};

struct Scenario
{
  Geometry geometry;
  CascadeChannel channel;
  int resampled = 0; ///< draws rejected as degenerate before this one
};

inline ArraySpec alice_array(const ScenarioConfig& c)
{
  return {c.num_tx_antennas, c.terminal_spacing, terminal_orientation};
}

inline ArraySpec bob_array(const ScenarioConfig& c)
{
  return {c.num_rx_antennas, c.terminal_spacing, terminal_orientation};
}

inline ArraySpec irs_array(const ScenarioConfig& c)
{
  return {c.num_irs_elements, c.irs_spacing, irs_orientation};
}

/// Builds M_l, N_l and eta_l for every IRS; nullopt if any link is degenerate.
inline std::optional<CascadeChannel> build_channel(const ScenarioConfig& c, const Geometry& g)
{
  const PhysicalConstants k = c.constants();
  CascadeChannel ch{alice_array(c), bob_array(c), irs_array(c), {}};
  for (const Point& r : g.irs) {
    const auto alice_aod = array_angle(g.alice, terminal_orientation, r);
    const auto irs_aoa = array_angle(r, irs_orientation, g.alice);
    const auto irs_aod = array_angle(r, irs_orientation, g.bob);
    const auto bob_aoa = array_angle(g.bob, terminal_orientation, r);
    if (!alice_aod || !irs_aoa || !irs_aod || !bob_aoa)
      return std::nullopt;
    const PathAngles angles{*alice_aod, *irs_aoa, *irs_aod, *bob_aoa};
    ch.paths.push_back(make_irs_path(k, ch.alice, ch.irs, ch.bob, angles, distance(g.alice, r),
                                     distance(r, g.bob)));
  }
  return ch;
}

/// Alice and Bob uniform on their wall segments; degenerate draws are resampled.
inline Scenario sample_scenario(const ScenarioConfig& c, Rng& rng)
{
  c.validate();
  Scenario s;
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Geometry g;
    g.alice = {c.terminal_x, rng.uniform(c.alice_y_min, c.alice_y_max)};
    g.bob = {c.terminal_x, rng.uniform(c.bob_y_min, c.bob_y_max)};
    for (double y : c.irs_y)
      g.irs.push_back({c.irs_x, y});
    if (auto ch = build_channel(c, g)) {
      s.geometry = std::move(g);
      s.channel = std::move(*ch);
      return s;
    }
    ++s.resampled;
  }
  throw ConfigError("geometry: could not draw a non-degenerate scenario");
}

} // namespace irsthz

#endif // IRSTHZ_HARNESS_SCENARIO_HPP
