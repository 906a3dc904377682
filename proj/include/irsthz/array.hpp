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

#ifndef IRSTHZ_ARRAY_HPP
#define IRSTHZ_ARRAY_HPP

#include "irsthz/types.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace irsthz {

/// Uniform linear array. Elements sit on the axis obtained by rotating the
/// broadside direction by +90 degrees; an angle is measured from broadside
/// towards that axis, so sin(angle) is the direction cosine along the array.
struct ArraySpec
{
  int num_elements = 1;
  double spacing_wavelengths = 0.5;
  double orientation_angle = 0.0; ///< broadside direction in scene coordinates [rad]

  void validate() const
  {
    if (num_elements < 1)
      throw std::invalid_argument("ArraySpec: num_elements must be >= 1");
    if (!(spacing_wavelengths > 0.0))
      throw std::invalid_argument("ArraySpec: spacing must be positive");
  }

  bool half_wavelength() const { return std::abs(spacing_wavelengths - 0.5) < 1e-15; }
};

enum class BeamKind { narrow, wide, omni };

struct BeamVector
{
  CVector coefficients;
  BeamKind kind = BeamKind::narrow;

  Eigen::Index size() const { return coefficients.size(); }
};

/// Array response for a plane wave at `angle`; unit norm.
inline CVector steering_vector(const ArraySpec& spec, double angle)
{
  spec.validate();
  const double step = two_pi * spec.spacing_wavelengths * std::sin(angle);
  const double scale = 1.0 / std::sqrt(static_cast<double>(spec.num_elements));
  CVector a(spec.num_elements);
  for (int n = 0; n < spec.num_elements; ++n)
    a[n] = std::polar(scale, step * n);
  return a;
}

inline BeamVector steering(const ArraySpec& spec, double angle)
{
  return {steering_vector(spec, angle), BeamKind::narrow};
}

/// Single active element (the first one) with unit amplitude.
inline BeamVector omni_beam(const ArraySpec& spec)
{
  spec.validate();
  CVector e = CVector::Zero(spec.num_elements);
  e[0] = 1.0;
  return {e, BeamKind::omni};
}

/// Normalized beam power |w^H a(probe)|.
inline double beam_gain(const CVector& w, const ArraySpec& spec, double probe)
{
  if (w.size() != spec.num_elements)
    throw std::invalid_argument("beam_gain: beam length " + std::to_string(w.size()) +
                                " does not match array size " + std::to_string(spec.num_elements));
  return std::abs(w.dot(steering_vector(spec, probe)));
}

inline double beam_gain(const BeamVector& w, const ArraySpec& spec, double probe)
{
  return beam_gain(w.coefficients, spec, probe);
}

/// Half-wavelength array factor |sin(N pi x / 2) / (N sin(pi x / 2))| as a
/// function of the sine difference x.
inline double array_factor(int num_elements, double x)
{
  const double den = static_cast<double>(num_elements) * std::sin(0.5 * pi * x);
  if (std::abs(den) < 1e-300 || std::abs(std::sin(0.5 * pi * x)) < 1e-12) {
    // Direct sum near the removable singularities (x = 0, +-2, ...).
    cplx acc = 0.0;
    for (int n = 0; n < num_elements; ++n)
      acc += std::polar(1.0, pi * n * x);
    return std::abs(acc) / num_elements;
  }
  return std::abs(std::sin(0.5 * pi * num_elements * x) / den);
}

namespace detail {

inline void check_grid_args(int num_elements, int num_beams)
{
  if (num_elements < 1)
    throw std::invalid_argument("beam grid: num_elements must be >= 1");
  if (num_beams < num_elements)
    throw std::invalid_argument("beam grid: K=" + std::to_string(num_beams) +
                                " must be >= N_a=" + std::to_string(num_elements));
}

inline void require_half_wavelength(const ArraySpec& spec)
{
  spec.validate();
  if (!spec.half_wavelength())
    throw std::invalid_argument("beam grid formulas assume half-wavelength spacing");
}

} // namespace detail

/// Coverage-edge energy rho shared by K beams that tile the sine domain.
inline double edge_energy(int num_elements, int num_beams)
{
  detail::check_grid_args(num_elements, num_beams);
  const double n = num_elements;
  const double k = num_beams;
  return std::sin(n * pi / (2.0 * k)) / (n * std::sin(pi / (2.0 * k)));
}

inline double edge_energy(const ArraySpec& spec, int num_beams)
{
  detail::require_half_wavelength(spec);
  return edge_energy(spec.num_elements, num_beams);
}

/// K directions whose sines sit at (2i-1)/K - 1, i = 1..K (front range).
inline std::vector<double> uniform_sine_grid(int num_beams)
{
  if (num_beams < 1)
    throw std::invalid_argument("uniform_sine_grid: K must be >= 1");
  std::vector<double> dirs(static_cast<std::size_t>(num_beams));
  for (int i = 1; i <= num_beams; ++i)
    dirs[static_cast<std::size_t>(i - 1)] =
        std::asin(static_cast<double>(2 * i - 1) / num_beams - 1.0);
  return dirs;
}

struct BeamGrid
{
  int K = 0;
  std::vector<double> directions;
  double edge_energy = 0.0;

  /// Sine of the coverage edges of beam i (0-based): lower and upper.
  double lower_edge_sine(int i) const { return static_cast<double>(2 * i) / K - 1.0; }
  double upper_edge_sine(int i) const { return static_cast<double>(2 * i + 2) / K - 1.0; }
};

inline BeamGrid grid_directions(int num_elements, int num_beams)
{
  detail::check_grid_args(num_elements, num_beams);
  return {num_beams, uniform_sine_grid(num_beams), edge_energy(num_elements, num_beams)};
}

inline BeamGrid grid_directions(const ArraySpec& spec, int num_beams)
{
  detail::require_half_wavelength(spec);
  return grid_directions(spec.num_elements, num_beams);
}

/// Back-range twin; indistinguishable from `angle` for a ULA.
inline double mirror_twin(double angle) { return pi - angle; }

/// Front-range representative in [-pi/2, pi/2] with the same sine.
inline double front_range(double angle) { return std::asin(std::sin(angle)); }

inline double sine_distance(double a, double b) { return std::abs(std::sin(a) - std::sin(b)); }

/// Index of the direction nearest to `angle` in sine; lowest index on ties.
inline std::size_t nearest_in_sine(const std::vector<double>& directions, double angle)
{
  std::size_t best = 0;
  double best_d = sine_distance(directions.at(0), angle);
  for (std::size_t i = 1; i < directions.size(); ++i) {
    const double d = sine_distance(directions[i], angle);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

} // namespace irsthz

#endif // IRSTHZ_ARRAY_HPP
