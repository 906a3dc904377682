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

#ifndef IRSTHZ_QUANTIZATION_HPP
#define IRSTHZ_QUANTIZATION_HPP

#include "irsthz/array.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <stdexcept>

namespace irsthz {

/// Worst-case normalized quantization error: the gain lost at a coverage edge.
inline double worst_error(int num_elements, int num_beams)
{
  detail::check_grid_args(num_elements, num_beams);
  const double n = num_elements;
  const double k = num_beams;
  return 1.0 - std::sin(n * pi / (2.0 * k)) / (n * std::sin(pi / (2.0 * k)));
}

namespace detail {

// E[g(T(sin phi - c_nearest))] for phi uniform over the full circle, where
// c_nearest is the centre of the grid beam whose coverage contains sin phi.
// Each coverage interval [lo, hi] in y = sin(phi) carries the density
// 1 / (pi sqrt(1 - y^2)); substituting y = sin(u) turns it into du / pi on
// [asin(lo), asin(hi)] and removes the endpoint singularity.
template <class Transform>
double expected_grid_gain(int num_elements, int num_beams, double abs_tol, Transform g)
{
  check_grid_args(num_elements, num_beams);
  using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;
  const double k = num_beams;
  const double piece_tol = 1e-10;
  double total = 0.0;
  double err_total = 0.0;
  for (int n = 1; n <= num_beams; ++n) {
    const double lo = (2.0 * n - 2.0 - k) / k;
    const double hi = (2.0 * n - k) / k;
    const double centre = (2.0 * n - 1.0 - k) / k;
    auto integrand = [&](double u) {
      const double v = g(array_factor(num_elements, std::sin(u) - centre)) / pi;
      if (!std::isfinite(v))
        throw std::runtime_error("average_error: non-finite integrand value");
      return v;
    };
    double err = 0.0;
    const double piece =
        Quad::integrate(integrand, std::asin(std::max(lo, -1.0)), std::asin(std::min(hi, 1.0)),
                        15, piece_tol, &err);
    total += piece;
    err_total += err;
  }
  if (!(err_total <= abs_tol))
    throw std::runtime_error("average_error: quadrature did not reach tolerance");
  return total;
}

} // namespace detail

/// Average normalized quantization error over a uniformly distributed path angle
/// (amplitude-gain convention, consistent with worst_error).
inline double average_error(int num_elements, int num_beams, double abs_tol = 1e-8)
{
  return 1.0 - detail::expected_grid_gain(num_elements, num_beams, abs_tol,
                                          [](double a) { return a; });
}

/// Same average in the power convention (1 - E[A^2]).
inline double average_error_power(int num_elements, int num_beams, double abs_tol = 1e-8)
{
  return 1.0 - detail::expected_grid_gain(num_elements, num_beams, abs_tol,
                                          [](double a) { return a * a; });
}

/// Best gain a K-beam exhaustive scan sees for a path at `true_angle`
/// (amplitude ratio p_es / p*).
inline double estimated_power_ratio(int num_elements, int num_beams, double true_angle)
{
  detail::check_grid_args(num_elements, num_beams);
  const ArraySpec spec{num_elements, 0.5, 0.0};
  const CVector path = steering_vector(spec, true_angle);
  double best = 0.0;
  for (double dir : uniform_sine_grid(num_beams))
    best = std::max(best, std::abs(steering_vector(spec, dir).dot(path)));
  return best;
}

inline double estimated_power_ratio_squared(int num_elements, int num_beams, double true_angle)
{
  const double a = estimated_power_ratio(num_elements, num_beams, true_angle);
  return a * a;
}

struct QuantizationReport
{
  double worst_error = 0.0;
  double average_error = 0.0;
  int K = 0;
  int N_a = 0;
  double quadrature_abs_tol = 1e-8;
};

inline QuantizationReport quantization_report(int num_elements, int num_beams,
                                              double abs_tol = 1e-8)
{
  return {worst_error(num_elements, num_beams), average_error(num_elements, num_beams, abs_tol),
          num_beams, num_elements, abs_tol};
}

} // namespace irsthz

#endif // IRSTHZ_QUANTIZATION_HPP
