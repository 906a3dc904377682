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

#ifndef IRSTHZ_IRS_CONTROL_HPP
#define IRSTHZ_IRS_CONTROL_HPP

#include "irsthz/channel.hpp"
#include "irsthz/random.hpp"

namespace irsthz {

/// Redirects an incoming a(angle_in) into beta * a(angle_out).
inline PhaseShiftMatrix direction_mode(int num_elements, double spacing_wavelengths,
                                       double angle_in, double angle_out, double amplitude)
{
  if (num_elements < 1)
    throw std::invalid_argument("direction_mode: N_r must be >= 1");
  const double k_d = two_pi * spacing_wavelengths;
  const double delta = std::sin(angle_out) - std::sin(angle_in);
  std::vector<double> phases(static_cast<std::size_t>(num_elements));
  for (int n = 0; n < num_elements; ++n)
    phases[static_cast<std::size_t>(n)] = k_d * n * delta;
  return {std::move(phases), amplitude};
}

/// Reflects a(angle_in) back along its arrival path.
inline PhaseShiftMatrix return_mode(int num_elements, double spacing_wavelengths,
                                    double angle_in, double amplitude)
{
  if (num_elements < 1)
    throw std::invalid_argument("return_mode: N_r must be >= 1");
  const double k_d = two_pi * spacing_wavelengths;
  std::vector<double> phases(static_cast<std::size_t>(num_elements));
  for (int n = 0; n < num_elements; ++n)
    phases[static_cast<std::size_t>(n)] = -2.0 * k_d * n * std::sin(angle_in);
  return {std::move(phases), amplitude};
}

inline PhaseShiftMatrix direction_mode(const ArraySpec& irs, double angle_in, double angle_out,
                                       double amplitude)
{
  return direction_mode(irs.num_elements, irs.spacing_wavelengths, angle_in, angle_out, amplitude);
}

inline PhaseShiftMatrix return_mode(const ArraySpec& irs, double angle_in, double amplitude)
{
  return return_mode(irs.num_elements, irs.spacing_wavelengths, angle_in, amplitude);
}

/// Phases i.i.d. uniform on [0, 2pi).
inline PhaseShiftMatrix random_phases(int num_elements, double amplitude, Rng& rng)
{
  std::vector<double> phases(static_cast<std::size_t>(num_elements));
  for (double& p : phases)
    p = rng.uniform(0.0, two_pi);
  return {std::move(phases), amplitude};
}

/// Fully absorbing surface (beta = 0).
inline PhaseShiftMatrix absorbing(int num_elements)
{
  return {std::vector<double>(static_cast<std::size_t>(num_elements), 0.0), 0.0};
}

} // namespace irsthz

#endif // IRSTHZ_IRS_CONTROL_HPP
