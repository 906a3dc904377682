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

#ifndef IRSTHZ_CHANNEL_HPP
#define IRSTHZ_CHANNEL_HPP

#include "irsthz/array.hpp"

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

namespace irsthz {

struct PhysicalConstants
{
  double carrier_frequency = 0.3e12;     ///< f [Hz]
  double absorption_coefficient = 0.0033; ///< tau(f) [1/m]
  double light_speed = 299792458.0;      ///< c [m/s]
  double tx_gain = 1.0;                  ///< G_t, linear power ratio
  double rx_gain = 1.0;                  ///< G_r, linear power ratio
  double irs_element_gain = 1.0;         ///< G, linear
  double reflection_amplitude = 1.0;     ///< beta

  void validate() const
  {
    if (!(carrier_frequency > 0.0) || !(light_speed > 0.0))
      throw std::invalid_argument("PhysicalConstants: frequency and light speed must be positive");
    if (!(absorption_coefficient >= 0.0))
      throw std::invalid_argument("PhysicalConstants: absorption must be non-negative");
    if (!(tx_gain > 0.0) || !(rx_gain > 0.0) || !(irs_element_gain > 0.0))
      throw std::invalid_argument("PhysicalConstants: gains must be positive");
    if (!(reflection_amplitude >= 0.0 && reflection_amplitude <= 1.0))
      throw std::invalid_argument("PhysicalConstants: reflection amplitude must be in [0,1]");
  }
};

/// Free-spread loss with molecular absorption, as a real amplitude.
inline double path_loss(const PhysicalConstants& k, double distance)
{
  if (!(distance > 0.0))
    throw std::invalid_argument("path_loss: distance must be positive");
  return k.light_speed / (4.0 * pi * k.carrier_frequency * distance) *
         std::exp(-0.5 * k.absorption_coefficient * distance);
}

/// IRS path-loss compensation factor eta.
inline double compensation_factor(const PhysicalConstants& k, int num_irs_elements)
{
  if (num_irs_elements < 1)
    throw std::invalid_argument("compensation_factor: N_r must be >= 1");
  return 2.0 * std::sqrt(pi) * k.carrier_frequency * k.irs_element_gain * num_irs_elements /
         k.light_speed;
}

/// Closed-form cascade loss of a transmitter -> IRS -> receiver link.
inline double cascade_loss(const PhysicalConstants& k, int num_irs_elements, double d_in,
                           double d_out)
{
  if (!(d_in > 0.0) || !(d_out > 0.0))
    throw std::invalid_argument("cascade_loss: distances must be positive");
  if (num_irs_elements < 1)
    throw std::invalid_argument("cascade_loss: N_r must be >= 1");
  return k.tx_gain * k.rx_gain * k.irs_element_gain * num_irs_elements * k.light_speed *
         std::exp(-0.5 * k.absorption_coefficient * (d_in + d_out)) /
         (8.0 * std::sqrt(pi * pi * pi) * k.carrier_frequency * d_in * d_out);
}

/// Diagonal IRS operator diag(beta e^{j theta_n}), stored as its phase list.
class PhaseShiftMatrix
{
public:
  PhaseShiftMatrix() = default;

  PhaseShiftMatrix(std::vector<double> phases, double amplitude)
      : phases_(std::move(phases)), amplitude_(amplitude)
  {
    if (!(amplitude_ >= 0.0 && amplitude_ <= 1.0))
      throw std::invalid_argument("PhaseShiftMatrix: amplitude must be in [0,1]");
    for (double& p : phases_)
      p = wrap_phase(p);
  }

  std::size_t size() const { return phases_.size(); }
  const std::vector<double>& phases() const { return phases_; }
  double amplitude() const { return amplitude_; }

  cplx entry(std::size_t n) const { return std::polar(amplitude_, phases_.at(n)); }

  CVector diagonal() const
  {
    CVector d(static_cast<Eigen::Index>(phases_.size()));
    for (std::size_t n = 0; n < phases_.size(); ++n)
      d[static_cast<Eigen::Index>(n)] = entry(n);
    return d;
  }

  CVector apply(const CVector& v) const
  {
    check_size(v.size());
    return diagonal().cwiseProduct(v);
  }

  /// x^H Theta y
  cplx bilinear(const CVector& x, const CVector& y) const
  {
    check_size(x.size());
    check_size(y.size());
    cplx acc = 0.0;
    for (std::size_t n = 0; n < phases_.size(); ++n) {
      const auto i = static_cast<Eigen::Index>(n);
      acc += std::conj(x[i]) * entry(n) * y[i];
    }
    return acc;
  }

  CMatrix dense() const { return diagonal().asDiagonal(); }

private:
  void check_size(Eigen::Index n) const
  {
    if (static_cast<std::size_t>(n) != phases_.size())
      throw std::invalid_argument("PhaseShiftMatrix: vector size mismatch");
  }

  std::vector<double> phases_;
  double amplitude_ = 1.0;
};

/// Rank-one LoS link gain * a_rx(aoa) a_tx(aod)^H, kept in factored form.
struct RankOneLink
{
  double path_amplitude = 0.0;
  CVector rx_response;
  CVector tx_response;

  CMatrix matrix() const { return path_amplitude * rx_response * tx_response.adjoint(); }

  /// Link matrix applied to a transmit vector.
  CVector times(const CVector& x) const
  {
    return path_amplitude * tx_response.dot(x) * rx_response;
  }

  /// Transposed link (reverse direction) applied to a vector.
  CVector transpose_times(const CVector& y) const
  {
    return path_amplitude * (rx_response.transpose() * y)(0) * tx_response.conjugate();
  }
};

inline RankOneLink make_link(const PhysicalConstants& k, const ArraySpec& tx_spec,
                             const ArraySpec& rx_spec, double aod, double aoa, double distance)
{
  return {path_loss(k, distance), steering_vector(rx_spec, aoa), steering_vector(tx_spec, aod)};
}

/// Angles of one IRS-assisted path.
struct PathAngles
{
  double alice_aod = 0.0; ///< phi_{A,M}
  double irs_aoa = 0.0;   ///< phi_{R,M}
  double irs_aod = 0.0;   ///< phi_{R,N}
  double bob_aoa = 0.0;   ///< phi_{B,N}
};

struct IrsPath
{
  RankOneLink alice_irs; ///< M_l, N_r x N_t
  RankOneLink irs_bob;   ///< N_l, N_u x N_r
  double eta = 0.0;
  double d_alice_irs = 0.0;
  double d_irs_bob = 0.0;
  PathAngles angles;
};

struct CascadeChannel
{
  ArraySpec alice;
  ArraySpec bob;
  ArraySpec irs;
  std::vector<IrsPath> paths;

  std::size_t num_irs() const { return paths.size(); }
};

inline IrsPath make_irs_path(const PhysicalConstants& k, const ArraySpec& alice,
                             const ArraySpec& irs, const ArraySpec& bob, const PathAngles& angles,
                             double d_alice_irs, double d_irs_bob)
{
  IrsPath p;
  p.alice_irs = make_link(k, alice, irs, angles.alice_aod, angles.irs_aoa, d_alice_irs);
  p.irs_bob = make_link(k, irs, bob, angles.irs_aod, angles.bob_aoa, d_irs_bob);
  p.eta = compensation_factor(k, irs.num_elements);
  p.d_alice_irs = d_alice_irs;
  p.d_irs_bob = d_irs_bob;
  p.angles = angles;
  return p;
}

/// Scalar that multiplies a_B a_A^H in the contribution of one IRS:
/// eta G_t G_r a(d_M) a(d_N) (a_R(aod)^H Theta a_R(aoa)).
inline cplx path_coefficient(const IrsPath& p, const PhaseShiftMatrix& theta,
                             const PhysicalConstants& k)
{
  return p.eta * k.tx_gain * k.rx_gain * p.alice_irs.path_amplitude * p.irs_bob.path_amplitude *
         theta.bilinear(p.irs_bob.tx_response, p.alice_irs.rx_response);
}

/// End-to-end channel H = sum_l eta_l G_t G_r N_l Theta_l M_l  (N_u x N_t).
inline CMatrix assemble(const CascadeChannel& ch, std::span<const PhaseShiftMatrix> thetas,
                        const PhysicalConstants& k)
{
  if (thetas.size() != ch.paths.size())
    throw std::invalid_argument("assemble: need one phase matrix per IRS");
  CMatrix h = CMatrix::Zero(ch.bob.num_elements, ch.alice.num_elements);
  for (std::size_t l = 0; l < ch.paths.size(); ++l) {
    const IrsPath& p = ch.paths[l];
    if (thetas[l].size() != static_cast<std::size_t>(p.alice_irs.rx_response.size()))
      throw std::invalid_argument("assemble: phase matrix size does not match IRS");
    if (p.irs_bob.rx_response.size() != h.rows() || p.alice_irs.tx_response.size() != h.cols())
      throw std::invalid_argument("assemble: link dimensions do not match terminals");
    h.noalias() += path_coefficient(p, thetas[l], k) *
                   (p.irs_bob.rx_response * p.alice_irs.tx_response.adjoint());
  }
  return h;
}

/// Contribution of a single IRS (all others absorbing).
inline CMatrix assemble_single(const CascadeChannel& ch, std::size_t l,
                               const PhaseShiftMatrix& theta, const PhysicalConstants& k)
{
  const IrsPath& p = ch.paths.at(l);
  return path_coefficient(p, theta, k) * (p.irs_bob.rx_response * p.alice_irs.tx_response.adjoint());
}

} // namespace irsthz

#endif // IRSTHZ_CHANNEL_HPP
