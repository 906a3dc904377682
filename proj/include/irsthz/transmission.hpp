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

#ifndef IRSTHZ_TRANSMISSION_HPP
#define IRSTHZ_TRANSMISSION_HPP

#include "irsthz/channel.hpp"
#include "irsthz/irs_control.hpp"
#include "irsthz/training.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <limits>
#include <vector>

namespace irsthz {

/// Theta_l = direction mode from the estimated IRS angles.
inline std::vector<PhaseShiftMatrix> design_irs(const std::vector<AngleEstimate>& estimates,
                                                const ArraySpec& irs, double amplitude,
                                                std::size_t num_irs)
{
  if (estimates.size() != num_irs)
    throw std::invalid_argument("design_irs: missing estimate for some IRS");
  std::vector<PhaseShiftMatrix> out;
  out.reserve(estimates.size());
  for (const AngleEstimate& e : estimates)
    out.push_back(direction_mode(irs, e.irs_aoa, e.irs_aod, amplitude));
  return out;
}

/// Composite loss of path l when its IRS bridges the true angles exactly.
inline double exact_composite_loss(const IrsPath& p, const PhysicalConstants& k)
{
  return k.reflection_amplitude * p.eta * k.tx_gain * k.rx_gain * p.alice_irs.path_amplitude *
         p.irs_bob.path_amplitude;
}

/// Beam-trains on the estimated end angles with IRS l configured (all others
/// absorbing) and returns sqrt((mean |y|^2 - sigma^2)^+ / P).
inline double estimate_composite_loss(const CascadeChannel& ch, const PhysicalConstants& k,
                                      std::size_t l, const PhaseShiftMatrix& theta,
                                      const AngleEstimate& est, Sounder& sounder,
                                      int repetitions)
{
  if (repetitions < 1)
    throw std::invalid_argument("estimate_composite_loss: repetitions must be >= 1");
  const CMatrix h = assemble_single(ch, l, theta, k);
  const CVector x = steering_vector(ch.alice, est.alice_aod);
  const CVector w = steering_vector(ch.bob, est.bob_aoa);
  const cplx response = w.dot(h * x);
  double acc = 0.0;
  for (int r = 0; r < repetitions; ++r)
    acc += sounder.measure(response, w.squaredNorm());
  const MeasurementModel& m = sounder.model();
  if (!(m.transmit_power > 0.0))
    return 0.0;
  const double signal = std::max(acc / repetitions - m.noise_power * w.squaredNorm(), 0.0);
  return std::sqrt(signal / m.transmit_power);
}

struct PowerAllocation
{
  std::vector<double> factors; ///< S_l
  double mu = 0.0;             ///< Lagrange multiplier

  double water_level() const { return 1.0 / (std::log(2.0) * mu); }
};

/// Water-filling over parallel channels with amplitude gains a_l:
/// S_l = (1/(ln2 mu) - sigma^2/(P a_l^2))^+, mu found by bisection on the level.
inline PowerAllocation water_filling(const std::vector<double>& gains, double power,
                                     double noise_power)
{
  if (gains.empty())
    throw std::invalid_argument("water_filling: no channels");
  if (!(power > 0.0) || !(noise_power > 0.0))
    throw std::invalid_argument("water_filling: powers must be positive");
  std::vector<double> floor(gains.size());
  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < gains.size(); ++i) {
    if (!(gains[i] >= 0.0))
      throw std::invalid_argument("water_filling: gains must be non-negative");
    floor[i] = gains[i] > 0.0 ? noise_power / (power * gains[i] * gains[i])
                              : std::numeric_limits<double>::infinity();
    lowest = std::min(lowest, floor[i]);
  }
  if (!std::isfinite(lowest))
    throw std::invalid_argument("water_filling: all gains are zero");

  auto filled = [&](double level) {
    double s = 0.0;
    for (double f : floor)
      if (level > f)
        s += level - f;
    return s;
  };
  double lo = lowest;
  double hi = lowest + 1.0; // filled(hi) >= 1
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi)
      break;
    (filled(mid) < 1.0 ? lo : hi) = mid;
  }
  const double level = hi;
  PowerAllocation out;
  out.factors.resize(gains.size());
  for (std::size_t i = 0; i < gains.size(); ++i)
    out.factors[i] = std::max(level - floor[i], 0.0);
  out.mu = 1.0 / (std::log(2.0) * level);
  return out;
}

/// Sum rate of parallel channels, sum_l log2(1 + P a_l^2 S_l / sigma^2).
inline double parallel_rate(const std::vector<double>& gains, const std::vector<double>& factors,
                            double power, double noise_power)
{
  if (gains.size() != factors.size())
    throw std::invalid_argument("parallel_rate: size mismatch");
  double r = 0.0;
  for (std::size_t i = 0; i < gains.size(); ++i)
    r += std::log2(1.0 + power * gains[i] * gains[i] * factors[i] / noise_power);
  return r;
}

struct HybridBeamformer
{
  CMatrix analog_precoder;  ///< N_t x N_RF^t
  CMatrix digital_precoder; ///< N_RF^t x N_s
  CMatrix analog_combiner;  ///< N_u x N_RF^u
  CMatrix digital_combiner; ///< N_RF^u x N_RF^u

  CMatrix precoder() const { return analog_precoder * digital_precoder; }
  CMatrix combiner() const { return analog_combiner * digital_combiner; }
};

struct RfChains
{
  int tx = 4;
  int rx = 4;
};

/// Closed-form transceiver: one steering column per IRS path, zero padding,
/// sqrt of the power factors on the digital diagonal, identity digital combiner.
inline HybridBeamformer build_beamformers(const std::vector<AngleEstimate>& estimates,
                                          const PowerAllocation& allocation,
                                          const ArraySpec& alice, const ArraySpec& bob,
                                          RfChains chains)
{
  const auto paths = static_cast<int>(estimates.size());
  if (paths > chains.tx || paths > chains.rx)
    throw std::invalid_argument("build_beamformers: more IRS paths than RF chains");
  if (allocation.factors.size() != estimates.size())
    throw std::invalid_argument("build_beamformers: allocation size mismatch");
  HybridBeamformer bf;
  bf.analog_precoder = CMatrix::Zero(alice.num_elements, chains.tx);
  bf.analog_combiner = CMatrix::Zero(bob.num_elements, chains.rx);
  bf.digital_precoder = CMatrix::Zero(chains.tx, paths);
  bf.digital_combiner = CMatrix::Identity(chains.rx, chains.rx);
  for (int l = 0; l < paths; ++l) {
    const AngleEstimate& e = estimates[static_cast<std::size_t>(l)];
    bf.analog_precoder.col(l) = steering_vector(alice, e.alice_aod);
    bf.analog_combiner.col(l) = steering_vector(bob, e.bob_aoa);
    bf.digital_precoder(l, l) = std::sqrt(allocation.factors[static_cast<std::size_t>(l)]);
  }
  return bf;
}

/// log2 det(I + P C^{-1} W^H H F F^H H^H W), C = sigma^2 W^H W. With Q an
/// orthonormal basis of range(W) this equals log2 det(I + P/sigma^2 Q^H H F F^H H^H Q),
/// which is what gets evaluated; zero or repeated combiner columns (e.g. two
/// paths estimated at the same grid angle) then drop out instead of making C singular.
inline double spectral_efficiency(const CMatrix& h, const CMatrix& precoder,
                                  const CMatrix& combiner, double power, double noise_power)
{
  if (h.cols() != precoder.rows() || h.rows() != combiner.rows())
    throw std::invalid_argument("spectral_efficiency: dimension mismatch");
  if (!(noise_power > 0.0))
    throw std::invalid_argument("spectral_efficiency: noise power must be positive");
  if (!(power > 0.0) || combiner.cols() == 0)
    return 0.0;
  Eigen::ColPivHouseholderQR<CMatrix> qr(combiner);
  qr.setThreshold(1e-10);
  const Eigen::Index rank = qr.rank();
  if (rank == 0)
    return 0.0;
  const CMatrix q = qr.householderQ() * CMatrix::Identity(combiner.rows(), rank);
  const CMatrix g = q.adjoint() * h * precoder;
  const CMatrix x = CMatrix::Identity(rank, rank) + (power / noise_power) * g * g.adjoint();
  Eigen::LLT<CMatrix> xc(x);
  if (xc.info() != Eigen::Success)
    throw std::runtime_error("spectral_efficiency: determinant factorization failed");
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < rank; ++i)
    logdet += 2.0 * std::log2(std::real(xc.matrixLLT()(i, i)));
  return logdet;
}

inline double spectral_efficiency(const CMatrix& h, const HybridBeamformer& bf, double power,
                                  double noise_power)
{
  return spectral_efficiency(h, bf.precoder(), bf.combiner(), power, noise_power);
}

/// Non-zero singular values of H.
inline std::vector<double> channel_singular_values(const CMatrix& h)
{
  Eigen::BDCSVD<CMatrix> svd(h);
  const RVector& sv = svd.singularValues();
  std::vector<double> out;
  if (sv.size() == 0)
    return out;
  const double cutoff = sv[0] * 1e-12;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cutoff && sv[i] > 0.0)
      out.push_back(sv[i]);
  return out;
}

/// Fully digital SVD precoding with water-filling; the rate upper bound for H.
inline double fdb_upper_bound(const CMatrix& h, double power, double noise_power)
{
  const std::vector<double> sv = channel_singular_values(h);
  if (sv.empty() || !(power > 0.0))
    return 0.0;
  const PowerAllocation alloc = water_filling(sv, power, noise_power);
  return parallel_rate(sv, alloc.factors, power, noise_power);
}

} // namespace irsthz

#endif // IRSTHZ_TRANSMISSION_HPP
