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

#ifndef IRSTHZ_TRAINING_HPP
#define IRSTHZ_TRAINING_HPP

#include "irsthz/channel.hpp"
#include "irsthz/codebook.hpp"
#include "irsthz/irs_control.hpp"
#include "irsthz/random.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace irsthz {

struct MeasurementModel
{
  double transmit_power = 1.0; ///< P [W]
  double noise_power = 1.0;    ///< sigma_n^2 [W]
  std::uint64_t rng_seed = 1;

  void validate() const
  {
    if (!(transmit_power >= 0.0) || !(noise_power >= 0.0))
      throw std::invalid_argument("MeasurementModel: powers must be non-negative");
  }
};

/// Produces received energies |sqrt(P) w^H H f + w^H n|^2 for a unit symbol.
/// For a single slot w^H n ~ CN(0, sigma^2 ||w||^2), which is what gets drawn.
class Sounder
{
public:
  explicit Sounder(const MeasurementModel& model) : model_(model), rng_(model.rng_seed)
  {
    model_.validate();
  }

  Sounder(const MeasurementModel& model, std::uint64_t seed) : model_(model), rng_(seed)
  {
    model_.validate();
  }

  /// One slot given the noiseless combined response w^H H f.
  double measure(cplx response, double rx_norm_sq = 1.0)
  {
    ++count_;
    cplx y = std::sqrt(model_.transmit_power) * response;
    if (model_.noise_power > 0.0)
      y += rng_.complex_normal(model_.noise_power * rx_norm_sq);
    return std::norm(y);
  }

  double measure_power(const CVector& tx, const CVector& rx, const CMatrix& h, int trials = 1)
  {
    if (h.cols() != tx.size() || h.rows() != rx.size())
      throw std::invalid_argument("measure_power: dimension mismatch");
    if (trials < 1)
      throw std::invalid_argument("measure_power: trials must be >= 1");
    const cplx response = rx.dot(h * tx);
    const double rx_norm_sq = rx.squaredNorm();
    double acc = 0.0;
    for (int t = 0; t < trials; ++t)
      acc += measure(response, rx_norm_sq);
    return acc / trials;
  }

  const MeasurementModel& model() const { return model_; }
  long long count() const { return count_; }

private:
  MeasurementModel model_;
  Rng rng_;
  long long count_ = 0;
};

struct SearchResult
{
  int leaf = -1;
  int measurements = 0;
  std::vector<int> path; ///< chosen slot per stage
};

/// Stage-by-stage descent: measure every live child of the current node and
/// follow the strongest. Scores are measured power times the squared norm of
/// the raw projection, i.e. gains on the scale where descendant leaves sit at 1.
/// Ties go to the lowest index.
template <class Oracle>
SearchResult hierarchical_search(const HierarchicalCodebook& cb, Oracle&& measure)
{
  SearchResult res;
  std::vector<int> slots = cb.roots();
  for (int s = 1; s <= cb.num_stages(); ++s) {
    int best = -1;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int n : slots) {
      const auto& c = cb.candidate(s, n);
      if (!c)
        continue;
      const double score = measure(c->beam) * c->raw_norm * c->raw_norm;
      ++res.measurements;
      if (score > best_score) {
        best_score = score;
        best = n;
      }
    }
    if (best < 0)
      throw std::logic_error("hierarchical_search: all children are null");
    res.path.push_back(best);
    if (s < cb.num_stages())
      slots = cb.children(s, best);
    else
      res.leaf = best;
  }
  return res;
}

/// Reference scan over all K leaves.
template <class Oracle>
SearchResult exhaustive_search(const HierarchicalCodebook& cb, Oracle&& measure)
{
  SearchResult res;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < cb.num_leaves(); ++i) {
    const auto& c = cb.candidate(cb.num_stages(), i);
    const double score = measure(c->beam);
    ++res.measurements;
    if (score > best_score) {
      best_score = score;
      res.leaf = i;
    }
  }
  res.path.push_back(res.leaf);
  return res;
}

/// Estimated angles and composite loss for one IRS.
struct AngleEstimate
{
  double irs_aoa = 0.0;   ///< hat phi_{R,M}
  double irs_aod = 0.0;   ///< hat phi_{R,N}
  double alice_aod = 0.0; ///< hat phi_{A,M}
  double bob_aoa = 0.0;   ///< hat phi_{B,N}
  double composite_loss = 0.0;
};

/// Everything the protocol needs besides the measurement noise.
struct TrainingContext
{
  const CascadeChannel& channel;
  const PhysicalConstants& constants;
  const HierarchicalCodebook& alice_codebook;
  const HierarchicalCodebook& bob_codebook;
  std::vector<double> irs_sweep; ///< return-mode directions swept by every IRS
};

/// Directions uniform in sine for the IRS return-mode sweep.
inline std::vector<double> irs_sweep_directions(int num_directions)
{
  return uniform_sine_grid(num_directions);
}

// a(-phi) = conj(a(phi)); the conjugate-response side of a reciprocal
// measurement reports the mirrored angle.
inline double conjugate_direction(double angle) { return -angle; }

struct Phase1Result
{
  double irs_aoa = 0.0; ///< hat phi_{R,M}
  double irs_aod = 0.0; ///< hat phi_{R,N}
  int alice_slot = -1;
  int bob_slot = -1;
  int slots_alice = 0;
  int slots_bob = 0;
};

namespace detail {

// Round-trip response at the omni element: (A e1)^T Theta (A e1) scaled by the
// cascade gains, where A e1 is the wave the omni element puts on the IRS.
inline cplx round_trip_response(const CVector& at_irs, const PhaseShiftMatrix& theta,
                                double gain)
{
  return gain * theta.bilinear(at_irs.conjugate(), at_irs);
}

inline int strongest_slot(const std::vector<double>& powers)
{
  int best = 0;
  for (int i = 1; i < static_cast<int>(powers.size()); ++i)
    if (powers[static_cast<std::size_t>(i)] > powers[static_cast<std::size_t>(best)])
      best = i;
  return best;
}

} // namespace detail

/// Phase 1: Bob silent, Alice omni full-duplex while IRS l sweeps return mode
/// over the predefined slots; then the roles of Alice and Bob swap.
inline Phase1Result phase1(const TrainingContext& ctx, std::size_t irs_index, Sounder& sounder)
{
  const IrsPath& p = ctx.channel.paths.at(irs_index);
  const ArraySpec& irs = ctx.channel.irs;
  const double beta = ctx.constants.reflection_amplitude;
  const double gain = p.eta * ctx.constants.tx_gain * ctx.constants.rx_gain;

  const CVector from_alice = p.alice_irs.times(omni_beam(ctx.channel.alice).coefficients);
  const CVector from_bob = p.irs_bob.transpose_times(omni_beam(ctx.channel.bob).coefficients);

  std::vector<double> alice_powers;
  std::vector<double> bob_powers;
  alice_powers.reserve(ctx.irs_sweep.size());
  bob_powers.reserve(ctx.irs_sweep.size());
  for (double dir : ctx.irs_sweep) {
    const PhaseShiftMatrix theta = return_mode(irs, dir, beta);
    alice_powers.push_back(sounder.measure(detail::round_trip_response(from_alice, theta, gain)));
  }
  for (double dir : ctx.irs_sweep) {
    const PhaseShiftMatrix theta = return_mode(irs, dir, beta);
    bob_powers.push_back(sounder.measure(detail::round_trip_response(from_bob, theta, gain)));
  }

  Phase1Result r;
  r.alice_slot = detail::strongest_slot(alice_powers);
  r.bob_slot = detail::strongest_slot(bob_powers);
  r.irs_aoa = ctx.irs_sweep[static_cast<std::size_t>(r.alice_slot)];
  r.irs_aod = conjugate_direction(ctx.irs_sweep[static_cast<std::size_t>(r.bob_slot)]);
  r.slots_alice = static_cast<int>(alice_powers.size());
  r.slots_bob = static_cast<int>(bob_powers.size());
  return r;
}

struct Phase2Result
{
  double bob_aoa = 0.0;   ///< hat phi_{B,N}
  double alice_aod = 0.0; ///< hat phi_{A,M}
  int bob_leaf = -1;
  int alice_leaf = -1;
  int measurements_bob = 0;
  int measurements_alice = 0;
};

/// Phase 2: IRS l bridges the link in direction mode; Alice transmits omni
/// while Bob searches his codebook, then Bob transmits omni on the reciprocal
/// channel while Alice searches.
inline Phase2Result phase2(const TrainingContext& ctx, std::size_t irs_index,
                           const Phase1Result& first, Sounder& sounder)
{
  const PhaseShiftMatrix theta = direction_mode(ctx.channel.irs, first.irs_aoa, first.irs_aod,
                                                ctx.constants.reflection_amplitude);
  const CMatrix h = assemble_single(ctx.channel, irs_index, theta, ctx.constants);

  const CVector downlink = h * omni_beam(ctx.channel.alice).coefficients;
  const CVector uplink = h.transpose() * omni_beam(ctx.channel.bob).coefficients;

  const SearchResult bob = hierarchical_search(ctx.bob_codebook, [&](const BeamVector& w) {
    return sounder.measure(w.coefficients.dot(downlink), w.coefficients.squaredNorm());
  });
  const SearchResult alice = hierarchical_search(ctx.alice_codebook, [&](const BeamVector& w) {
    return sounder.measure(w.coefficients.dot(uplink), w.coefficients.squaredNorm());
  });

  Phase2Result r;
  r.bob_leaf = bob.leaf;
  r.alice_leaf = alice.leaf;
  r.bob_aoa = ctx.bob_codebook.leaf_direction(bob.leaf);
  r.alice_aod = conjugate_direction(ctx.alice_codebook.leaf_direction(alice.leaf));
  r.measurements_bob = bob.measurements;
  r.measurements_alice = alice.measurements;
  return r;
}

struct SlotCounts
{
  int phase1 = 0;
  int phase2 = 0;
  int composite = 0;

  int total() const { return phase1 + phase2 + composite; }
};

struct ChannelEstimate
{
  std::vector<AngleEstimate> paths;
  std::vector<Phase1Result> phase1;
  std::vector<Phase2Result> phase2;
  SlotCounts slots;
};

/// Runs both phases for every IRS in turn; composite losses are filled in later
/// once the IRSs are configured for transmission.
inline ChannelEstimate estimate_angles(const TrainingContext& ctx, Sounder& sounder)
{
  ChannelEstimate est;
  for (std::size_t l = 0; l < ctx.channel.num_irs(); ++l) {
    const Phase1Result p1 = phase1(ctx, l, sounder);
    const Phase2Result p2 = phase2(ctx, l, p1, sounder);
    est.paths.push_back({p1.irs_aoa, p1.irs_aod, p2.alice_aod, p2.bob_aoa, 0.0});
    est.phase1.push_back(p1);
    est.phase2.push_back(p2);
    est.slots.phase1 += p1.slots_alice + p1.slots_bob;
    est.slots.phase2 += p2.measurements_bob + p2.measurements_alice;
  }
  return est;
}

struct MpPoint
{
  double snr_db = 0.0;
  double mp = 0.0;
  int trials = 0;
  int num_elements = 0;
  int num_beams = 0;
};

/// Misalignment probability of the bottom-stage exhaustive scan versus
/// per-element SNR. Each trial draws one uniform path angle and one unit normal
/// per leaf from its own seed (master seed, trial index); the same draws are
/// reused at every SNR point.
inline std::vector<MpPoint> misalignment_curve(int num_elements, int num_beams,
                                               const std::vector<double>& snr_grid_db,
                                               int trials, std::uint64_t seed)
{
  if (trials < 1)
    throw std::invalid_argument("misalignment_curve: trials must be >= 1");
  const ArraySpec spec{num_elements, 0.5, 0.0};
  const BeamGrid grid = grid_directions(spec, num_beams);
  CMatrix leaves(num_elements, num_beams);
  for (int i = 0; i < num_beams; ++i)
    leaves.col(i) = steering_vector(spec, grid.directions[static_cast<std::size_t>(i)]);

  std::vector<double> sigma(snr_grid_db.size());
  for (std::size_t j = 0; j < snr_grid_db.size(); ++j)
    sigma[j] = std::pow(10.0, -snr_grid_db[j] / 20.0);

  std::vector<long long> misses(snr_grid_db.size(), 0);
  std::vector<cplx> noise(static_cast<std::size_t>(num_beams));
  const double array_gain = std::sqrt(static_cast<double>(num_elements));
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, {0x6d70ULL, static_cast<std::uint64_t>(t)}));
    const double angle = rng.uniform(-0.5 * pi, 0.5 * pi);
    const CVector h = array_gain * steering_vector(spec, angle);
    const CVector response = leaves.adjoint() * h;
    for (cplx& z : noise)
      z = rng.complex_normal(1.0);

    Eigen::Index best = 0;
    response.cwiseAbs2().maxCoeff(&best);
    for (std::size_t j = 0; j < sigma.size(); ++j) {
      int chosen = 0;
      double chosen_power = -1.0;
      for (int i = 0; i < num_beams; ++i) {
        const double pw = std::norm(response[i] + sigma[j] * noise[static_cast<std::size_t>(i)]);
        if (pw > chosen_power) {
          chosen_power = pw;
          chosen = i;
        }
      }
      if (chosen != best)
        ++misses[j];
    }
  }

  std::vector<MpPoint> out;
  for (std::size_t j = 0; j < snr_grid_db.size(); ++j)
    out.push_back({snr_grid_db[j], static_cast<double>(misses[j]) / trials, trials, num_elements,
                   num_beams});
  return out;
}

} // namespace irsthz

#endif // IRSTHZ_TRAINING_HPP
