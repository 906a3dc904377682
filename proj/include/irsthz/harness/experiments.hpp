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

#ifndef IRSTHZ_HARNESS_EXPERIMENTS_HPP
#define IRSTHZ_HARNESS_EXPERIMENTS_HPP

#include "irsthz/codebook.hpp"
#include "irsthz/harness/config.hpp"
#include "irsthz/harness/scenario.hpp"
#include "irsthz/quantization.hpp"
#include "irsthz/training.hpp"
#include "irsthz/transmission.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace irsthz {

namespace stream {
constexpr std::uint64_t rate = 0x72617465ULL;
constexpr std::uint64_t geometry = 0;
constexpr std::uint64_t random_irs = 1;
constexpr std::uint64_t training = 2;
} // namespace stream

/// Runs body(t) for t in [0, trials) on a pool of workers. Each trial must only
/// depend on its index, so results are independent of scheduling.
inline void for_each_trial(int trials, int threads, const std::function<void(int)>& body)
{
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(trials, 1));
  if (workers == 1) {
    for (int t = 0; t < trials; ++t)
      body(t);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int t = next++; t < trials; t = next++) {
        try {
          body(t);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure)
            failure = std::current_exception();
          next = trials;
        }
      }
    });
  for (std::thread& th : pool)
    th.join();
  if (failure)
    std::rethrow_exception(failure);
}

/// Fully digital rate of a channel built with random IRS phases.
inline double non_irs_benchmark(const CMatrix& h_random_irs, double power, double noise_power)
{
  return fdb_upper_bound(h_random_irs, power, noise_power);
}

/// Rates of one trial at one transmit power.
struct PowerRates
{
  double power_dbm = 0.0;
  double proposed_estimated = 0.0;
  double proposed_perfect = 0.0;
  double fdb_upper = 0.0;
  double no_irs = 0.0;
  double parallel_perfect = 0.0; ///< closed-form parallel-channel rate with exact gains
  std::vector<AngleEstimate> estimates;
  SlotCounts slots;
};

struct TrialRecord
{
  int trial = 0;
  std::uint64_t seed = 0;
  Geometry geometry;
  int resampled = 0;
  std::vector<PathAngles> true_angles;
  std::vector<double> true_composite_loss;
  std::vector<PowerRates> rates;
};

/// Everything shared read-only by the trials of one rate experiment.
class RateSimulator
{
public:
  explicit RateSimulator(ScenarioConfig config)
      : config_(std::move(config)),
        constants_(config_.constants()),
        alice_cb_((config_.validate(), alice_array(config_)), config_.branching,
                  config_.tx_beams()),
        bob_cb_(bob_array(config_), config_.branching, config_.rx_beams()),
        sweep_(irs_sweep_directions(config_.irs_sweep_size())),
        noise_(config_.noise_power_w())
  {
  }

  const ScenarioConfig& config() const { return config_; }
  const HierarchicalCodebook& alice_codebook() const { return alice_cb_; }
  const HierarchicalCodebook& bob_codebook() const { return bob_cb_; }

  std::uint64_t trial_seed(int trial) const
  {
    return derive_seed(config_.seed, {stream::rate, static_cast<std::uint64_t>(trial)});
  }

  TrialRecord run_trial(int trial) const
  {
    const std::uint64_t seed = trial_seed(trial);
    TrialRecord rec;
    rec.trial = trial;
    rec.seed = seed;

    Rng geo(derive_seed(seed, {stream::geometry}));
    const Scenario sc = sample_scenario(config_, geo);
    rec.geometry = sc.geometry;
    rec.resampled = sc.resampled;
    const CascadeChannel& ch = sc.channel;
    const std::size_t paths = ch.num_irs();
    const double beta = constants_.reflection_amplitude;

    std::vector<AngleEstimate> exact;
    std::vector<double> exact_loss;
    for (const IrsPath& p : ch.paths) {
      const PathAngles& a = p.angles;
      exact_loss.push_back(exact_composite_loss(p, constants_));
      exact.push_back({a.irs_aoa, a.irs_aod, a.alice_aod, a.bob_aoa, exact_loss.back()});
      rec.true_angles.push_back(a);
    }
    rec.true_composite_loss = exact_loss;
    const std::vector<PhaseShiftMatrix> exact_irs = design_irs(exact, ch.irs, beta, paths);
    const CMatrix h_exact = assemble(ch, exact_irs, constants_);

    Rng irs_rng(derive_seed(seed, {stream::random_irs}));
    std::vector<PhaseShiftMatrix> random_irs;
    for (std::size_t l = 0; l < paths; ++l)
      random_irs.push_back(random_phases(ch.irs.num_elements, beta, irs_rng));
    const CMatrix h_random = assemble(ch, random_irs, constants_);

    const RfChains chains{config_.rf_chains_tx, config_.rf_chains_rx};
    const TrainingContext ctx{ch, constants_, alice_cb_, bob_cb_, sweep_};
    for (std::size_t pi_ = 0; pi_ < config_.power_dbm.size(); ++pi_) {
      PowerRates r;
      r.power_dbm = config_.power_dbm[pi_];
      const double power = dbm_to_watts(r.power_dbm);

      if (beta > 0.0) {
        const PowerAllocation alloc = water_filling(exact_loss, power, noise_);
        const HybridBeamformer bf = build_beamformers(exact, alloc, ch.alice, ch.bob, chains);
        r.proposed_perfect = spectral_efficiency(h_exact, bf, power, noise_);
        r.parallel_perfect = parallel_rate(exact_loss, alloc.factors, power, noise_);
      }
      r.fdb_upper = fdb_upper_bound(h_exact, power, noise_);
      r.no_irs = non_irs_benchmark(h_random, power, noise_);

      Sounder sounder({power, noise_, 0},
                      derive_seed(seed, {stream::training, static_cast<std::uint64_t>(pi_)}));
      ChannelEstimate est = estimate_angles(ctx, sounder);
      const std::vector<PhaseShiftMatrix> irs = design_irs(est.paths, ch.irs, beta, paths);
      const long long before = sounder.count();
      std::vector<double> gains;
      for (std::size_t l = 0; l < paths; ++l) {
        est.paths[l].composite_loss = estimate_composite_loss(
            ch, constants_, l, irs[l], est.paths[l], sounder, config_.pilot_repetitions);
        gains.push_back(est.paths[l].composite_loss);
      }
      est.slots.composite = static_cast<int>(sounder.count() - before);
      if (std::any_of(gains.begin(), gains.end(), [](double g) { return g > 0.0; })) {
        const PowerAllocation alloc = water_filling(gains, power, noise_);
        const HybridBeamformer bf = build_beamformers(est.paths, alloc, ch.alice, ch.bob, chains);
        r.proposed_estimated = spectral_efficiency(assemble(ch, irs, constants_), bf, power, noise_);
      }
      r.estimates = est.paths;
      r.slots = est.slots;
      rec.rates.push_back(std::move(r));
    }
    return rec;
  }

private:
  ScenarioConfig config_;
  PhysicalConstants constants_;
  HierarchicalCodebook alice_cb_;
  HierarchicalCodebook bob_cb_;
  std::vector<double> sweep_;
  double noise_;
};

/// Trial-averaged curves at one transmit power.
struct RatePoint
{
  double power_dbm = 0.0;
  double proposed_estimated = 0.0;
  double proposed_perfect = 0.0;
  double fdb_upper = 0.0;
  double no_irs = 0.0;
  double parallel_perfect = 0.0;
  double max_parallel_rel_error = 0.0; ///< max over trials |perfect - parallel| / parallel
  int trials = 0;
  int perfect_above_upper = 0;  ///< per-trial dominance violations (tolerance 1e-9 relative)
  int no_irs_above_upper = 0;
};

struct RateResult
{
  std::vector<RatePoint> points;
  int resampled = 0;
};

inline RateResult run_rate_experiment(const ScenarioConfig& config,
                                      std::vector<TrialRecord>* records = nullptr)
{
  const RateSimulator sim(config);
  std::vector<TrialRecord> all(static_cast<std::size_t>(config.trials));
  for_each_trial(config.trials, config.threads,
                 [&](int t) { all[static_cast<std::size_t>(t)] = sim.run_trial(t); });

  RateResult out;
  for (std::size_t p = 0; p < config.power_dbm.size(); ++p) {
    RatePoint pt;
    pt.power_dbm = config.power_dbm[p];
    pt.trials = config.trials;
    for (const TrialRecord& rec : all) {
      const PowerRates& r = rec.rates[p];
      pt.proposed_estimated += r.proposed_estimated;
      pt.proposed_perfect += r.proposed_perfect;
      pt.fdb_upper += r.fdb_upper;
      pt.no_irs += r.no_irs;
      pt.parallel_perfect += r.parallel_perfect;
      if (r.parallel_perfect > 0.0)
        pt.max_parallel_rel_error =
            std::max(pt.max_parallel_rel_error,
                     std::abs(r.proposed_perfect - r.parallel_perfect) / r.parallel_perfect);
      const double slack = 1e-9 * std::max(1.0, r.fdb_upper);
      if (r.proposed_perfect > r.fdb_upper + slack)
        ++pt.perfect_above_upper;
      if (r.no_irs > r.fdb_upper + slack)
        ++pt.no_irs_above_upper;
    }
    const double n = config.trials;
    pt.proposed_estimated /= n;
    pt.proposed_perfect /= n;
    pt.fdb_upper /= n;
    pt.no_irs /= n;
    pt.parallel_perfect /= n;
    out.points.push_back(pt);
  }
  for (const TrialRecord& rec : all)
    out.resampled += rec.resampled;
  if (records)
    *records = std::move(all);
  return out;
}

/// Misalignment-probability curves for every (N_a, K/N_a) pair in the config.
inline std::vector<MpPoint> run_mp_experiment(const ScenarioConfig& config)
{
  config.validate();
  std::vector<std::pair<int, int>> settings;
  for (int n : config.mp_antennas)
    for (double ratio : config.mp_k_ratios)
      settings.emplace_back(n, ScenarioConfig::beams_for(n, ratio));
  std::vector<std::vector<MpPoint>> curves(settings.size());
  const std::vector<double> grid = config.snr_grid_db();
  for_each_trial(static_cast<int>(settings.size()), config.threads, [&](int i) {
    const auto [n, k] = settings[static_cast<std::size_t>(i)];
    curves[static_cast<std::size_t>(i)] = misalignment_curve(n, k, grid, config.trials, config.seed);
  });
  std::vector<MpPoint> out;
  for (const auto& c : curves)
    out.insert(out.end(), c.begin(), c.end());
  return out;
}

struct PatternSample
{
  int stage = 0;
  int index = 0;
  double probe_angle = 0.0;
  double gain = 0.0;
};

/// Gain of every live codebook beam of Alice's codebook over a uniform angle grid.
inline std::vector<PatternSample> codebook_patterns(const ScenarioConfig& config)
{
  config.validate();
  const ArraySpec spec = alice_array(config);
  const HierarchicalCodebook cb(spec, config.branching, config.tx_beams());
  std::vector<PatternSample> out;
  const int probes = config.codebook_probes;
  for (int s = 1; s <= cb.num_stages(); ++s)
    for (int n = 0; n < static_cast<int>(cb.stage_size(s)); ++n) {
      const auto& c = cb.candidate(s, n);
      if (!c)
        continue;
      for (int i = 0; i < probes; ++i) {
        const double angle = -0.5 * pi + pi * i / (probes - 1);
        out.push_back({s, n, angle, beam_gain(c->beam, spec, angle)});
      }
    }
  return out;
}

struct QuantizationRow
{
  int num_elements = 0;
  int num_beams = 0;
  double worst = 0.0;
  double average = 0.0;
};

inline std::vector<QuantizationRow> quantization_table(const ScenarioConfig& config)
{
  std::vector<QuantizationRow> out;
  for (int n : config.quant_antennas)
    for (int ratio : config.quant_k_ratios) {
      const int k = n * ratio;
      out.push_back({n, k, worst_error(n, k), average_error(n, k)});
    }
  return out;
}

} // namespace irsthz

#endif // IRSTHZ_HARNESS_EXPERIMENTS_HPP
