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

#include "irsthz/harness/config.hpp"
#include "irsthz/harness/csv.hpp"
#include "irsthz/harness/experiments.hpp"
#include "irsthz/harness/trace.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

struct CommonOptions
{
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string out;
  std::vector<std::string> overrides;
  int trace_trial = 0;
};

void add_common(CLI::App* cmd, CommonOptions& o)
{
  cmd->add_option("--config", o.config_path, "flat key = value configuration file");
  cmd->add_option("--seed", o.seed, "master seed (overrides the config)");
  cmd->add_option("--trials", o.trials, "Monte Carlo trials (overrides the config)");
  cmd->add_option("--out", o.out, "output file (default: stdout)");
  cmd->add_option("--set", o.overrides, "extra key=value override, repeatable");
}

irsthz::ScenarioConfig resolve(const CommonOptions& o)
{
  irsthz::ScenarioConfig c;
  if (!o.config_path.empty())
    c = irsthz::load_config(o.config_path);
  for (const std::string& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw irsthz::ConfigError("--set expects key=value, got '" + kv + "'");
    irsthz::apply_setting(c, std::string_view(kv).substr(0, eq),
                          std::string_view(kv).substr(eq + 1));
  }
  if (o.seed)
    c.seed = *o.seed;
  if (o.trials)
    c.trials = *o.trials;
  c.validate();
  return c;
}

template <class Emit>
void with_output(const std::string& path, Emit&& emit)
{
  if (path.empty()) {
    emit(std::cout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw std::runtime_error("cannot open output file '" + path + "'");
  emit(f);
  if (!f)
    throw std::runtime_error("failed writing '" + path + "'");
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"IRS-assisted THz MIMO beam training and transmission simulator"};
  app.require_subcommand(1);
  CommonOptions opts;

  auto* codebook = app.add_subcommand("codebook", "export hierarchical codebook beam patterns");
  auto* mp = app.add_subcommand("mp-curve", "misalignment probability versus SNR");
  auto* rate = app.add_subcommand("rate-curve", "spectral efficiency versus transmit power");
  auto* estimate = app.add_subcommand("estimate", "single-trial JSON trace of the estimation");
  auto* quant = app.add_subcommand("quant-table", "worst/average quantization error grid");
  for (auto* cmd : {codebook, mp, rate, estimate, quant})
    add_common(cmd, opts);
  estimate->add_option("--trial", opts.trace_trial, "trial index to trace")->check(
      CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    const irsthz::ScenarioConfig cfg = resolve(opts);
    if (codebook->parsed()) {
      const auto samples = irsthz::codebook_patterns(cfg);
      with_output(opts.out, [&](std::ostream& o) { irsthz::write_codebook_csv(o, samples); });
    } else if (mp->parsed()) {
      const auto points = irsthz::run_mp_experiment(cfg);
      with_output(opts.out, [&](std::ostream& o) { irsthz::write_mp_csv(o, points); });
    } else if (rate->parsed()) {
      const irsthz::RateResult result = irsthz::run_rate_experiment(cfg);
      for (const irsthz::RatePoint& p : result.points)
        if (p.perfect_above_upper || p.no_irs_above_upper)
          std::cerr << "warning: at " << p.power_dbm << " dBm, " << p.perfect_above_upper
                    << " trials exceed the upper bound with the proposed design and "
                    << p.no_irs_above_upper << " with random IRSs\n";
      if (result.resampled > 0)
        std::cerr << "note: " << result.resampled << " degenerate geometries resampled\n";
      with_output(opts.out, [&](std::ostream& o) { irsthz::write_rate_csv(o, result); });
    } else if (estimate->parsed()) {
      const irsthz::RateSimulator sim(cfg);
      const nlohmann::json trace = sim.run_trial(opts.trace_trial);
      with_output(opts.out, [&](std::ostream& o) { o << trace.dump(2) << '\n'; });
    } else if (quant->parsed()) {
      const auto rows = irsthz::quantization_table(cfg);
      with_output(opts.out, [&](std::ostream& o) { irsthz::write_quant_csv(o, rows); });
    }
  } catch (const irsthz::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
