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

#ifndef IRSTHZ_HARNESS_CONFIG_HPP
#define IRSTHZ_HARNESS_CONFIG_HPP

#include "irsthz/channel.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace irsthz {

class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// All knobs of the simulated scene and of the experiments. Defaults are the
/// three-IRS indoor room at 0.3 THz with 32-element arrays.
struct ScenarioConfig
{
  // physics
  double frequency_hz = 0.3e12;
  double absorption_per_m = 0.0033;
  double noise_power_dbm = -80.0;
  double tx_gain_dbi = 18.0;
  double rx_gain_dbi = 18.0;
  double irs_element_gain_dbi = 0.0;
  double reflection_amplitude = 1.0;

  // arrays
  int num_tx_antennas = 32;
  int num_rx_antennas = 32;
  int num_irs_elements = 32;
  double terminal_spacing = 0.5;
  double irs_spacing = 0.25;
  int rf_chains_tx = 4;
  int rf_chains_rx = 4;

  // training
  double k_ratio = 2.0;     ///< K / N_a at Alice and Bob
  double irs_k_ratio = 2.0; ///< K_r / N_r for the IRS sweep
  int branching = 2;
  int pilot_repetitions = 10;

  // geometry (Alice and Bob on the x = terminal_x wall, IRSs on x = irs_x)
  double terminal_x = 0.0;
  double alice_y_min = 0.0;
  double alice_y_max = 5.0;
  double bob_y_min = 5.0;
  double bob_y_max = 10.0;
  double irs_x = 5.0;
  std::vector<double> irs_y = {4.0, 5.0, 6.0};

  // experiment control
  int trials = 10000;
  std::uint64_t seed = 1;
  int threads = 0; ///< 0 = hardware concurrency
  std::vector<double> power_dbm = {0.0, 10.0, 20.0, 30.0};
  std::vector<int> mp_antennas = {32, 64};
  std::vector<double> mp_k_ratios = {2.0, 3.0};
  double snr_db_min = -10.0;
  double snr_db_max = 100.0;
  double snr_db_step = 1.0;
  int codebook_probes = 721;
  std::vector<int> quant_antennas = {8, 16, 32, 64};
  std::vector<int> quant_k_ratios = {1, 2, 3, 4};

  int num_irs() const { return static_cast<int>(irs_y.size()); }
  int tx_beams() const { return beams_for(num_tx_antennas, k_ratio); }
  int rx_beams() const { return beams_for(num_rx_antennas, k_ratio); }
  int irs_sweep_size() const { return beams_for(num_irs_elements, irs_k_ratio); }
  double noise_power_w() const { return dbm_to_watts(noise_power_dbm); }

  PhysicalConstants constants() const
  {
    PhysicalConstants k;
    k.carrier_frequency = frequency_hz;
    k.absorption_coefficient = absorption_per_m;
    k.tx_gain = db_to_linear(tx_gain_dbi);
    k.rx_gain = db_to_linear(rx_gain_dbi);
    k.irs_element_gain = db_to_linear(irs_element_gain_dbi);
    k.reflection_amplitude = reflection_amplitude;
    return k;
  }

  static int beams_for(int elements, double ratio)
  {
    const double k = ratio * elements;
    const auto rounded = static_cast<int>(std::lround(k));
    if (std::abs(k - rounded) > 1e-9)
      throw ConfigError("beam ratio " + std::to_string(ratio) + " times " +
                        std::to_string(elements) + " is not an integer");
    return rounded;
  }

  void validate() const
  {
    auto require = [](bool ok, const std::string& msg) {
      if (!ok)
        throw ConfigError(msg);
    };
    require(frequency_hz > 0.0, "frequency_hz must be positive");
    require(absorption_per_m >= 0.0, "absorption_per_m must be non-negative");
    require(reflection_amplitude >= 0.0 && reflection_amplitude <= 1.0,
            "reflection_amplitude must be in [0,1]");
    require(num_tx_antennas >= 1 && num_rx_antennas >= 1 && num_irs_elements >= 1,
            "antenna counts must be >= 1");
    require(terminal_spacing > 0.0 && irs_spacing > 0.0, "spacings must be positive");
    require(std::abs(terminal_spacing - 0.5) < 1e-15,
            "terminal_spacing must be 0.5 (beam grids assume half-wavelength)");
    require(k_ratio >= 1.0 && irs_k_ratio > 0.0, "k_ratio must be >= 1, irs_k_ratio > 0");
    require(branching >= 2, "branching must be >= 2");
    require(pilot_repetitions >= 1, "pilot_repetitions must be >= 1");
    require(alice_y_min <= alice_y_max && bob_y_min <= bob_y_max, "y ranges must be ordered");
    require(irs_x != terminal_x, "IRS wall must differ from terminal wall");
    require(!irs_y.empty(), "at least one IRS is required");
    for (std::size_t i = 0; i < irs_y.size(); ++i)
      for (std::size_t j = i + 1; j < irs_y.size(); ++j)
        require(irs_y[i] != irs_y[j], "IRS positions must be distinct");
    require(num_irs() <= rf_chains_tx && num_irs() <= rf_chains_rx,
            "number of IRSs exceeds RF chains");
    require(trials >= 1, "trials must be >= 1");
    require(threads >= 0, "threads must be >= 0");
    require(!power_dbm.empty(), "power_dbm must not be empty");
    require(snr_db_step > 0.0 && snr_db_max >= snr_db_min, "invalid SNR grid");
    require(codebook_probes >= 2, "codebook_probes must be >= 2");
    tx_beams();
    rx_beams();
    irs_sweep_size();
  }

  std::vector<double> snr_grid_db() const
  {
    std::vector<double> g;
    const auto n = static_cast<int>(std::floor((snr_db_max - snr_db_min) / snr_db_step + 1e-9));
    for (int i = 0; i <= n; ++i)
      g.push_back(snr_db_min + i * snr_db_step);
    return g;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text)
{
  text = trim(text);
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("invalid value '" + std::string(text) + "' for key '" + std::string(key) +
                      "'");
  return value;
}

template <class T>
std::vector<T> parse_list(std::string_view key, std::string_view text)
{
  std::vector<T> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                         : comma - start);
    out.push_back(parse_number<T>(key, item));
    if (comma == std::string_view::npos)
      break;
    start = comma + 1;
  }
  return out;
}

} // namespace detail

/// Applies one `key = value` assignment. Unknown keys are errors.
inline void apply_setting(ScenarioConfig& c, std::string_view key, std::string_view value)
{
  using detail::parse_list;
  using detail::parse_number;
  key = detail::trim(key);
  value = detail::trim(value);
  const std::map<std::string_view, std::function<void()>> setters = {
      {"frequency_hz", [&] { c.frequency_hz = parse_number<double>(key, value); }},
      {"absorption_per_m", [&] { c.absorption_per_m = parse_number<double>(key, value); }},
      {"noise_power_dbm", [&] { c.noise_power_dbm = parse_number<double>(key, value); }},
      {"tx_gain_dbi", [&] { c.tx_gain_dbi = parse_number<double>(key, value); }},
      {"rx_gain_dbi", [&] { c.rx_gain_dbi = parse_number<double>(key, value); }},
      {"irs_element_gain_dbi", [&] { c.irs_element_gain_dbi = parse_number<double>(key, value); }},
      {"reflection_amplitude", [&] { c.reflection_amplitude = parse_number<double>(key, value); }},
      {"num_tx_antennas", [&] { c.num_tx_antennas = parse_number<int>(key, value); }},
      {"num_rx_antennas", [&] { c.num_rx_antennas = parse_number<int>(key, value); }},
      {"num_irs_elements", [&] { c.num_irs_elements = parse_number<int>(key, value); }},
      {"terminal_spacing", [&] { c.terminal_spacing = parse_number<double>(key, value); }},
      {"irs_spacing", [&] { c.irs_spacing = parse_number<double>(key, value); }},
      {"rf_chains_tx", [&] { c.rf_chains_tx = parse_number<int>(key, value); }},
      {"rf_chains_rx", [&] { c.rf_chains_rx = parse_number<int>(key, value); }},
      {"k_ratio", [&] { c.k_ratio = parse_number<double>(key, value); }},
      {"irs_k_ratio", [&] { c.irs_k_ratio = parse_number<double>(key, value); }},
      {"branching", [&] { c.branching = parse_number<int>(key, value); }},
      {"pilot_repetitions", [&] { c.pilot_repetitions = parse_number<int>(key, value); }},
      {"terminal_x", [&] { c.terminal_x = parse_number<double>(key, value); }},
      {"alice_y_min", [&] { c.alice_y_min = parse_number<double>(key, value); }},
      {"alice_y_max", [&] { c.alice_y_max = parse_number<double>(key, value); }},
      {"bob_y_min", [&] { c.bob_y_min = parse_number<double>(key, value); }},
      {"bob_y_max", [&] { c.bob_y_max = parse_number<double>(key, value); }},
      {"irs_x", [&] { c.irs_x = parse_number<double>(key, value); }},
      {"irs_y", [&] { c.irs_y = parse_list<double>(key, value); }},
      {"trials", [&] { c.trials = parse_number<int>(key, value); }},
      {"seed", [&] { c.seed = parse_number<std::uint64_t>(key, value); }},
      {"threads", [&] { c.threads = parse_number<int>(key, value); }},
      {"power_dbm", [&] { c.power_dbm = parse_list<double>(key, value); }},
      {"mp_antennas", [&] { c.mp_antennas = parse_list<int>(key, value); }},
      {"mp_k_ratios", [&] { c.mp_k_ratios = parse_list<double>(key, value); }},
      {"snr_db_min", [&] { c.snr_db_min = parse_number<double>(key, value); }},
      {"snr_db_max", [&] { c.snr_db_max = parse_number<double>(key, value); }},
      {"snr_db_step", [&] { c.snr_db_step = parse_number<double>(key, value); }},
      {"codebook_probes", [&] { c.codebook_probes = parse_number<int>(key, value); }},
      {"quant_antennas", [&] { c.quant_antennas = parse_list<int>(key, value); }},
      {"quant_k_ratios", [&] { c.quant_k_ratios = parse_list<int>(key, value); }},
  };
  const auto it = setters.find(key);
  if (it == setters.end())
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  it->second();
}

/// Flat `key = value` text; `#` starts a comment, blank lines are ignored.
inline ScenarioConfig parse_config(std::istream& in, ScenarioConfig base = {})
{
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos)
      view = view.substr(0, hash);
    view = detail::trim(view);
    if (view.empty())
      continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    try {
      apply_setting(base, view.substr(0, eq), view.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

inline ScenarioConfig load_config(const std::string& path, ScenarioConfig base = {})
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, std::move(base));
}

} // namespace irsthz

#endif // IRSTHZ_HARNESS_CONFIG_HPP
