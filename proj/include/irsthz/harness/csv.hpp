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

#ifndef IRSTHZ_HARNESS_CSV_HPP
#define IRSTHZ_HARNESS_CSV_HPP

#include "irsthz/harness/experiments.hpp"

#include <charconv>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

namespace irsthz {

/// Shortest round-trip decimal form; independent of the global locale.
inline std::string format_number(double v)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc())
    throw std::runtime_error("format_number: conversion failed");
  return {buf, ptr};
}

inline std::string format_number(long long v) { return std::to_string(v); }
inline std::string format_number(int v) { return std::to_string(v); }

class CsvWriter
{
public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header) : out_(out)
  {
    for (std::size_t i = 0; i < header.size(); ++i)
      out_ << (i ? "," : "") << header[i];
    out_ << '\n';
  }

  template <class... Ts>
  void row(const Ts&... values)
  {
    std::size_t i = 0;
    ((out_ << (i++ ? "," : "") << format_number(values)), ...);
    out_ << '\n';
  }

private:
  std::ostream& out_;
};

inline void write_mp_csv(std::ostream& out, const std::vector<MpPoint>& points)
{
  CsvWriter w(out, {"snr_db", "mp", "trials", "N_a", "K"});
  for (const MpPoint& p : points)
    w.row(p.snr_db, p.mp, p.trials, p.num_elements, p.num_beams);
}

inline void write_rate_csv(std::ostream& out, const RateResult& result)
{
  CsvWriter w(out, {"power_dbm", "rate_proposed_est", "rate_proposed_perfect", "rate_fdb_upper",
                    "rate_no_irs"});
  for (const RatePoint& p : result.points)
    w.row(p.power_dbm, p.proposed_estimated, p.proposed_perfect, p.fdb_upper, p.no_irs);
}

inline void write_codebook_csv(std::ostream& out, const std::vector<PatternSample>& samples)
{
  CsvWriter w(out, {"stage", "index", "probe_angle", "gain"});
  for (const PatternSample& s : samples)
    w.row(s.stage, s.index, s.probe_angle, s.gain);
}

inline void write_quant_csv(std::ostream& out, const std::vector<QuantizationRow>& rows)
{
  CsvWriter w(out, {"N_a", "K", "e_worst", "e_aver"});
  for (const QuantizationRow& r : rows)
    w.row(r.num_elements, r.num_beams, r.worst, r.average);
}

} // namespace irsthz

#endif // IRSTHZ_HARNESS_CSV_HPP
