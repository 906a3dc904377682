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

#ifndef IRSTHZ_HARNESS_TRACE_HPP
#define IRSTHZ_HARNESS_TRACE_HPP

#include "irsthz/harness/experiments.hpp"

#include <nlohmann/json.hpp>

namespace irsthz {

inline void to_json(nlohmann::json& j, const Point& p) { j = {{"x", p.x}, {"y", p.y}}; }

inline void to_json(nlohmann::json& j, const PathAngles& a)
{
  j = {{"alice_aod", a.alice_aod},
       {"irs_aoa", a.irs_aoa},
       {"irs_aod", a.irs_aod},
       {"bob_aoa", a.bob_aoa}};
}

inline void to_json(nlohmann::json& j, const AngleEstimate& e)
{
  j = {{"alice_aod", e.alice_aod},
       {"irs_aoa", e.irs_aoa},
       {"irs_aod", e.irs_aod},
       {"bob_aoa", e.bob_aoa},
       {"composite_loss", e.composite_loss}};
}

inline void to_json(nlohmann::json& j, const SlotCounts& s)
{
  j = {{"phase1", s.phase1},
       {"phase2", s.phase2},
       {"composite", s.composite},
       {"total", s.total()}};
}

inline void to_json(nlohmann::json& j, const PowerRates& r)
{
  j = {{"power_dbm", r.power_dbm},
       {"rate_proposed_est", r.proposed_estimated},
       {"rate_proposed_perfect", r.proposed_perfect},
       {"rate_fdb_upper", r.fdb_upper},
       {"rate_no_irs", r.no_irs},
       {"rate_parallel_perfect", r.parallel_perfect},
       {"estimates", r.estimates},
       {"slots", r.slots}};
}

inline void to_json(nlohmann::json& j, const TrialRecord& rec)
{
  j = {{"trial", rec.trial},
       {"seed", rec.seed},
       {"alice", rec.geometry.alice},
       {"bob", rec.geometry.bob},
       {"irs", rec.geometry.irs},
       {"resampled", rec.resampled},
       {"true_angles", rec.true_angles},
       {"true_composite_loss", rec.true_composite_loss},
       {"rates", rec.rates}};
}

} // namespace irsthz

#endif // IRSTHZ_HARNESS_TRACE_HPP
