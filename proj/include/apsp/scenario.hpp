// SPDX-License-Identifier: Apache-2.0
//
// apsp-sim: pilot design and channel acquisition simulator for massive MIMO-OFDM
// Copyright (C) 2026 The apsp-sim contributors
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

#ifndef APSP_SCENARIO_HPP
#define APSP_SCENARIO_HPP

#include "apsp/channel_model.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace apsp
{
    enum class Scenario
    {
        SU,
        UMa,
        UMi,
        custom
    };

    // Mobility and dispersion statistics shared by all UTs of a scenario
    struct ScenarioPreset
    {
        Scenario id = Scenario::SU;
        std::string name;
        double doppler_symbol_product = 0.0; // nu * Tsym
        double delay_spread = 0.0;           // seconds, exponential PDP scale
        double angle_spread = 0.0;           // radians
    };

    const ScenarioPreset &preset(Scenario s);

    // Accepts "SU", "UMa", "UMi", "custom" (case-insensitive); throws config_error otherwise
    Scenario parse_scenario(std::string_view name);
    std::string scenario_name(Scenario s);

    // Whether each tap draws its own mean AoA or all taps of a UT share one
    enum class AoaMode
    {
        per_tap,
        per_ut
    };

    struct ProfileOptions
    {
        Index taps = 20;
        AoaMode aoa_mode = AoaMode::per_tap;
        double aoa_limit = 1.0471975511965976; // pi/3
    };

    // Random profile: distinct delay bins drawn uniformly without replacement from
    // [0, Ng), powers from the exponential PDP at the drawn delays, mean AoAs uniform
    // in [-aoa_limit, aoa_limit]. Doppler follows from the preset and cfg's symbol time.
    UTProfile draw_profile(const ScenarioPreset &p, const SystemConfig &cfg, const ProfileOptions &opt, Rng &rng);

    // One profile per UT, each from its own stream (seed, ut)
    std::vector<UTProfile> draw_profiles(const ScenarioPreset &p, const SystemConfig &cfg, const ProfileOptions &opt,
                                         std::uint64_t seed);
}

#endif
