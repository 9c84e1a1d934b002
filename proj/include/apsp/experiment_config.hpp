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

#ifndef APSP_EXPERIMENT_CONFIG_HPP
#define APSP_EXPERIMENT_CONFIG_HPP

#include "apsp/pilots.hpp"
#include "apsp/scenario.hpp"
#include "apsp/scheduling.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace apsp
{
    enum class Scheme
    {
        apsp,
        psop
    };

    enum class FrameType
    {
        type_a, // pilot segment first, then UL and DL data
        type_b  // pilot segment between UL and DL data
    };

    // How data-symbol channels are obtained from the pilot estimate
    enum class Acquisition
    {
        automatic,  // prediction for APSP, stale estimate for PSOP
        estimation, // stale estimate
        prediction  // tcf-scaled estimate
    };

    std::string scheme_name(Scheme s);
    std::string frame_name(FrameType f);
    std::string acquisition_name(Acquisition a);

    struct ExperimentSpec
    {
        Scenario scenario = Scenario::SU;
        std::vector<Scheme> schemes{Scheme::apsp};
        Index segment_length = 1;        // APSP pilot segment length Q
        bool segment_length_set = false; // Q given explicitly
        std::vector<double> snr_db{0.0, 10.0, 20.0, 30.0};
        std::vector<long long> delta_ell{0, 1, 2, 3, 4, 5, 6};
        Index trials = 200;
        std::uint64_t seed = 1;
        FrameType frame = FrameType::type_a;
        Index frame_len = 7;
        double gamma = 1e-4;
        SystemConfig system = SystemConfig::full_scale();
        ProfileOptions profile;
        UtOrder ut_order = UtOrder::index;
        Grouping grouping = Grouping::round_robin;
        std::vector<UTProfile> custom_profiles;
        BasicKind basic_kind = BasicKind::root_sequence;
        long long basic_root = 1;
        Index rate_subsample = 8;
        Acquisition acquisition = Acquisition::automatic;

        // Pilot segment length used by a scheme
        Index segment_length_for(Scheme s) const;
        ScheduleOptions schedule_options() const;
        Acquisition acquisition_for(Scheme s) const;

        // Throws config_error with a description of the first violated rule
        void validate() const;
    };

    // Applies one "key = value" setting; throws config_error for unknown keys or bad values
    void apply_setting(ExperimentSpec &spec, std::string_view key, std::string_view value);

    // Key-value text, '#' comments. "scale = desk|full" is applied before other keys.
    ExperimentSpec parse_experiment(const std::string &text);
    ExperimentSpec load_experiment(const std::string &path);
}

#endif
