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

#ifndef APSP_SCHEDULING_HPP
#define APSP_SCHEDULING_HPP

#include "apsp/channel_model.hpp"
#include "apsp/pilots.hpp"

#include <vector>

namespace apsp
{
    // sum(A o B) / (||A||_F ||B||_F); throws undefined_overlap if either matrix is all zero
    double overlap(const RealMatrix &a, const RealMatrix &b);

    struct NonOverlapReport
    {
        // pair(k, k') is true when the two UTs never interfere (always true across groups)
        Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> pair;
        bool all() const { return pair.all(); }
    };

    // tol < 0 selects the default 1e-12 * (max power entry)^2 on the Hadamard products
    NonOverlapReport check_nonoverlap_condition(const PilotSchedule &schedule, const std::vector<Adcpm> &adcpms,
                                                const SystemConfig &cfg, double tol = -1.0);

    enum class UtOrder
    {
        index,
        descending_power
    };

    enum class Grouping
    {
        round_robin,
        contiguous
    };

    struct ScheduleOptions
    {
        double gamma = 1e-4;
        UtOrder order = UtOrder::index;
        Grouping grouping = Grouping::round_robin;
    };

    struct ScheduleResult
    {
        PilotSchedule schedule;
        std::vector<double> achieved_overlaps; // per UT, against UTs scheduled before it
        bool condition_met = false;
    };

    // Greedy phase shift scheduling. UTs are split into Q phase groups; in each group the
    // first UT takes shift 0 and every later UT takes the first shift (ascending) whose
    // overlap with the sum of already placed shifted power matrices is <= gamma, or the
    // smallest minimizer of that overlap when no shift qualifies.
    ScheduleResult schedule_apsp(const std::vector<Adcpm> &adcpms, const SystemConfig &cfg, Index q,
                                 const ScheduleOptions &opt = {});

    // Minimum analytic sum MSE-CE over all shift patterns with phi_0 = 0.
    // Refuses K > 4 or Q * Nc > 64.
    ScheduleResult exhaustive_schedule(const std::vector<Adcpm> &adcpms, const SystemConfig &cfg, Index q);
}

#endif
