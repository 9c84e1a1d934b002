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

#ifndef APSP_ESTIMATION_HPP
#define APSP_ESTIMATION_HPP

#include "apsp/channel_model.hpp"
#include "apsp/pilots.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace apsp
{
    // Decorrelated, power-normalized pilot observation of one UT, antennas x guard
    struct ObservationMatrix
    {
        ComplexMatrix values;
        Index ut = 0;
        Index segment_length = 1;
    };

    enum class MseKind
    {
        ce,       // estimate at the pilot symbol
        ce_delay, // stale estimate used at lag delta_ell
        cp        // predicted estimate at lag delta_ell
    };

    std::string kind_name(MseKind k);

    // Raw sums of squared errors; normalized_* divide by Nc * K
    struct MseReport
    {
        MseKind kind = MseKind::ce;
        long long delta_ell = 0;
        std::vector<double> per_ut;
        double total = 0.0;
        double bound_total = 0.0;
        double standard_error = 0.0; // Monte Carlo only
        double normalization = 1.0;

        double normalized_total() const { return total / normalization; }
        double normalized_bound() const { return bound_total / normalization; }
        double normalized_stderr() const { return standard_error / normalization; }
    };

    // Y = sum_k V H_k F^T X_k + Z over the Q pilot symbols, returned as M x (Nc * Q)
    // with symbol q in columns [q Nc, (q+1) Nc). sigma_ztr = 0 disables noise.
    ComplexMatrix synthesize_received(const std::vector<Adcrm> &channels, const PilotSchedule &schedule,
                                      const BasicPilot &basic, const SystemConfig &cfg, double sigma_ztr, Rng &noise);

    // (1 / (sigma Q)) V^H sum_q Y_q X_{k,q}^H F*, truncated to the first Ng delay columns
    ObservationMatrix decorrelate_observation(const ComplexMatrix &y, Index ut, const PilotSchedule &schedule,
                                              const BasicPilot &basic, const SystemConfig &cfg);

    // All UTs at once; the angle transform of Y is shared
    std::vector<ObservationMatrix> decorrelate_all(const ComplexMatrix &y, const PilotSchedule &schedule,
                                                   const BasicPilot &basic, const SystemConfig &cfg);

    // Sum over same-group UTs k' (including k) of Omega_{k'} shifted by s_{k'} - s_k.
    // Independent of SNR; add 1/(rho Q) for the estimator denominator.
    RealMatrix interference_power(Index ut, const PilotSchedule &schedule, const std::vector<Adcpm> &adcpms,
                                  const SystemConfig &cfg);
    std::vector<RealMatrix> interference_table(const PilotSchedule &schedule, const std::vector<Adcpm> &adcpms,
                                               const SystemConfig &cfg);

    RealMatrix interference_denominator(Index ut, const PilotSchedule &schedule, const std::vector<Adcpm> &adcpms,
                                        const SystemConfig &cfg);

    Adcrm mmse_estimate(const ObservationMatrix &obs, Index ut, const PilotSchedule &schedule,
                        const std::vector<Adcpm> &adcpms, const SystemConfig &cfg);

    // Element-wise omega / denominator * observation
    Adcrm mmse_estimate(const ObservationMatrix &obs, const Adcpm &omega, const RealMatrix &denominator);

    // rho(delta_ell) * estimate
    Adcrm predict(const Adcrm &estimate, const UTProfile &profile, long long delta_ell, const SystemConfig &cfg);

    MseReport analytic_mse_ce(const PilotSchedule &schedule, const std::vector<Adcpm> &adcpms, const SystemConfig &cfg);

    // Bound attached is the prediction bound, which lower-bounds the stale-estimate error
    MseReport analytic_mse_ce_with_delay(const PilotSchedule &schedule, const std::vector<Adcpm> &adcpms,
                                         const std::vector<UTProfile> &profiles, long long delta_ell,
                                         const SystemConfig &cfg);

    MseReport analytic_mse_cp(const PilotSchedule &schedule, const std::vector<Adcpm> &adcpms,
                              const std::vector<UTProfile> &profiles, long long delta_ell, const SystemConfig &cfg);

    // Same quantities from a precomputed interference table and per-UT correlations
    MseReport analytic_mse(MseKind kind, const std::vector<RealMatrix> &interference, const std::vector<Adcpm> &adcpms,
                           const std::vector<double> &rho, long long delta_ell, Index segment_length,
                           const SystemConfig &cfg);

    struct EmpiricalSweep
    {
        MseReport ce;
        std::vector<MseReport> ce_delay; // one per requested lag
        std::vector<MseReport> cp;
    };

    // Monte Carlo over `trials` independent channel/noise draws. Trial t uses streams
    // keyed by (seed, ut, lag, t), so results do not depend on the worker count.
    EmpiricalSweep empirical_mse_sweep(const PilotSchedule &schedule, const std::vector<UTProfile> &profiles,
                                       const std::vector<Adcpm> &adcpms, const SystemConfig &cfg,
                                       const BasicPilot &basic, const std::vector<long long> &lags, Index trials,
                                       std::uint64_t seed, std::size_t workers = 0);

    MseReport empirical_mse(MseKind kind, Index trials, const PilotSchedule &schedule,
                            const std::vector<UTProfile> &profiles, const SystemConfig &cfg, std::uint64_t seed,
                            long long delta_ell = 0);
}

#endif
