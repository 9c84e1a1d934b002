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

#ifndef APSP_CHANNEL_MODEL_HPP
#define APSP_CHANNEL_MODEL_HPP

#include "apsp/rng.hpp"
#include "apsp/transforms.hpp"

#include <vector>

namespace apsp
{
    // OFDM / array dimensions and pilot-segment power levels shared by every module
    struct SystemConfig
    {
        Index antennas = 64;             // BS antennas (ULA), must be even
        Index subcarriers = 512;         // OFDM subcarriers
        Index guard = 36;                // guard interval in samples, bounds the channel delay
        Index users = 12;                // single-antenna UTs
        double sample_duration = 130.4e-9; // seconds
        double pilot_snr = 10.0;         // linear, pilot power / noise power
        double pilot_power = 1.0;        // linear

        // OFDM symbol duration including the guard interval
        double symbol_duration() const { return double(subcarriers + guard) * sample_duration; }
        double noise_power() const { return pilot_power / pilot_snr; }

        // Throws std::invalid_argument (or unsupported_configuration for odd antenna counts)
        void validate() const;

        // 20 MHz LTE numerology with 128 antennas and 42 UTs
        static SystemConfig full_scale();

        // 5 MHz numerology (same symbol duration), 64 antennas, 12 UTs
        static SystemConfig desk_scale();
    };

    struct Tap
    {
        Index delay_bin = 0;        // delay in samples, [0, guard)
        double relative_power = 1.0;
        double mean_aoa = 0.0;      // radians
        double angle_spread = 0.0;  // radians, Laplacian PAS parameter
    };

    // Statistical description of one UT channel
    struct UTProfile
    {
        double doppler_nu = 0.0; // maximum Doppler frequency in Hz
        std::vector<Tap> taps;

        void validate(const SystemConfig &cfg) const;
    };

    // Angle-delay power matrix, antennas x guard, nonnegative
    struct Adcpm
    {
        RealMatrix values;
        double total() const { return values.sum(); }
    };

    // Angle-delay channel realization, antennas x guard
    struct Adcrm
    {
        ComplexMatrix values;
    };

    // Space-frequency channel realization, antennas x subcarriers
    struct Sfcrm
    {
        ComplexMatrix values;
    };

    // Truncated Laplacian power angle spectrum on [-pi/2, pi/2], unit integral
    double laplacian_pas(double theta, double mean_aoa, double angle_spread);

    // Entry formula M*Nc*(theta_{i+1}-theta_i)*S(theta_i, tau_j) with the angle-delay
    // spectrum S normalized to unit total power; no grid renormalization.
    RealMatrix spectrum_power_matrix(const UTProfile &profile, const SystemConfig &cfg);

    // ADCPM from a profile. Each tap's power is spread across the angle grid with the
    // left-endpoint Laplacian weights (normalized on the grid, so vanishing spreads stay
    // finite) and the result is scaled so that its entries sum to M*Nc.
    Adcpm build_adcpm(const UTProfile &profile, const SystemConfig &cfg);

    // Clarke-Jakes temporal correlation J0(2 pi nu Tsym dl)
    double tcf(double doppler_nu, double symbol_duration, long long delta_ell);

    // Independent CN(0, Omega_ij) entries
    Adcrm sample_adcrm(const Adcpm &omega, Rng &rng);
    Adcrm sample_adcrm(const Adcpm &omega, const StreamKey &key);

    // rho * H + sqrt(1 - rho^2) * W with W drawn from omega; |rho| <= 1
    Adcrm evolve_adcrm(const Adcrm &h, const Adcpm &omega, double rho, Rng &rng);

    // G = V_M H F_{Nc x Ng}^T
    Sfcrm adcrm_to_sfcrm(const Adcrm &h, const SystemConfig &cfg);

    // H = V_M^H G conj(F_{Nc x Ng})
    Adcrm sfcrm_to_adcrm(const Sfcrm &g, const SystemConfig &cfg);

    // Verification only: SFCCM by trapezoidal quadrature of the angular integral,
    // vec ordering index = subcarrier * M + antenna. Each side of a tap's mean angle gets
    // max(8*M, 512) nodes by default.
    // Refuses M*Nc above 4096.
    ComplexMatrix build_sfccm_small(const UTProfile &profile, const SystemConfig &cfg, Index angle_nodes = 0);

    // (F_{Nc x Ng} kron V_M) diag(vec omega) (F_{Nc x Ng} kron V_M)^H, dense; same guard
    ComplexMatrix approximate_sfccm(const RealMatrix &omega, const SystemConfig &cfg);

    // Extended (zero padded to Nc columns) matrix cyclically shifted by `shift` columns
    RealMatrix extended_shifted(const RealMatrix &omega, long long shift, Index subcarriers);

    // Extended, shifted, truncated back to the first guard columns
    RealMatrix shifted_power_matrix(const RealMatrix &omega, long long shift, Index subcarriers);
}

#endif
