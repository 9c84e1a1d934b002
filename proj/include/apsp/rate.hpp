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

#ifndef APSP_RATE_HPP
#define APSP_RATE_HPP

#include "apsp/experiment_config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace apsp
{
    // Approximate achievable spectral efficiency. Estimated channels are treated as
    // known and their errors as independent Gaussian noise; UL uses an MMSE combiner,
    // DL the same matrix as a sum-power normalized precoder over reciprocal channels.
    struct RatePoint
    {
        std::string scenario;
        std::string scheme;
        std::string frame;
        std::string acquisition;
        Index q = 1;
        double snr_db = 0.0;
        double uplink = 0.0;   // bits/s/Hz averaged over the frame
        double downlink = 0.0;
        double data_fraction = 0.0;

        double total() const { return uplink + downlink; }
    };

    struct RateReport
    {
        std::vector<RatePoint> points; // one per (scheme, SNR)
    };

    // Refuses M * K > 4096
    RateReport evaluate_spectral_efficiency(const ExperimentSpec &spec);

    std::string rate_csv_header();
    void write_rate_results(std::ostream &os, const RateReport &report);
    void write_rate_results(const RateReport &report, const std::string &path);
}

#endif
