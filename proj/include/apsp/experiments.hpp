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

#ifndef APSP_EXPERIMENTS_HPP
#define APSP_EXPERIMENTS_HPP

#include "apsp/estimation.hpp"
#include "apsp/experiment_config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace apsp
{
    struct DataSymbol
    {
        long long delta_ell = 0; // signed lag from the nearest pilot symbol
        bool uplink = true;
    };

    // Data symbols of one frame in transmission order
    std::vector<DataSymbol> frame_layout(FrameType frame, Index frame_len, Index q);

    // Lags of frame_layout
    std::vector<long long> frame_delay_schedule(FrameType frame, Index frame_len, Index q);

    // Fraction of symbols carrying data
    double data_fraction(Index frame_len, Index q);

    // Profiles and power matrices of an experiment (preset draw or custom list)
    struct ChannelSet
    {
        std::vector<UTProfile> profiles;
        std::vector<Adcpm> adcpms;
    };
    ChannelSet make_channels(const ExperimentSpec &spec);

    PilotSchedule make_schedule(const ExperimentSpec &spec, Scheme scheme, const std::vector<Adcpm> &adcpms);

    struct MseRow
    {
        std::string scenario;
        std::string scheme;
        Index q = 1;
        double snr_db = 0.0;
        long long delta_ell = 0;
        std::string kind;
        std::string source; // analytic or empirical
        double total = 0.0; // normalized by Nc * K
        double bound = 0.0;
        double standard_error = 0.0;
        std::vector<double> per_ut; // normalized by Nc * K
    };

    // Analytic and Monte Carlo rows for every scheme, SNR and lag of the spec
    std::vector<MseRow> run_mse_experiment(const ExperimentSpec &spec);

    MseRow to_row(const MseReport &r, const std::string &scenario, const std::string &scheme, Index q, double snr_db,
                  const std::string &source);

    std::string mse_csv_header();
    void write_results(std::ostream &os, const std::vector<MseRow> &rows);
    void write_results(const std::vector<MseRow> &rows, const std::string &path);

    // Full-precision decimal text for CSV fields
    std::string format_number(double v);
}

#endif
