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

#include "apsp/experiments.hpp"
#include "apsp/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace apsp
{
    std::vector<DataSymbol> frame_layout(FrameType frame, Index frame_len, Index q)
    {
        if (q < 1 || frame_len <= q)
            throw std::invalid_argument("frame of " + std::to_string(frame_len) + " symbols has no room for data after " +
                                        std::to_string(q) + " pilot symbols");
        const Index data = frame_len - q;
        std::vector<DataSymbol> out;
        if (frame == FrameType::type_a)
        {
            // Lags counted from the last pilot symbol; first half UL, rest DL
            for (Index d = 1; d <= data; ++d)
                out.push_back({(long long)d, d <= data / 2});
            return out;
        }
        const Index before = data / 2;
        for (Index i = 0; i < before; ++i)
            out.push_back({(long long)(i - before), true});
        for (Index i = 1; i <= data - before; ++i)
            out.push_back({(long long)i, false});
        return out;
    }

    std::vector<long long> frame_delay_schedule(FrameType frame, Index frame_len, Index q)
    {
        std::vector<long long> out;
        for (const auto &s : frame_layout(frame, frame_len, q))
            out.push_back(s.delta_ell);
        return out;
    }

    double data_fraction(Index frame_len, Index q)
    {
        if (q < 1 || frame_len <= q)
            throw std::invalid_argument("frame has no data symbols");
        return double(frame_len - q) / double(frame_len);
    }

    ChannelSet make_channels(const ExperimentSpec &spec)
    {
        ChannelSet c;
        if (spec.scenario == Scenario::custom)
            c.profiles = spec.custom_profiles;
        else
            c.profiles = draw_profiles(preset(spec.scenario), spec.system, spec.profile, spec.seed);
        for (const auto &p : c.profiles)
            c.adcpms.push_back(build_adcpm(p, spec.system));
        return c;
    }

    PilotSchedule make_schedule(const ExperimentSpec &spec, Scheme scheme, const std::vector<Adcpm> &adcpms)
    {
        if (scheme == Scheme::psop)
            return make_psop_schedule(spec.system.users, spec.system.guard, spec.system.subcarriers);
        return schedule_apsp(adcpms, spec.system, spec.segment_length, spec.schedule_options()).schedule;
    }

    MseRow to_row(const MseReport &r, const std::string &scenario, const std::string &scheme, Index q, double snr_db,
                  const std::string &source)
    {
        MseRow row;
        row.scenario = scenario;
        row.scheme = scheme;
        row.q = q;
        row.snr_db = snr_db;
        row.delta_ell = r.delta_ell;
        row.kind = kind_name(r.kind);
        row.source = source;
        row.total = r.normalized_total();
        row.bound = r.normalized_bound();
        row.standard_error = r.normalized_stderr();
        for (double v : r.per_ut)
            row.per_ut.push_back(v / r.normalization);
        return row;
    }

    std::vector<MseRow> run_mse_experiment(const ExperimentSpec &spec)
    {
        spec.validate();
        const ChannelSet ch = make_channels(spec);
        const std::string scen = scenario_name(spec.scenario);
        const BasicPilot basic = make_basic_pilot(spec.system.subcarriers, spec.basic_kind, spec.basic_root);
        std::vector<MseRow> rows;
        for (Scheme scheme : spec.schemes)
        {
            const PilotSchedule sched = make_schedule(spec, scheme, ch.adcpms);
            const Index q = sched.segment_length;
            const std::string name = scheme_name(scheme);
            const auto table = interference_table(sched, ch.adcpms, spec.system);
            for (double snr : spec.snr_db)
            {
                SystemConfig cfg = spec.system;
                cfg.pilot_snr = std::pow(10.0, snr / 10.0);
                const std::vector<double> ones(ch.adcpms.size(), 1.0);
                rows.push_back(to_row(analytic_mse(MseKind::ce, table, ch.adcpms, ones, 0, q, cfg), scen, name, q, snr,
                                      "analytic"));
                const EmpiricalSweep emp = empirical_mse_sweep(sched, ch.profiles, ch.adcpms, cfg, basic,
                                                               spec.delta_ell, spec.trials, spec.seed);
                rows.push_back(to_row(emp.ce, scen, name, q, snr, "empirical"));
                for (std::size_t l = 0; l < spec.delta_ell.size(); ++l)
                {
                    const long long d = spec.delta_ell[l];
                    std::vector<double> rho;
                    for (const auto &p : ch.profiles)
                        rho.push_back(tcf(p.doppler_nu, cfg.symbol_duration(), d));
                    rows.push_back(to_row(analytic_mse(MseKind::ce_delay, table, ch.adcpms, rho, d, q, cfg), scen,
                                          name, q, snr, "analytic"));
                    rows.push_back(to_row(emp.ce_delay[l], scen, name, q, snr, "empirical"));
                    rows.push_back(
                        to_row(analytic_mse(MseKind::cp, table, ch.adcpms, rho, d, q, cfg), scen, name, q, snr, "analytic"));
                    rows.push_back(to_row(emp.cp[l], scen, name, q, snr, "empirical"));
                }
            }
        }
        return rows;
    }

    std::string format_number(double v)
    {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    std::string mse_csv_header()
    {
        return "scenario,scheme,Q,snr_db,delta_ell,kind,source,total,bound,stderr,per_ut";
    }

    void write_results(std::ostream &os, const std::vector<MseRow> &rows)
    {
        os << mse_csv_header() << "\n";
        for (const auto &r : rows)
        {
            os << r.scenario << "," << r.scheme << "," << r.q << "," << format_number(r.snr_db) << "," << r.delta_ell
               << "," << r.kind << "," << r.source << "," << format_number(r.total) << "," << format_number(r.bound)
               << "," << format_number(r.standard_error) << ",";
            for (std::size_t k = 0; k < r.per_ut.size(); ++k)
                os << (k ? ";" : "") << format_number(r.per_ut[k]);
            os << "\n";
        }
    }

    void write_results(const std::vector<MseRow> &rows, const std::string &path)
    {
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot open '" + path + "' for writing");
        write_results(f, rows);
        f.flush();
        if (!f)
            throw std::runtime_error("write to '" + path + "' failed");
    }
}
