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

#include "apsp/errors.hpp"
#include "apsp/experiments.hpp"
#include "apsp/rate.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace
{
    struct Overrides
    {
        std::string config, scenario, scheme, frame, scale, out, diag;
        std::optional<long long> q, trials, seed;
        std::optional<double> gamma;
        std::vector<double> snr;
        std::vector<long long> delta;
    };

    void add_common(CLI::App *cmd, Overrides &o)
    {
        cmd->add_option("--config", o.config, "key = value experiment file");
        cmd->add_option("--scenario", o.scenario, "SU, UMa, UMi or custom");
        cmd->add_option("--scheme", o.scheme, "APSP, PSOP or APSP,PSOP");
        cmd->add_option("--q", o.q, "APSP pilot segment length");
        cmd->add_option("--snr", o.snr, "pilot SNR list in dB")->delimiter(',');
        cmd->add_option("--delta", o.delta, "symbol lag list")->delimiter(',');
        cmd->add_option("--trials", o.trials, "Monte Carlo trials");
        cmd->add_option("--seed", o.seed, "random seed");
        cmd->add_option("--frame", o.frame, "type-A or type-B");
        cmd->add_option("--gamma", o.gamma, "scheduler overlap threshold");
        cmd->add_option("--scale", o.scale, "desk or full system size");
        cmd->add_option("--out", o.out, "output path (default stdout)");
    }

    apsp::ExperimentSpec build_spec(const Overrides &o)
    {
        std::string text;
        if (!o.config.empty())
        {
            std::ifstream f(o.config);
            if (!f)
                throw apsp::config_error("cannot open experiment file '" + o.config + "'");
            text.assign(std::istreambuf_iterator<char>(f), {});
        }
        // Command line settings follow the file so they take precedence
        if (!o.scale.empty())
            text += "\nscale = " + o.scale;
        auto line = [&](const std::string &k, const std::string &v) { text += "\n" + k + " = " + v; };
        if (!o.scenario.empty())
            line("scenario", o.scenario);
        if (!o.scheme.empty())
            line("scheme", o.scheme);
        if (o.q)
            line("q", std::to_string(*o.q));
        if (!o.snr.empty())
        {
            std::string v;
            for (double s : o.snr)
                v += (v.empty() ? "" : ",") + apsp::format_number(s);
            line("snr_db", v);
        }
        if (!o.delta.empty())
        {
            std::string v;
            for (long long d : o.delta)
                v += (v.empty() ? "" : ",") + std::to_string(d);
            line("delta_ell", v);
        }
        if (o.trials)
            line("trials", std::to_string(*o.trials));
        if (o.seed)
            line("seed", std::to_string(*o.seed));
        if (!o.frame.empty())
            line("frame", o.frame);
        if (o.gamma)
            line("gamma", apsp::format_number(*o.gamma));
        try
        {
            return apsp::parse_experiment(text);
        }
        catch (const apsp::config_error &e)
        {
            throw apsp::config_error((o.config.empty() ? std::string() : o.config + ": ") + e.what());
        }
    }

    template <typename Writer>
    void emit(const std::string &path, Writer &&write)
    {
        if (path.empty() || path == "-")
        {
            write(std::cout);
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot open '" + path + "' for writing");
        write(f);
        f.flush();
        if (!f)
            throw std::runtime_error("write to '" + path + "' failed");
    }

    void run_schedule(const Overrides &o)
    {
        const apsp::ExperimentSpec spec = build_spec(o);
        const auto ch = apsp::make_channels(spec);
        const apsp::Scheme scheme = spec.schemes.front();
        apsp::ScheduleResult r;
        if (scheme == apsp::Scheme::psop)
        {
            r.schedule = apsp::make_psop_schedule(spec.system.users, spec.system.guard, spec.system.subcarriers);
            r.achieved_overlaps.assign(ch.adcpms.size(), 0.0);
            r.condition_met = apsp::check_nonoverlap_condition(r.schedule, ch.adcpms, spec.system).all();
        }
        else
            r = apsp::schedule_apsp(ch.adcpms, spec.system, spec.segment_length, spec.schedule_options());
        emit(o.out, [&](std::ostream &os) { apsp::write_schedule(os, r.schedule); });
        if (!o.diag.empty())
            emit(o.diag, [&](std::ostream &os) {
                os << "ut,phi,group,shift,achieved_overlap,condition_met\n";
                for (apsp::Index k = 0; k < r.schedule.users(); ++k)
                    os << k << "," << r.schedule.phi(k) << "," << r.schedule.group(k) << ","
                       << r.schedule.symbol_shift(k) << "," << apsp::format_number(r.achieved_overlaps[k]) << ","
                       << (r.condition_met ? "true" : "false") << "\n";
            });
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Pilot design and channel acquisition simulator for massive MIMO-OFDM"};
    app.require_subcommand(1);
    Overrides mse_o, rate_o, sched_o;
    auto *mse = app.add_subcommand("mse", "MSE-CE / MSE-CP sweep (analytic and Monte Carlo)");
    add_common(mse, mse_o);
    auto *rate = app.add_subcommand("rate", "approximate spectral efficiency sweep");
    add_common(rate, rate_o);
    auto *sched = app.add_subcommand("schedule", "pilot phase shift schedule");
    add_common(sched, sched_o);
    sched->add_option("--diag", sched_o.diag, "per-UT diagnostics CSV path");

    CLI11_PARSE(app, argc, argv);
    try
    {
        if (mse->parsed())
        {
            const auto rows = apsp::run_mse_experiment(build_spec(mse_o));
            emit(mse_o.out, [&](std::ostream &os) { apsp::write_results(os, rows); });
        }
        else if (rate->parsed())
        {
            const auto report = apsp::evaluate_spectral_efficiency(build_spec(rate_o));
            emit(rate_o.out, [&](std::ostream &os) { apsp::write_rate_results(os, report); });
        }
        else if (sched->parsed())
            run_schedule(sched_o);
    }
    catch (const std::exception &e)
    {
        std::cerr << "apsp: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
