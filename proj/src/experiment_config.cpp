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

#include "apsp/experiment_config.hpp"
#include "apsp/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace apsp
{
    namespace
    {
        std::string trim(std::string_view s)
        {
            std::size_t a = 0, b = s.size();
            while (a < b && std::isspace(static_cast<unsigned char>(s[a])))
                ++a;
            while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1])))
                --b;
            return std::string(s.substr(a, b - a));
        }

        std::string lower(std::string_view s)
        {
            std::string out(s);
            for (auto &c : out)
                c = char(std::tolower(static_cast<unsigned char>(c)));
            return out;
        }

        std::vector<std::string> split(std::string_view s, char sep)
        {
            std::vector<std::string> out;
            std::size_t start = 0;
            while (true)
            {
                const auto pos = s.find(sep, start);
                const std::string item = trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
                if (!item.empty())
                    out.push_back(item);
                if (pos == std::string_view::npos)
                    break;
                start = pos + 1;
            }
            return out;
        }

        [[noreturn]] void bad_value(std::string_view key, std::string_view value, const std::string &why)
        {
            throw config_error("setting '" + std::string(key) + "': " + why + " (got '" + std::string(value) + "')");
        }

        double to_double(std::string_view key, std::string_view text)
        {
            const std::string t = trim(text);
            double v = 0.0;
            auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (ec != std::errc() || p != t.data() + t.size() || t.empty())
                bad_value(key, text, "expected a number");
            return v;
        }

        long long to_integer(std::string_view key, std::string_view text)
        {
            const std::string t = trim(text);
            long long v = 0;
            auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (ec != std::errc() || p != t.data() + t.size() || t.empty())
                bad_value(key, text, "expected an integer");
            return v;
        }

        Index to_count(std::string_view key, std::string_view text)
        {
            const long long v = to_integer(key, text);
            if (v < 1)
                bad_value(key, text, "expected a positive count");
            return Index(v);
        }

        UTProfile &custom_ut(ExperimentSpec &spec, std::size_t k)
        {
            if (spec.custom_profiles.size() <= k)
                spec.custom_profiles.resize(k + 1);
            return spec.custom_profiles[k];
        }

        void apply_ut_setting(ExperimentSpec &spec, std::string_view key, std::string_view value)
        {
            // ut.<k>.<field>
            const auto parts = split(key, '.');
            if (parts.size() != 3)
                bad_value(key, value, "expected ut.<index>.<field>");
            const long long k = to_integer(key, parts[1]);
            if (k < 0 || k > 100000)
                bad_value(key, value, "UT index out of range");
            UTProfile &p = custom_ut(spec, std::size_t(k));
            if (parts[2] == "doppler_nu")
                p.doppler_nu = to_double(key, value);
            else if (parts[2] == "taps")
            {
                p.taps.clear();
                for (const auto &item : split(value, ';'))
                {
                    const auto f = split(item, ':');
                    if (f.size() != 4)
                        bad_value(key, value, "each tap is bin:power:aoa:spread");
                    Tap t;
                    t.delay_bin = Index(to_integer(key, f[0]));
                    t.relative_power = to_double(key, f[1]);
                    t.mean_aoa = to_double(key, f[2]);
                    t.angle_spread = to_double(key, f[3]);
                    p.taps.push_back(t);
                }
            }
            else
                bad_value(key, value, "unknown UT field");
        }
    }

    std::string scheme_name(Scheme s) { return s == Scheme::apsp ? "APSP" : "PSOP"; }

    std::string frame_name(FrameType f) { return f == FrameType::type_a ? "type-A" : "type-B"; }

    std::string acquisition_name(Acquisition a)
    {
        switch (a)
        {
        case Acquisition::automatic:
            return "auto";
        case Acquisition::estimation:
            return "CE";
        case Acquisition::prediction:
            return "CP";
        }
        return "unknown";
    }

    Index ExperimentSpec::segment_length_for(Scheme s) const
    {
        if (s == Scheme::psop)
            return psop_segment_length(system.users, system.guard, system.subcarriers);
        return segment_length;
    }

    ScheduleOptions ExperimentSpec::schedule_options() const
    {
        ScheduleOptions o;
        o.gamma = gamma;
        o.order = ut_order;
        o.grouping = grouping;
        return o;
    }

    Acquisition ExperimentSpec::acquisition_for(Scheme s) const
    {
        if (acquisition != Acquisition::automatic)
            return acquisition;
        return s == Scheme::apsp ? Acquisition::prediction : Acquisition::estimation;
    }

    void ExperimentSpec::validate() const
    {
        try
        {
            system.validate();
        }
        catch (const std::exception &e)
        {
            throw config_error(std::string("system: ") + e.what());
        }
        if (trials < 1)
            throw config_error("trials must be at least 1");
        if (schemes.empty())
            throw config_error("no scheme selected");
        if (snr_db.empty())
            throw config_error("SNR list is empty");
        if (!(gamma >= 0.0 && gamma <= 1.0))
            throw config_error("gamma must lie in [0, 1]");
        if (segment_length < 1)
            throw config_error("Q must be at least 1");
        if (rate_subsample < 1)
            throw config_error("rate_subsample must be at least 1");
        const Index psop_q = psop_segment_length(system.users, system.guard, system.subcarriers);
        const bool psop_only = schemes.size() == 1 && schemes.front() == Scheme::psop;
        if (psop_only && segment_length_set && segment_length != psop_q)
            throw config_error("PSOP with K = " + std::to_string(system.users) + ", Nc = " +
                               std::to_string(system.subcarriers) + ", Ng = " + std::to_string(system.guard) +
                               " needs Q = " + std::to_string(psop_q) + ", got Q = " + std::to_string(segment_length));
        for (Scheme s : schemes)
            if (frame_len <= segment_length_for(s))
                throw config_error("frame length " + std::to_string(frame_len) + " leaves no data symbols for " +
                                   scheme_name(s) + " with Q = " + std::to_string(segment_length_for(s)));
        if (scenario == Scenario::custom)
        {
            if (custom_profiles.empty())
                throw config_error("custom scenario needs ut.<k>.taps profiles");
            if (Index(custom_profiles.size()) != system.users)
                throw config_error("custom scenario defines " + std::to_string(custom_profiles.size()) +
                                   " profiles for " + std::to_string(system.users) + " UTs");
            for (std::size_t k = 0; k < custom_profiles.size(); ++k)
            {
                try
                {
                    custom_profiles[k].validate(system);
                }
                catch (const std::exception &e)
                {
                    throw config_error("UT " + std::to_string(k) + ": " + e.what());
                }
            }
        }
        else if (!custom_profiles.empty())
            throw config_error("per-UT profiles given for preset scenario " + scenario_name(scenario));
    }

    void apply_setting(ExperimentSpec &spec, std::string_view key_in, std::string_view value_in)
    {
        const std::string key = trim(key_in);
        const std::string value = trim(value_in);
        const std::string v = lower(value);
        if (key.rfind("ut.", 0) == 0)
            return apply_ut_setting(spec, key, value);
        if (key == "scenario")
            spec.scenario = parse_scenario(value);
        else if (key == "scale")
        {
            if (v == "desk")
                spec.system = SystemConfig::desk_scale();
            else if (v == "full")
                spec.system = SystemConfig::full_scale();
            else
                bad_value(key, value, "expected desk or full");
        }
        else if (key == "scheme")
        {
            spec.schemes.clear();
            for (const auto &s : split(v, ','))
            {
                if (s == "apsp")
                    spec.schemes.push_back(Scheme::apsp);
                else if (s == "psop")
                    spec.schemes.push_back(Scheme::psop);
                else
                    bad_value(key, value, "expected APSP and/or PSOP");
            }
            if (spec.schemes.empty())
                bad_value(key, value, "expected APSP and/or PSOP");
        }
        else if (key == "q" || key == "Q")
        {
            spec.segment_length = to_count(key, value);
            spec.segment_length_set = true;
        }
        else if (key == "snr_db" || key == "snr")
        {
            spec.snr_db.clear();
            for (const auto &s : split(value, ','))
                spec.snr_db.push_back(to_double(key, s));
        }
        else if (key == "delta_ell")
        {
            spec.delta_ell.clear();
            for (const auto &s : split(value, ','))
                spec.delta_ell.push_back(to_integer(key, s));
        }
        else if (key == "trials")
            spec.trials = to_count(key, value);
        else if (key == "seed")
        {
            const long long s = to_integer(key, value);
            if (s < 0)
                bad_value(key, value, "seed must be nonnegative");
            spec.seed = std::uint64_t(s);
        }
        else if (key == "frame")
        {
            if (v == "a" || v == "type-a" || v == "type_a")
                spec.frame = FrameType::type_a;
            else if (v == "b" || v == "type-b" || v == "type_b")
                spec.frame = FrameType::type_b;
            else
                bad_value(key, value, "expected type-A or type-B");
        }
        else if (key == "frame_len")
            spec.frame_len = to_count(key, value);
        else if (key == "gamma")
            spec.gamma = to_double(key, value);
        else if (key == "antennas" || key == "M")
            spec.system.antennas = to_count(key, value);
        else if (key == "subcarriers" || key == "Nc")
            spec.system.subcarriers = to_count(key, value);
        else if (key == "guard" || key == "Ng")
            spec.system.guard = to_count(key, value);
        else if (key == "users" || key == "K")
            spec.system.users = to_count(key, value);
        else if (key == "sample_duration" || key == "Ts")
            spec.system.sample_duration = to_double(key, value);
        else if (key == "pilot_power")
            spec.system.pilot_power = to_double(key, value);
        else if (key == "taps")
            spec.profile.taps = to_count(key, value);
        else if (key == "aoa_limit")
            spec.profile.aoa_limit = to_double(key, value);
        else if (key == "aoa_mode")
        {
            if (v == "per_tap")
                spec.profile.aoa_mode = AoaMode::per_tap;
            else if (v == "per_ut")
                spec.profile.aoa_mode = AoaMode::per_ut;
            else
                bad_value(key, value, "expected per_tap or per_ut");
        }
        else if (key == "ut_order")
        {
            if (v == "index")
                spec.ut_order = UtOrder::index;
            else if (v == "descending_power")
                spec.ut_order = UtOrder::descending_power;
            else
                bad_value(key, value, "expected index or descending_power");
        }
        else if (key == "grouping")
        {
            if (v == "round_robin")
                spec.grouping = Grouping::round_robin;
            else if (v == "contiguous")
                spec.grouping = Grouping::contiguous;
            else
                bad_value(key, value, "expected round_robin or contiguous");
        }
        else if (key == "basic")
        {
            if (v == "ones")
                spec.basic_kind = BasicKind::all_ones;
            else if (v == "root")
                spec.basic_kind = BasicKind::root_sequence;
            else
                bad_value(key, value, "expected root or ones");
        }
        else if (key == "root")
            spec.basic_root = to_integer(key, value);
        else if (key == "rate_subsample")
            spec.rate_subsample = to_count(key, value);
        else if (key == "acquisition")
        {
            if (v == "auto")
                spec.acquisition = Acquisition::automatic;
            else if (v == "ce")
                spec.acquisition = Acquisition::estimation;
            else if (v == "cp")
                spec.acquisition = Acquisition::prediction;
            else
                bad_value(key, value, "expected auto, CE or CP");
        }
        else
            throw config_error("unknown setting '" + key + "'");
    }

    ExperimentSpec parse_experiment(const std::string &text)
    {
        std::vector<std::pair<std::string, std::string>> items;
        std::istringstream is(text);
        std::string line;
        int lineno = 0;
        while (std::getline(is, line))
        {
            ++lineno;
            if (auto h = line.find('#'); h != std::string::npos)
                line.erase(h);
            if (trim(line).empty())
                continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos || trim(line.substr(0, eq)).empty())
                throw config_error("line " + std::to_string(lineno) + ": expected key = value");
            items.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
        ExperimentSpec spec;
        for (const auto &[k, v] : items)
            if (k == "scale")
                apply_setting(spec, k, v);
        for (const auto &[k, v] : items)
            if (k != "scale")
                apply_setting(spec, k, v);
        spec.validate();
        return spec;
    }

    ExperimentSpec load_experiment(const std::string &path)
    {
        std::ifstream f(path);
        if (!f)
            throw config_error("cannot open experiment file '" + path + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        try
        {
            return parse_experiment(ss.str());
        }
        catch (const config_error &e)
        {
            throw config_error(path + ": " + e.what());
        }
    }
}
