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

#include "apsp/scenario.hpp"
#include "apsp/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>

namespace apsp
{
    namespace
    {
        constexpr double degree = std::numbers::pi / 180.0;

        const ScenarioPreset presets[] = {
            {Scenario::SU, "SU", 31e-3, 0.77e-6, 2.0 * degree},
            {Scenario::UMa, "UMa", 14e-3, 1.85e-6, 2.0 * degree},
            {Scenario::UMi, "UMi", 6.6e-3, 0.62e-6, 10.0 * degree},
        };

        std::string lower(std::string_view s)
        {
            std::string out(s);
            for (auto &c : out)
                c = char(std::tolower(static_cast<unsigned char>(c)));
            return out;
        }
    }

    const ScenarioPreset &preset(Scenario s)
    {
        for (const auto &p : presets)
            if (p.id == s)
                return p;
        throw config_error("scenario '" + scenario_name(s) + "' has no preset statistics");
    }

    Scenario parse_scenario(std::string_view name)
    {
        const std::string n = lower(name);
        if (n == "su")
            return Scenario::SU;
        if (n == "uma")
            return Scenario::UMa;
        if (n == "umi")
            return Scenario::UMi;
        if (n == "custom")
            return Scenario::custom;
        throw config_error("unknown scenario '" + std::string(name) + "' (expected SU, UMa, UMi or custom)");
    }

    std::string scenario_name(Scenario s)
    {
        switch (s)
        {
        case Scenario::SU:
            return "SU";
        case Scenario::UMa:
            return "UMa";
        case Scenario::UMi:
            return "UMi";
        case Scenario::custom:
            return "custom";
        }
        return "unknown";
    }

    UTProfile draw_profile(const ScenarioPreset &p, const SystemConfig &cfg, const ProfileOptions &opt, Rng &rng)
    {
        cfg.validate();
        if (opt.taps < 1)
            throw std::invalid_argument("profile needs at least one tap");
        const Index ntaps = std::min(opt.taps, cfg.guard);

        // Partial Fisher-Yates over the delay bins
        std::vector<Index> bins(static_cast<std::size_t>(cfg.guard));
        std::iota(bins.begin(), bins.end(), Index(0));
        for (Index i = 0; i < ntaps; ++i)
        {
            const auto span = std::uint64_t(cfg.guard - i);
            const Index j = i + Index(rng.next_u64() % span);
            std::swap(bins[i], bins[j]);
        }
        bins.resize(static_cast<std::size_t>(ntaps));
        std::sort(bins.begin(), bins.end());

        UTProfile prof;
        prof.doppler_nu = p.doppler_symbol_product / cfg.symbol_duration();
        const double shared_aoa = rng.uniform(-opt.aoa_limit, opt.aoa_limit);
        for (Index b : bins)
        {
            Tap t;
            t.delay_bin = b;
            const double tau = double(b) * cfg.sample_duration;
            t.relative_power = std::isinf(p.delay_spread) ? 1.0 : std::exp(-tau / p.delay_spread);
            t.mean_aoa = opt.aoa_mode == AoaMode::per_ut ? shared_aoa : rng.uniform(-opt.aoa_limit, opt.aoa_limit);
            t.angle_spread = p.angle_spread;
            prof.taps.push_back(t);
        }
        return prof;
    }

    std::vector<UTProfile> draw_profiles(const ScenarioPreset &p, const SystemConfig &cfg, const ProfileOptions &opt,
                                         std::uint64_t seed)
    {
        std::vector<UTProfile> out;
        out.reserve(static_cast<std::size_t>(cfg.users));
        for (Index k = 0; k < cfg.users; ++k)
        {
            Rng rng(StreamKey{seed, std::uint64_t(k), 0, 0, StreamPurpose::profile});
            out.push_back(draw_profile(p, cfg, opt, rng));
        }
        return out;
    }
}
