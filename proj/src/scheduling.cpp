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

#include "apsp/scheduling.hpp"
#include "apsp/errors.hpp"
#include "apsp/estimation.hpp"
#include "apsp/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace apsp
{
    namespace
    {
        void check_adcpms(const std::vector<Adcpm> &adcpms, const SystemConfig &cfg)
        {
            cfg.validate();
            if (adcpms.empty())
                throw invalid_dimension("scheduling needs at least one UT");
            for (const auto &a : adcpms)
                if (a.values.rows() != cfg.antennas || a.values.cols() != cfg.guard)
                    throw invalid_dimension("power matrix must be antennas x guard");
        }

        // sum_{i, j < Ng} omega(i, j) * agg(i, (j + s) mod Nc)
        double shifted_inner(const RealMatrix &agg, const RealMatrix &omega, Index s)
        {
            const Index nc = agg.cols();
            double acc = 0.0;
            for (Index j = 0; j < omega.cols(); ++j)
            {
                const Index c = (j + s) % nc;
                acc += agg.col(c).dot(omega.col(j));
            }
            return acc;
        }

        // Overlap of each UT against the sum of same-group UTs placed before it in `order`
        std::vector<double> achieved(const PilotSchedule &s, const std::vector<Adcpm> &adcpms,
                                     const std::vector<Index> &order, const SystemConfig &cfg)
        {
            std::vector<double> out(adcpms.size(), 0.0);
            std::vector<RealMatrix> agg(static_cast<std::size_t>(s.segment_length));
            for (Index k : order)
            {
                const Index g = s.group(k);
                RealMatrix ext = extended_shifted(adcpms[k].values, s.symbol_shift(k), cfg.subcarriers);
                if (agg[g].size() == 0)
                    agg[g] = std::move(ext);
                else
                {
                    const double na = agg[g].norm(), nb = ext.norm();
                    out[k] = (na > 0.0 && nb > 0.0) ? std::min(1.0, agg[g].cwiseProduct(ext).sum() / (na * nb)) : 0.0;
                    agg[g] += ext;
                }
            }
            return out;
        }
    }

    double overlap(const RealMatrix &a, const RealMatrix &b)
    {
        if (a.rows() != b.rows() || a.cols() != b.cols())
            throw invalid_dimension("overlap needs equally sized matrices");
        const double na = a.norm(), nb = b.norm();
        if (na == 0.0 || nb == 0.0)
            throw undefined_overlap("overlap undefined for an all-zero matrix");
        return a.cwiseProduct(b).sum() / (na * nb);
    }

    NonOverlapReport check_nonoverlap_condition(const PilotSchedule &schedule, const std::vector<Adcpm> &adcpms,
                                                const SystemConfig &cfg, double tol)
    {
        check_adcpms(adcpms, cfg);
        schedule.validate(Index(adcpms.size()));
        const Index kc = Index(adcpms.size());
        if (tol < 0.0)
        {
            double m = 0.0;
            for (const auto &a : adcpms)
                m = std::max(m, a.values.maxCoeff());
            tol = 1e-12 * m * m;
        }
        std::vector<RealMatrix> ext;
        for (Index k = 0; k < kc; ++k)
            ext.push_back(extended_shifted(adcpms[k].values, schedule.symbol_shift(k), cfg.subcarriers));
        NonOverlapReport r;
        r.pair.setConstant(kc, kc, true);
        for (Index a = 0; a < kc; ++a)
            for (Index b = a + 1; b < kc; ++b)
            {
                if (schedule.group(a) != schedule.group(b))
                    continue;
                const bool ok = ext[a].cwiseProduct(ext[b]).maxCoeff() <= tol;
                r.pair(a, b) = r.pair(b, a) = ok;
            }
        return r;
    }

    ScheduleResult schedule_apsp(const std::vector<Adcpm> &adcpms, const SystemConfig &cfg, Index q,
                                 const ScheduleOptions &opt)
    {
        check_adcpms(adcpms, cfg);
        if (q < 1)
            throw std::invalid_argument("segment length must be at least 1");
        if (!(opt.gamma >= 0.0 && opt.gamma <= 1.0))
            throw std::invalid_argument("overlap threshold must lie in [0, 1]");
        const Index kc = Index(adcpms.size()), nc = cfg.subcarriers;

        std::vector<Index> order(static_cast<std::size_t>(kc));
        std::iota(order.begin(), order.end(), Index(0));
        if (opt.order == UtOrder::descending_power)
            std::stable_sort(order.begin(), order.end(),
                             [&](Index a, Index b) { return adcpms[a].total() > adcpms[b].total(); });

        std::vector<std::vector<Index>> groups(static_cast<std::size_t>(q));
        const Index per = (kc + q - 1) / q;
        for (Index pos = 0; pos < kc; ++pos)
        {
            const Index g = opt.grouping == Grouping::round_robin ? pos % q : pos / per;
            groups[g].push_back(order[pos]);
        }

        std::vector<long long> phis(static_cast<std::size_t>(kc), 0);
        std::vector<double> xi(static_cast<std::size_t>(kc), 0.0);
        parallel_for(static_cast<std::size_t>(q), [&](std::size_t g) {
            RealMatrix agg;
            for (std::size_t pos = 0; pos < groups[g].size(); ++pos)
            {
                const Index k = groups[g][pos];
                const RealMatrix &w = adcpms[k].values;
                Index chosen = 0;
                if (pos > 0)
                {
                    const double scale = agg.norm() * w.norm();
                    if (scale == 0.0)
                        throw undefined_overlap("overlap undefined for an all-zero power matrix");
                    double best = std::numeric_limits<double>::infinity();
                    for (Index s = 0; s < nc; ++s)
                    {
                        const double v = shifted_inner(agg, w, s) / scale;
                        if (v <= opt.gamma)
                        {
                            chosen = s, best = v;
                            break;
                        }
                        if (v < best)
                            best = v, chosen = s;
                    }
                    xi[k] = std::clamp(best, 0.0, 1.0);
                }
                phis[k] = (long long)chosen * q + (long long)g;
                RealMatrix ext = extended_shifted(w, chosen, nc);
                if (pos == 0)
                    agg = std::move(ext);
                else
                    agg += ext;
            }
        });

        ScheduleResult r;
        r.schedule = PilotSchedule(q, nc, std::move(phis));
        r.achieved_overlaps = std::move(xi);
        r.condition_met = check_nonoverlap_condition(r.schedule, adcpms, cfg).all();
        return r;
    }

    ScheduleResult exhaustive_schedule(const std::vector<Adcpm> &adcpms, const SystemConfig &cfg, Index q)
    {
        check_adcpms(adcpms, cfg);
        if (q < 1)
            throw std::invalid_argument("segment length must be at least 1");
        const Index kc = Index(adcpms.size());
        const long long span = (long long)q * cfg.subcarriers;
        if (kc > 4 || span > 64)
            throw size_guard_exceeded("exhaustive search limited to K <= 4 and Q*Nc <= 64, got K = " +
                                      std::to_string(kc) + ", Q*Nc = " + std::to_string(span) + " (" +
                                      std::to_string((long long)std::pow(double(span), double(kc - 1))) +
                                      " patterns)");
        long long patterns = 1;
        for (Index k = 1; k < kc; ++k)
            patterns *= span;
        const long long outer = kc > 1 ? span : 1;
        const long long inner = patterns / outer;

        auto decode = [&](long long idx) {
            std::vector<long long> phis(static_cast<std::size_t>(kc), 0);
            for (Index k = kc - 1; k >= 1; --k)
            {
                phis[k] = idx % span;
                idx /= span;
            }
            return phis;
        };

        std::vector<double> best_val(static_cast<std::size_t>(outer), std::numeric_limits<double>::infinity());
        std::vector<long long> best_idx(static_cast<std::size_t>(outer), 0);
        parallel_for(static_cast<std::size_t>(outer), [&](std::size_t o) {
            for (long long i = 0; i < inner; ++i)
            {
                const long long idx = (long long)o * inner + i;
                const PilotSchedule s(q, cfg.subcarriers, decode(idx));
                const double v = analytic_mse_ce(s, adcpms, cfg).total;
                if (v < best_val[o])
                    best_val[o] = v, best_idx[o] = idx;
            }
        });
        std::size_t win = 0;
        for (std::size_t o = 1; o < best_val.size(); ++o)
            if (best_val[o] < best_val[win])
                win = o;

        ScheduleResult r;
        r.schedule = PilotSchedule(q, cfg.subcarriers, decode(best_idx[win]));
        std::vector<Index> order(static_cast<std::size_t>(kc));
        std::iota(order.begin(), order.end(), Index(0));
        r.achieved_overlaps = achieved(r.schedule, adcpms, order, cfg);
        r.condition_met = check_nonoverlap_condition(r.schedule, adcpms, cfg).all();
        return r;
    }
}
