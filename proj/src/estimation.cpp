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

#include "apsp/estimation.hpp"
#include "apsp/errors.hpp"
#include "apsp/parallel.hpp"

#include <cmath>
#include <string>

namespace apsp
{
    namespace
    {
        void check_inputs(const PilotSchedule &schedule, const std::vector<Adcpm> &adcpms, const SystemConfig &cfg)
        {
            cfg.validate();
            schedule.validate(Index(adcpms.size()));
            if (schedule.subcarriers != cfg.subcarriers)
                throw invalid_dimension("schedule subcarrier count differs from the system");
            for (const auto &a : adcpms)
                if (a.values.rows() != cfg.antennas || a.values.cols() != cfg.guard)
                    throw invalid_dimension("power matrix must be antennas x guard");
        }

        std::vector<double> correlations(const std::vector<UTProfile> &profiles, long long delta_ell,
                                         const SystemConfig &cfg)
        {
            std::vector<double> rho;
            rho.reserve(profiles.size());
            for (const auto &p : profiles)
                rho.push_back(tcf(p.doppler_nu, cfg.symbol_duration(), delta_ell));
            return rho;
        }

        // Pilot symbols of every UT, indexed [ut][q]
        std::vector<std::vector<ComplexVector>> all_pilots(const PilotSchedule &s, const BasicPilot &basic,
                                                           const SystemConfig &cfg)
        {
            if (basic.x.size() != cfg.subcarriers || s.subcarriers != cfg.subcarriers)
                throw invalid_dimension("pilot length differs from the subcarrier count");
            std::vector<std::vector<ComplexVector>> out;
            for (Index k = 0; k < s.users(); ++k)
                out.push_back(make_apsp_multi(basic, s.unitary, s.phi(k), s.segment_length, cfg.pilot_power));
            return out;
        }

        ObservationMatrix observe(const std::vector<ComplexMatrix> &angle_y, const std::vector<ComplexVector> &pilot,
                                  Index ut, Index q, const SystemConfig &cfg)
        {
            ComplexMatrix acc = ComplexMatrix::Zero(cfg.antennas, cfg.subcarriers);
            for (Index s = 0; s < q; ++s)
                acc.array() += angle_y[s].array().rowwise() * pilot[s].conjugate().transpose().array();
            ObservationMatrix obs;
            obs.values = frequency_to_delay(acc, cfg.guard) / (cfg.pilot_power * double(q));
            obs.ut = ut;
            obs.segment_length = q;
            return obs;
        }

        std::vector<ComplexMatrix> angle_blocks(const ComplexMatrix &y, Index q, const SystemConfig &cfg)
        {
            if (y.rows() != cfg.antennas || y.cols() != cfg.subcarriers * q)
                throw invalid_dimension("received matrix must be antennas x (Nc * Q)");
            std::vector<ComplexMatrix> out;
            for (Index s = 0; s < q; ++s)
                out.push_back(antenna_to_angle(y.middleCols(s * cfg.subcarriers, cfg.subcarriers)));
            return out;
        }

        double mean_of(const std::vector<double> &v)
        {
            double s = 0.0;
            for (double x : v)
                s += x;
            return v.empty() ? 0.0 : s / double(v.size());
        }

        double standard_error_of(const std::vector<double> &v)
        {
            if (v.size() < 2)
                return 0.0;
            const double m = mean_of(v);
            double ss = 0.0;
            for (double x : v)
                ss += (x - m) * (x - m);
            return std::sqrt(ss / double(v.size() - 1) / double(v.size()));
        }
    }

    std::string kind_name(MseKind k)
    {
        switch (k)
        {
        case MseKind::ce:
            return "CE";
        case MseKind::ce_delay:
            return "CE-delay";
        case MseKind::cp:
            return "CP";
        }
        return "unknown";
    }

    ComplexMatrix synthesize_received(const std::vector<Adcrm> &channels, const PilotSchedule &schedule,
                                      const BasicPilot &basic, const SystemConfig &cfg, double sigma_ztr, Rng &noise)
    {
        cfg.validate();
        schedule.validate(Index(channels.size()));
        const Index q = schedule.segment_length, nc = cfg.subcarriers;
        const auto pilots = all_pilots(schedule, basic, cfg);
        ComplexMatrix y = ComplexMatrix::Zero(cfg.antennas, nc * q);
        for (std::size_t k = 0; k < channels.size(); ++k)
        {
            const ComplexMatrix g = adcrm_to_sfcrm(channels[k], cfg).values;
            for (Index s = 0; s < q; ++s)
                y.middleCols(s * nc, nc).array() += g.array().rowwise() * pilots[k][s].transpose().array();
        }
        if (sigma_ztr < 0.0)
            throw std::invalid_argument("noise power must be nonnegative");
        if (sigma_ztr > 0.0)
            for (Index j = 0; j < y.cols(); ++j)
                for (Index i = 0; i < y.rows(); ++i)
                    y(i, j) += noise.complex_normal(sigma_ztr);
        return y;
    }

    ObservationMatrix decorrelate_observation(const ComplexMatrix &y, Index ut, const PilotSchedule &schedule,
                                              const BasicPilot &basic, const SystemConfig &cfg)
    {
        if (ut < 0 || ut >= schedule.users())
            throw std::out_of_range("unknown UT index " + std::to_string(ut));
        const Index q = schedule.segment_length;
        const auto pilot = make_apsp_multi(basic, schedule.unitary, schedule.phi(ut), q, cfg.pilot_power);
        return observe(angle_blocks(y, q, cfg), pilot, ut, q, cfg);
    }

    std::vector<ObservationMatrix> decorrelate_all(const ComplexMatrix &y, const PilotSchedule &schedule,
                                                   const BasicPilot &basic, const SystemConfig &cfg)
    {
        const Index q = schedule.segment_length;
        const auto blocks = angle_blocks(y, q, cfg);
        const auto pilots = all_pilots(schedule, basic, cfg);
        std::vector<ObservationMatrix> out;
        for (Index k = 0; k < schedule.users(); ++k)
            out.push_back(observe(blocks, pilots[k], k, q, cfg));
        return out;
    }

    RealMatrix interference_power(Index ut, const PilotSchedule &schedule, const std::vector<Adcpm> &adcpms,
                                  const SystemConfig &cfg)
    {
        check_inputs(schedule, adcpms, cfg);
        if (ut < 0 || ut >= schedule.users())
            throw std::out_of_range("unknown UT index " + std::to_string(ut));
        RealMatrix acc = RealMatrix::Zero(cfg.antennas, cfg.guard);
        for (Index k = 0; k < schedule.users(); ++k)
        {
            if (schedule.group(k) != schedule.group(ut))
                continue;
            if (k == ut)
                acc += adcpms[k].values;
            else
                acc += shifted_power_matrix(adcpms[k].values, schedule.symbol_shift(k) - schedule.symbol_shift(ut),
                                            cfg.subcarriers);
        }
        return acc;
    }

    std::vector<RealMatrix> interference_table(const PilotSchedule &schedule, const std::vector<Adcpm> &adcpms,
                                               const SystemConfig &cfg)
    {
        std::vector<RealMatrix> out;
        for (Index k = 0; k < schedule.users(); ++k)
            out.push_back(interference_power(k, schedule, adcpms, cfg));
        return out;
    }

    RealMatrix interference_denominator(Index ut, const PilotSchedule &schedule, const std::vector<Adcpm> &adcpms,
                                        const SystemConfig &cfg)
    {
        const double n = 1.0 / (cfg.pilot_snr * double(schedule.segment_length));
        return (interference_power(ut, schedule, adcpms, cfg).array() + n).matrix();
    }

    Adcrm mmse_estimate(const ObservationMatrix &obs, const Adcpm &omega, const RealMatrix &denominator)
    {
        if (obs.values.rows() != omega.values.rows() || obs.values.cols() != omega.values.cols() ||
            denominator.rows() != omega.values.rows() || denominator.cols() != omega.values.cols())
            throw invalid_dimension("observation, power and denominator matrices differ in size");
        return Adcrm{(obs.values.array() * (omega.values.array() / denominator.array()).cast<cdouble>()).matrix()};
    }

    Adcrm mmse_estimate(const ObservationMatrix &obs, Index ut, const PilotSchedule &schedule,
                        const std::vector<Adcpm> &adcpms, const SystemConfig &cfg)
    {
        if (obs.ut != ut)
            throw std::invalid_argument("observation belongs to UT " + std::to_string(obs.ut) + ", not " +
                                        std::to_string(ut));
        return mmse_estimate(obs, adcpms.at(ut), interference_denominator(ut, schedule, adcpms, cfg));
    }

    Adcrm predict(const Adcrm &estimate, const UTProfile &profile, long long delta_ell, const SystemConfig &cfg)
    {
        const double rho = tcf(profile.doppler_nu, cfg.symbol_duration(), delta_ell);
        return Adcrm{rho * estimate.values};
    }

    MseReport analytic_mse(MseKind kind, const std::vector<RealMatrix> &interference, const std::vector<Adcpm> &adcpms,
                           const std::vector<double> &rho, long long delta_ell, Index segment_length,
                           const SystemConfig &cfg)
    {
        const std::size_t k_count = adcpms.size();
        if (interference.size() != k_count || rho.size() != k_count)
            throw invalid_dimension("per-UT inputs differ in count");
        const double noise = 1.0 / (cfg.pilot_snr * double(segment_length));
        MseReport r;
        r.kind = kind;
        r.delta_ell = kind == MseKind::ce ? 0 : delta_ell;
        r.normalization = double(cfg.subcarriers) * double(k_count);
        r.per_ut.assign(k_count, 0.0);
        for (std::size_t k = 0; k < k_count; ++k)
        {
            const auto &w = adcpms[k].values;
            const auto &ip = interference[k];
            const double p = rho[k];
            // Coefficient on omega^2 / D for the error and for the bound
            double c = 1.0, cb = 1.0;
            if (kind == MseKind::ce_delay)
                c = 2.0 * p - 1.0, cb = p * p;
            else if (kind == MseKind::cp)
                c = p * p, cb = p * p;
            double e = 0.0, b = 0.0;
            for (Index j = 0; j < w.cols(); ++j)
                for (Index i = 0; i < w.rows(); ++i)
                {
                    const double o = w(i, j);
                    const double sq = o * o;
                    e += o - c * sq / (ip(i, j) + noise);
                    b += o - cb * sq / (o + noise);
                }
            r.per_ut[k] = e;
            r.total += e;
            r.bound_total += b;
        }
        return r;
    }

    MseReport analytic_mse_ce(const PilotSchedule &schedule, const std::vector<Adcpm> &adcpms, const SystemConfig &cfg)
    {
        const auto table = interference_table(schedule, adcpms, cfg);
        return analytic_mse(MseKind::ce, table, adcpms, std::vector<double>(adcpms.size(), 1.0), 0,
                            schedule.segment_length, cfg);
    }

    MseReport analytic_mse_ce_with_delay(const PilotSchedule &schedule, const std::vector<Adcpm> &adcpms,
                                         const std::vector<UTProfile> &profiles, long long delta_ell,
                                         const SystemConfig &cfg)
    {
        const auto table = interference_table(schedule, adcpms, cfg);
        return analytic_mse(MseKind::ce_delay, table, adcpms, correlations(profiles, delta_ell, cfg), delta_ell,
                            schedule.segment_length, cfg);
    }

    MseReport analytic_mse_cp(const PilotSchedule &schedule, const std::vector<Adcpm> &adcpms,
                              const std::vector<UTProfile> &profiles, long long delta_ell, const SystemConfig &cfg)
    {
        const auto table = interference_table(schedule, adcpms, cfg);
        return analytic_mse(MseKind::cp, table, adcpms, correlations(profiles, delta_ell, cfg), delta_ell,
                            schedule.segment_length, cfg);
    }

    EmpiricalSweep empirical_mse_sweep(const PilotSchedule &schedule, const std::vector<UTProfile> &profiles,
                                       const std::vector<Adcpm> &adcpms, const SystemConfig &cfg,
                                       const BasicPilot &basic, const std::vector<long long> &lags, Index trials,
                                       std::uint64_t seed, std::size_t workers)
    {
        if (trials < 1)
            throw std::invalid_argument("Monte Carlo needs at least one trial");
        check_inputs(schedule, adcpms, cfg);
        if (profiles.size() != adcpms.size())
            throw invalid_dimension("profile and power matrix counts differ");
        const std::size_t kc = adcpms.size(), nl = lags.size();
        const Index q = schedule.segment_length;
        const double noise_var = cfg.noise_power();
        const auto table = interference_table(schedule, adcpms, cfg);
        std::vector<RealMatrix> denom;
        for (const auto &t : table)
            denom.push_back((t.array() + 1.0 / (cfg.pilot_snr * double(q))).matrix());
        std::vector<std::vector<double>> rho(nl);
        for (std::size_t l = 0; l < nl; ++l)
            rho[l] = correlations(profiles, lags[l], cfg);

        // Per trial: kc CE errors, then kc x nl stale and kc x nl predicted errors
        const std::size_t stride = kc * (1 + 2 * nl);
        std::vector<double> errs(static_cast<std::size_t>(trials) * stride, 0.0);

        parallel_for(
            static_cast<std::size_t>(trials),
            [&](std::size_t t) {
                std::vector<Adcrm> h;
                for (std::size_t k = 0; k < kc; ++k)
                    h.push_back(sample_adcrm(adcpms[k], StreamKey{seed, k, 0, t, StreamPurpose::channel}));
                Rng nrng(StreamKey{seed, 0, 0, t, StreamPurpose::noise});
                const ComplexMatrix y = synthesize_received(h, schedule, basic, cfg, noise_var, nrng);
                const auto obs = decorrelate_all(y, schedule, basic, cfg);
                double *e = errs.data() + t * stride;
                for (std::size_t k = 0; k < kc; ++k)
                {
                    const Adcrm est = mmse_estimate(obs[k], adcpms[k], denom[k]);
                    e[k] = (h[k].values - est.values).squaredNorm();
                    for (std::size_t l = 0; l < nl; ++l)
                    {
                        Rng erng(StreamKey{seed, k, static_cast<std::uint64_t>(lags[l]), t, StreamPurpose::evolution});
                        const Adcrm later = evolve_adcrm(h[k], adcpms[k], rho[l][k], erng);
                        e[kc + l * kc + k] = (later.values - est.values).squaredNorm();
                        e[kc * (1 + nl) + l * kc + k] = (later.values - rho[l][k] * est.values).squaredNorm();
                    }
                }
            },
            workers);

        auto reduce = [&](MseKind kind, long long lag, std::size_t offset) {
            MseReport r;
            r.kind = kind;
            r.delta_ell = lag;
            r.normalization = double(cfg.subcarriers) * double(kc);
            r.per_ut.assign(kc, 0.0);
            std::vector<double> totals(static_cast<std::size_t>(trials), 0.0);
            for (std::size_t t = 0; t < std::size_t(trials); ++t)
                for (std::size_t k = 0; k < kc; ++k)
                {
                    const double v = errs[t * stride + offset + k];
                    r.per_ut[k] += v;
                    totals[t] += v;
                }
            for (auto &v : r.per_ut)
                v /= double(trials);
            for (double v : r.per_ut)
                r.total += v;
            r.standard_error = standard_error_of(totals);
            return r;
        };

        EmpiricalSweep out;
        out.ce = reduce(MseKind::ce, 0, 0);
        out.ce.bound_total = analytic_mse(MseKind::ce, table, adcpms, std::vector<double>(kc, 1.0), 0, q, cfg).bound_total;
        for (std::size_t l = 0; l < nl; ++l)
        {
            auto d = reduce(MseKind::ce_delay, lags[l], kc + l * kc);
            auto p = reduce(MseKind::cp, lags[l], kc * (1 + nl) + l * kc);
            d.bound_total = p.bound_total = analytic_mse(MseKind::cp, table, adcpms, rho[l], lags[l], q, cfg).bound_total;
            out.ce_delay.push_back(std::move(d));
            out.cp.push_back(std::move(p));
        }
        return out;
    }

    MseReport empirical_mse(MseKind kind, Index trials, const PilotSchedule &schedule,
                            const std::vector<UTProfile> &profiles, const SystemConfig &cfg, std::uint64_t seed,
                            long long delta_ell)
    {
        std::vector<Adcpm> adcpms;
        for (const auto &p : profiles)
            adcpms.push_back(build_adcpm(p, cfg));
        const BasicPilot basic = make_basic_pilot(cfg.subcarriers);
        if (kind == MseKind::ce)
            return empirical_mse_sweep(schedule, profiles, adcpms, cfg, basic, {}, trials, seed).ce;
        auto sweep = empirical_mse_sweep(schedule, profiles, adcpms, cfg, basic, {delta_ell}, trials, seed);
        return kind == MseKind::cp ? sweep.cp.front() : sweep.ce_delay.front();
    }
}
