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

#include "apsp/rate.hpp"
#include "apsp/errors.hpp"
#include "apsp/estimation.hpp"
#include "apsp/experiments.hpp"
#include "apsp/parallel.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

namespace apsp
{
    namespace
    {
        constexpr Index rate_guard = 4096;

        struct SymbolModel
        {
            bool uplink = true;
            std::vector<double> scale;          // per UT: estimate multiplier
            std::vector<Eigen::VectorXd> error; // per UT: angle-domain error variance per antenna
        };

        // Per-antenna error variance sum_j eps(i, j) / Nc of one UT at one lag
        Eigen::VectorXd error_profile(const RealMatrix &omega, const RealMatrix &interference, double noise, double rho,
                                      bool predicted, Index nc)
        {
            const Eigen::ArrayXXd o = omega.array();
            const Eigen::ArrayXXd d = interference.array() + noise;
            const Eigen::ArrayXXd eps = predicted ? (o - rho * rho * o.square() / d).eval()
                                                  : (o + (1.0 - 2.0 * rho) * o.square() / d).eval();
            return eps.rowwise().sum().matrix() / double(nc);
        }

        // Sum over UTs of log2(1 + SINR) at one subcarrier
        double subcarrier_rate(const ComplexMatrix &g, const SymbolModel &sym, const Eigen::VectorXd &error_sum,
                               double noise)
        {
            const Index m = g.rows(), kc = g.cols();
            ComplexMatrix a = g * g.adjoint();
            a.diagonal().array() += (error_sum.array() + noise).cast<cdouble>();
            const ComplexMatrix w = a.llt().solve(g);
            double sum = 0.0;
            if (sym.uplink)
            {
                const ComplexMatrix t = w.adjoint() * g; // t(k, j) = w_k^H g_j
                for (Index k = 0; k < kc; ++k)
                {
                    const double sig = std::norm(t(k, k));
                    const double interf = t.row(k).squaredNorm() - sig;
                    double dist = 0.0;
                    for (Index i = 0; i < m; ++i)
                        dist += std::norm(w(i, k)) * (error_sum(i) + noise);
                    sum += std::log2(1.0 + sig / (interf + dist));
                }
                return sum;
            }
            const double fro = w.squaredNorm();
            const ComplexMatrix p = w * std::sqrt(double(kc) / fro);
            const ComplexMatrix t = g.adjoint() * p; // t(k, j) = g_k^H p_j
            const Eigen::VectorXd row_power = p.rowwise().squaredNorm();
            for (Index k = 0; k < kc; ++k)
            {
                const double sig = std::norm(t(k, k));
                const double interf = t.row(k).squaredNorm() - sig;
                const double dist = sym.error[static_cast<std::size_t>(k)].dot(row_power);
                sum += std::log2(1.0 + sig / (interf + dist + noise));
            }
            return sum;
        }
    }

    RateReport evaluate_spectral_efficiency(const ExperimentSpec &spec)
    {
        spec.validate();
        const Index m = spec.system.antennas, kc = spec.system.users, nc = spec.system.subcarriers;
        if (m * kc > rate_guard)
            throw size_guard_exceeded("rate evaluation limited to M*K <= 4096, got " + std::to_string(m * kc) +
                                      "; use scale = desk or fewer antennas/UTs");
        const ChannelSet ch = make_channels(spec);
        const BasicPilot basic = make_basic_pilot(nc, spec.basic_kind, spec.basic_root);
        const std::string scen = scenario_name(spec.scenario);
        const double guard_factor = double(nc) / double(nc + spec.system.guard);

        RateReport report;
        for (Scheme scheme : spec.schemes)
        {
            const PilotSchedule sched = make_schedule(spec, scheme, ch.adcpms);
            const Index q = sched.segment_length;
            const bool predicted = spec.acquisition_for(scheme) == Acquisition::prediction;
            const auto layout = frame_layout(spec.frame, spec.frame_len, q);
            const auto table = interference_table(sched, ch.adcpms, spec.system);

            for (double snr : spec.snr_db)
            {
                SystemConfig cfg = spec.system;
                cfg.pilot_snr = std::pow(10.0, snr / 10.0);
                const double pilot_noise = 1.0 / (cfg.pilot_snr * double(q));
                const double data_noise = 1.0 / cfg.pilot_snr;

                std::vector<SymbolModel> symbols;
                std::vector<Eigen::VectorXd> error_sums;
                for (const auto &ds : layout)
                {
                    SymbolModel sm;
                    sm.uplink = ds.uplink;
                    Eigen::VectorXd es = Eigen::VectorXd::Zero(m);
                    for (Index k = 0; k < kc; ++k)
                    {
                        const double rho = tcf(ch.profiles[k].doppler_nu, cfg.symbol_duration(), ds.delta_ell);
                        sm.scale.push_back(predicted ? rho : 1.0);
                        sm.error.push_back(error_profile(ch.adcpms[k].values, table[k], pilot_noise, rho, predicted, nc));
                        es += sm.error.back();
                    }
                    symbols.push_back(std::move(sm));
                    error_sums.push_back(std::move(es));
                }
                std::vector<RealMatrix> denom;
                for (const auto &t : table)
                    denom.push_back((t.array() + pilot_noise).matrix());

                // Per trial and symbol: subcarrier-averaged sum rate
                const std::size_t ns = layout.size();
                std::vector<double> rates(static_cast<std::size_t>(spec.trials) * ns, 0.0);
                parallel_for(static_cast<std::size_t>(spec.trials), [&](std::size_t t) {
                    std::vector<Adcrm> h;
                    for (Index k = 0; k < kc; ++k)
                        h.push_back(sample_adcrm(ch.adcpms[k], StreamKey{spec.seed, std::uint64_t(k), 0, t, StreamPurpose::channel}));
                    Rng nrng(StreamKey{spec.seed, 0, 0, t, StreamPurpose::noise});
                    const ComplexMatrix y = synthesize_received(h, sched, basic, cfg, cfg.noise_power(), nrng);
                    const auto obs = decorrelate_all(y, sched, basic, cfg);
                    std::vector<ComplexMatrix> est; // angle-frequency estimates
                    for (Index k = 0; k < kc; ++k)
                        est.push_back(delay_to_frequency(mmse_estimate(obs[k], ch.adcpms[k], denom[k]).values, nc));
                    ComplexMatrix g(m, kc);
                    for (std::size_t s = 0; s < ns; ++s)
                    {
                        double acc = 0.0;
                        Index count = 0;
                        for (Index n = 0; n < nc; n += spec.rate_subsample, ++count)
                        {
                            for (Index k = 0; k < kc; ++k)
                                g.col(k) = symbols[s].scale[k] * est[k].col(n);
                            acc += subcarrier_rate(g, symbols[s], error_sums[s], data_noise);
                        }
                        rates[t * ns + s] = acc / double(count);
                    }
                });

                RatePoint pt;
                pt.scenario = scen;
                pt.scheme = scheme_name(scheme);
                pt.frame = frame_name(spec.frame);
                pt.acquisition = predicted ? "CP" : "CE";
                pt.q = q;
                pt.snr_db = snr;
                pt.data_fraction = data_fraction(spec.frame_len, q);
                for (std::size_t s = 0; s < ns; ++s)
                {
                    double mean = 0.0;
                    for (Index t = 0; t < spec.trials; ++t)
                        mean += rates[std::size_t(t) * ns + s];
                    mean /= double(spec.trials);
                    const double contrib = mean * guard_factor / double(spec.frame_len);
                    (layout[s].uplink ? pt.uplink : pt.downlink) += contrib;
                }
                report.points.push_back(pt);
            }
        }
        return report;
    }

    std::string rate_csv_header()
    {
        return "scenario,scheme,frame,acquisition,Q,snr_db,ul_se,dl_se,total_se,data_fraction,model";
    }

    void write_rate_results(std::ostream &os, const RateReport &report)
    {
        os << rate_csv_header() << "\n";
        for (const auto &p : report.points)
            os << p.scenario << "," << p.scheme << "," << p.frame << "," << p.acquisition << "," << p.q << ","
               << format_number(p.snr_db) << "," << format_number(p.uplink) << "," << format_number(p.downlink) << ","
               << format_number(p.total()) << "," << format_number(p.data_fraction) << ",approximation\n";
    }

    void write_rate_results(const RateReport &report, const std::string &path)
    {
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot open '" + path + "' for writing");
        write_rate_results(f, report);
        f.flush();
        if (!f)
            throw std::runtime_error("write to '" + path + "' failed");
    }
}
