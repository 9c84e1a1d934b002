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

#include "apsp/pilots.hpp"
#include "apsp/errors.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

namespace apsp
{
    namespace
    {
        constexpr double pi = std::numbers::pi;

        cdouble unit_phase(double a) { return {std::cos(a), std::sin(a)}; }
    }

    BasicPilot make_basic_pilot(Index subcarriers, BasicKind kind, long long root)
    {
        if (subcarriers < 1)
            throw invalid_dimension("pilot length must be at least 1");
        BasicPilot b;
        b.kind = kind;
        b.root = root;
        b.x.resize(subcarriers);
        if (kind == BasicKind::all_ones)
        {
            b.x.setOnes();
            return b;
        }
        if (std::gcd(root, (long long)subcarriers) != 1)
            throw std::invalid_argument("root " + std::to_string(root) + " is not coprime with " +
                                        std::to_string(subcarriers));
        const long long nc = subcarriers;
        const long long r = ((root % nc) + nc) % nc;
        const bool odd = nc % 2 == 1;
        for (long long n = 0; n < nc; ++n)
        {
            // Exponent reduced modulo 2 Nc keeps the phase argument small
            const long long e = odd ? (r * ((n * (n + 1)) % (2 * nc))) % (2 * nc) : (r * ((n * n) % (2 * nc))) % (2 * nc);
            b.x(n) = unit_phase(-pi * double(e) / double(nc));
        }
        return b;
    }

    ComplexVector make_apsp_single(const BasicPilot &basic, long long phi, double sigma_xtr)
    {
        const Index nc = basic.x.size();
        if (phi < 0 || phi >= nc)
            throw std::invalid_argument("phase shift " + std::to_string(phi) + " outside [0, " + std::to_string(nc) + ")");
        const double amp = std::sqrt(sigma_xtr);
        ComplexVector out(nc);
        for (Index n = 0; n < nc; ++n)
            out(n) = amp * unit_phase(-2.0 * pi * double((n * phi) % nc) / double(nc)) * basic.x(n);
        return out;
    }

    void require_unitary(const ComplexMatrix &u)
    {
        if (u.rows() != u.cols() || u.rows() < 1)
            throw std::invalid_argument("unitary matrix must be square and nonempty");
        const double err = (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.rows())).norm();
        if (!(err <= 1e-10))
            throw std::invalid_argument("matrix is not unitary (||U^H U - I|| = " + std::to_string(err) + ")");
    }

    std::vector<ComplexVector> make_apsp_multi(const BasicPilot &basic, const ComplexMatrix &unitary, long long phi,
                                               Index q, double sigma_xtr)
    {
        const Index nc = basic.x.size();
        if (q < 1)
            throw std::invalid_argument("segment length must be at least 1");
        if (unitary.rows() != q)
            throw invalid_dimension("unitary matrix must be Q x Q");
        require_unitary(unitary);
        if (phi < 0 || phi >= q * nc)
            throw std::invalid_argument("phase shift " + std::to_string(phi) + " outside [0, " +
                                        std::to_string(q * nc) + ")");
        const ComplexVector single = make_apsp_single(basic, phi / q, sigma_xtr);
        const double g = std::sqrt(double(q));
        std::vector<ComplexVector> out;
        out.reserve(static_cast<std::size_t>(q));
        for (Index s = 0; s < q; ++s)
            out.push_back(g * unitary(Index(phi % q), s) * single);
        return out;
    }

    ComplexVector pilot_cross_correlation(const std::vector<ComplexVector> &a, const std::vector<ComplexVector> &b)
    {
        if (a.size() != b.size() || a.empty())
            throw invalid_dimension("pilots must span the same nonzero number of symbols");
        const Index nc = a.front().size();
        ComplexVector out = ComplexVector::Zero(nc);
        for (std::size_t q = 0; q < a.size(); ++q)
        {
            if (a[q].size() != nc || b[q].size() != nc)
                throw invalid_dimension("pilot symbols differ in length");
            out += a[q].cwiseProduct(b[q].conjugate());
        }
        return out;
    }

    PilotSchedule::PilotSchedule(Index q, Index nc, std::vector<long long> phis)
        : segment_length(q), subcarriers(nc), unitary(dft_matrix(q))
    {
        assignments.reserve(phis.size());
        for (std::size_t k = 0; k < phis.size(); ++k)
            assignments.push_back({Index(k), phis[k]});
        validate(Index(phis.size()));
    }

    long long PilotSchedule::phi(Index ut) const
    {
        if (ut < 0 || ut >= users())
            throw std::out_of_range("unknown UT index " + std::to_string(ut));
        return assignments[static_cast<std::size_t>(ut)].phi;
    }

    void PilotSchedule::validate(Index expected_users) const
    {
        if (segment_length < 1 || subcarriers < 1)
            throw invalid_dimension("schedule needs Q >= 1 and Nc >= 1");
        if (users() != expected_users)
            throw invalid_dimension("schedule has " + std::to_string(users()) + " assignments, expected " +
                                    std::to_string(expected_users));
        if (unitary.rows() != segment_length)
            throw invalid_dimension("unitary matrix must be Q x Q");
        require_unitary(unitary);
        for (std::size_t k = 0; k < assignments.size(); ++k)
        {
            const auto &a = assignments[k];
            if (a.ut != Index(k))
                throw std::invalid_argument("assignments must be ordered by UT index");
            if (a.phi < 0 || a.phi >= segment_length * subcarriers)
                throw std::invalid_argument("UT " + std::to_string(k) + " phase shift " + std::to_string(a.phi) +
                                            " out of range");
        }
    }

    Index psop_segment_length(Index users, Index guard, Index subcarriers)
    {
        if (users < 1 || guard < 1 || subcarriers < guard)
            throw invalid_dimension("orthogonal pilots need K >= 1 and 1 <= Ng <= Nc");
        const Index per = subcarriers / guard;
        return (users + per - 1) / per;
    }

    PilotSchedule make_psop_schedule(Index users, Index guard, Index subcarriers)
    {
        const Index q = psop_segment_length(users, guard, subcarriers);
        const Index per = subcarriers / guard;
        std::vector<long long> phis(static_cast<std::size_t>(users));
        for (Index k = 0; k < users; ++k)
        {
            const Index group = k / per;
            const long long shift = (long long)(k % per) * guard;
            phis[static_cast<std::size_t>(k)] = shift * q + group;
        }
        return PilotSchedule(q, subcarriers, std::move(phis));
    }

    void write_schedule(std::ostream &os, const PilotSchedule &s)
    {
        os << "Q " << s.segment_length << "\n";
        os << "Nc " << s.subcarriers << "\n";
        for (const auto &a : s.assignments)
            os << a.ut << " " << a.phi << "\n";
    }

    void write_schedule(const std::string &path, const PilotSchedule &s)
    {
        std::ofstream f(path);
        if (!f)
            throw std::runtime_error("cannot open '" + path + "' for writing");
        write_schedule(f, s);
        if (!f)
            throw std::runtime_error("write to '" + path + "' failed");
    }

    PilotSchedule read_schedule(std::istream &is)
    {
        Index q = -1, nc = -1;
        std::vector<long long> phis;
        std::string line;
        int lineno = 0;
        while (std::getline(is, line))
        {
            ++lineno;
            if (auto h = line.find('#'); h != std::string::npos)
                line.erase(h);
            std::istringstream ls(line);
            std::string first;
            if (!(ls >> first))
                continue;
            auto fail = [&] { return config_error("schedule line " + std::to_string(lineno) + ": malformed '" + line + "'"); };
            long long value = 0;
            if (first == "Q" || first == "Nc")
            {
                if (!(ls >> value))
                    throw fail();
                (first == "Q" ? q : nc) = Index(value);
                continue;
            }
            long long ut = 0;
            try
            {
                ut = std::stoll(first);
            }
            catch (const std::exception &)
            {
                throw fail();
            }
            if (!(ls >> value) || ut != (long long)phis.size())
                throw fail();
            phis.push_back(value);
        }
        if (q < 1 || nc < 1)
            throw config_error("schedule file lacks Q or Nc header");
        try
        {
            return PilotSchedule(q, nc, std::move(phis));
        }
        catch (const std::exception &e)
        {
            throw config_error(std::string("invalid schedule: ") + e.what());
        }
    }

    PilotSchedule read_schedule(const std::string &path)
    {
        std::ifstream f(path);
        if (!f)
            throw config_error("cannot open schedule file '" + path + "'");
        return read_schedule(f);
    }
}
