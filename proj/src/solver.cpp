// cfisac: distributed beamforming design for cell-free ISAC systems
// Copyright (C) 2026 The cfisac Authors
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

#include "cfisac/solver.hpp"

#include <cmath>
#include <limits>

namespace cfisac
{
    namespace
    {
        constexpr double active_tol = 1e-9;
        constexpr int max_bisection_steps = 200;

        bool is_zero(const CVec &v) { return v.size() == 0 || v.isZero(0.0); }

        struct DirectionalPoint
        {
            std::vector<CVec> x;
            std::vector<double> mu; // per group, for gradient (1-theta) c + theta a
        };

        // Per-group closed form for the combined direction (1-theta) c + theta a
        DirectionalPoint point_at(const SubproblemSpec &spec, double theta)
        {
            DirectionalPoint p;
            p.x.resize(spec.num_blocks());
            p.mu.assign(spec.groups.size(), 0.0);

            for (size_t gi = 0; gi < spec.groups.size(); ++gi)
            {
                const auto &grp = spec.groups[gi];
                std::vector<CVec> d(grp.blocks.size());
                double S = 0.0;
                for (size_t j = 0; j < grp.blocks.size(); ++j)
                {
                    const auto b = size_t(grp.blocks[j]);
                    d[j] = (1.0 - theta) * spec.c[b];
                    if (spec.lin)
                        d[j] += theta * spec.lin->a[b];
                    if (grp.weights[j] > 0.0)
                        S += d[j].squaredNorm() / grp.weights[j];
                }

                const double scale = S > 0.0 ? std::sqrt(grp.bound / S) : 0.0;
                p.mu[gi] = S > 0.0 ? std::sqrt(S / grp.bound) : 0.0;
                for (size_t j = 0; j < grp.blocks.size(); ++j)
                {
                    const auto b = size_t(grp.blocks[j]);
                    if (grp.weights[j] > 0.0)
                        p.x[b] = (scale / grp.weights[j]) * d[j];
                    else
                        p.x[b] = CVec::Zero(spec.c[b].size());
                }
            }
            return p;
        }

        SolverReport finish(const SubproblemSpec &spec, std::vector<CVec> x, Multipliers mult, SolverStatus status)
        {
            SolverReport r;
            r.x = std::move(x);
            r.status = status;
            r.objective = objective_value(spec, r.x);
            r.kkt_residual = kkt_residual(spec, r.x, mult);
            r.multipliers = std::move(mult);
            for (size_t gi = 0; gi < spec.groups.size(); ++gi)
            {
                const auto &grp = spec.groups[gi];
                if (std::abs(grp.bound - group_power(grp, r.x)) <= active_tol * grp.bound)
                    r.active_groups.push_back(int(gi));
            }
            if (spec.lin)
            {
                const double t = spec.lin->bound;
                r.linear_active = std::abs(linear_value(spec, r.x) - t) <= active_tol * std::max(1.0, std::abs(t));
            }
            return r;
        }
    }

    std::string_view to_string(SolverStatus s)
    {
        switch (s)
        {
        case SolverStatus::Optimal:
            return "optimal";
        case SolverStatus::Infeasible:
            return "infeasible";
        case SolverStatus::Degenerate:
            return "degenerate";
        }
        return "unknown";
    }

    void SubproblemSpec::validate() const
    {
        const size_t B = num_blocks();
        std::vector<int> owner(B, -1);
        for (size_t gi = 0; gi < groups.size(); ++gi)
        {
            const auto &grp = groups[gi];
            if (grp.blocks.size() != grp.weights.size())
                throw std::invalid_argument("SubproblemSpec: group blocks and weights differ in length");
            if (!(grp.bound > 0.0))
                throw std::invalid_argument("SubproblemSpec: group bound must be positive");
            for (size_t j = 0; j < grp.blocks.size(); ++j)
            {
                const int b = grp.blocks[j];
                if (b < 0 || size_t(b) >= B)
                    throw std::invalid_argument("SubproblemSpec: block index out of range");
                if (owner[size_t(b)] != -1)
                    throw std::invalid_argument("SubproblemSpec: block appears in more than one group");
                owner[size_t(b)] = int(gi);
                if (!(grp.weights[j] >= 0.0))
                    throw std::invalid_argument("SubproblemSpec: negative power weight");
            }
        }
        for (size_t b = 0; b < B; ++b)
            if (owner[b] == -1)
                throw std::invalid_argument("SubproblemSpec: block without a power constraint");

        if (lin)
        {
            if (lin->a.size() != B)
                throw std::invalid_argument("SubproblemSpec: linear constraint has wrong block count");
            for (size_t b = 0; b < B; ++b)
                if (lin->a[b].size() != c[b].size())
                    throw std::invalid_argument("SubproblemSpec: linear constraint block dimension mismatch");
        }

        // A zero weight leaves the block unconstrained; only harmless if it affects nothing.
        for (const auto &grp : groups)
            for (size_t j = 0; j < grp.blocks.size(); ++j)
                if (grp.weights[j] == 0.0)
                {
                    const auto b = size_t(grp.blocks[j]);
                    if (!is_zero(c[b]) || (lin && !is_zero(lin->a[b])))
                        throw std::invalid_argument("SubproblemSpec: unbounded block with zero power weight");
                }
    }

    double objective_value(const SubproblemSpec &spec, std::span<const CVec> x)
    {
        double v = 0.0;
        for (size_t b = 0; b < spec.num_blocks(); ++b)
            v += 2.0 * spec.c[b].dot(x[b]).real();
        return v;
    }

    double linear_value(const SubproblemSpec &spec, std::span<const CVec> x)
    {
        if (!spec.lin)
            return std::numeric_limits<double>::infinity();
        double v = spec.lin->constant;
        for (size_t b = 0; b < spec.num_blocks(); ++b)
            v += spec.lin->a[b].dot(x[b]).real();
        return v;
    }

    double group_power(const QuadGroup &group, std::span<const CVec> x)
    {
        double p = 0.0;
        for (size_t j = 0; j < group.blocks.size(); ++j)
            p += group.weights[j] * x[size_t(group.blocks[j])].squaredNorm();
        return p;
    }

    double max_linear_value(const SubproblemSpec &spec)
    {
        if (!spec.lin)
            return std::numeric_limits<double>::infinity();
        double v = spec.lin->constant;
        for (const auto &grp : spec.groups)
        {
            double S = 0.0;
            for (size_t j = 0; j < grp.blocks.size(); ++j)
                if (grp.weights[j] > 0.0)
                    S += spec.lin->a[size_t(grp.blocks[j])].squaredNorm() / grp.weights[j];
            v += std::sqrt(grp.bound * S);
        }
        return v;
    }

    double kkt_residual(const SubproblemSpec &spec, std::span<const CVec> x, const Multipliers &mult)
    {
        double grad = 0.0;
        double slack = 0.0;
        for (size_t gi = 0; gi < spec.groups.size(); ++gi)
        {
            const auto &grp = spec.groups[gi];
            const double mu = gi < mult.mu.size() ? mult.mu[gi] : 0.0;
            for (size_t j = 0; j < grp.blocks.size(); ++j)
            {
                const auto b = size_t(grp.blocks[j]);
                CVec g = mult.objective_weight * spec.c[b] - (mu * grp.weights[j]) * x[b];
                if (spec.lin)
                    g += mult.nu * spec.lin->a[b];
                grad = std::max(grad, g.norm());
            }
            slack += std::abs(mu) * std::abs(grp.bound - group_power(grp, x)) + std::max(0.0, -mu);
        }
        if (spec.lin)
            slack += std::abs(mult.nu) * std::abs(linear_value(spec, x) - spec.lin->bound) + std::max(0.0, -mult.nu);
        return grad + slack;
    }

    double feasibility_violation(const SubproblemSpec &spec, std::span<const CVec> x)
    {
        double v = 0.0;
        for (const auto &grp : spec.groups)
            v = std::max(v, (group_power(grp, x) - grp.bound) / grp.bound);
        if (spec.lin)
            v = std::max(v, (spec.lin->bound - linear_value(spec, x)) / std::max(1.0, std::abs(spec.lin->bound)));
        return std::max(v, 0.0);
    }

    SolverReport solve(const SubproblemSpec &spec)
    {
        spec.validate();

        bool c_zero = true;
        for (const auto &cb : spec.c)
            c_zero = c_zero && is_zero(cb);

        auto zeros = [&] {
            std::vector<CVec> x;
            for (const auto &cb : spec.c)
                x.push_back(CVec::Zero(cb.size()));
            return x;
        };
        auto idle = [&] { return Multipliers{1.0, 0.0, std::vector<double>(spec.groups.size(), 0.0)}; };

        if (!spec.lin)
        {
            if (c_zero)
                return finish(spec, zeros(), idle(), SolverStatus::Degenerate);
            auto p = point_at(spec, 0.0);
            return finish(spec, std::move(p.x), Multipliers{1.0, 0.0, std::move(p.mu)}, SolverStatus::Optimal);
        }

        const double t = spec.lin->bound;
        const double lmax = max_linear_value(spec);
        if (lmax < t)
        {
            auto p = point_at(spec, 1.0);
            return finish(spec, std::move(p.x), Multipliers{0.0, 1.0, std::move(p.mu)}, SolverStatus::Infeasible);
        }

        if (c_zero)
        {
            const double base = spec.lin->constant;
            if (base >= t)
                return finish(spec, zeros(), idle(), SolverStatus::Degenerate);
            // Shrink the sensing-maximising point until the constraint is just met.
            auto p = point_at(spec, 1.0);
            const double shrink = (t - base) / (lmax - base);
            for (auto &xb : p.x)
                xb *= shrink;
            return finish(spec, std::move(p.x), idle(), SolverStatus::Degenerate);
        }

        auto p0 = point_at(spec, 0.0);
        if (linear_value(spec, p0.x) >= t)
            return finish(spec, std::move(p0.x), Multipliers{1.0, 0.0, std::move(p0.mu)}, SolverStatus::Optimal);

        double lo = 0.0;
        double hi = 1.0;
        for (int it = 0; it < max_bisection_steps; ++it)
        {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
                break;
            if (linear_value(spec, point_at(spec, mid).x) >= t)
                hi = mid;
            else
                lo = mid;
        }

        auto p = point_at(spec, hi);
        return finish(spec, std::move(p.x), Multipliers{1.0 - hi, hi, std::move(p.mu)}, SolverStatus::Optimal);
    }
}
