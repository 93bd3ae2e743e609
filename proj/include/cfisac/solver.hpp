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

#pragma once

#include <optional>
#include <string_view>

#include "cfisac/model.hpp"

namespace cfisac
{
    /// One power constraint: sum_{b in blocks} weights_b ||x_b||^2 <= bound.
    struct QuadGroup
    {
        std::vector<int> blocks;
        std::vector<double> weights;
        double bound = 0.0;
    };

    /// Re(sum_b a_b^H x_b) + constant >= bound
    struct LinearConstraint
    {
        std::vector<CVec> a;
        double constant = 0.0;
        double bound = 0.0;
    };

    /**
     * Linear-objective subproblem over complex blocks x_b:
     *
     *     maximize   2 Re(sum_b c_b^H x_b)
     *     subject to sum_{b in g} q_b ||x_b||^2 <= P_g   for every group g
     *                Re(sum_b a_b^H x_b) + const >= t    (optional)
     *
     * Every block belongs to exactly one group.
     */
    struct SubproblemSpec
    {
        std::vector<CVec> c;
        std::vector<QuadGroup> groups;
        std::optional<LinearConstraint> lin;

        size_t num_blocks() const { return c.size(); }

        /// Throws std::invalid_argument if the block/group structure is malformed.
        void validate() const;
    };

    enum class SolverStatus
    {
        Optimal,
        Infeasible,
        Degenerate,
    };

    std::string_view to_string(SolverStatus s);

    /**
     * Fritz-John multipliers of the subproblem. The Lagrangian gradient w.r.t. conj(x_b) is
     *
     *     objective_weight * c_b + nu * a_b - mu_{g(b)} q_b x_b
     *
     * The solver returns them normalised so that objective_weight + nu == 1 whenever the linear constraint is
     * active; the classical multipliers are nu / objective_weight and mu / objective_weight.
     */
    struct Multipliers
    {
        double objective_weight = 1.0;
        double nu = 0.0;
        std::vector<double> mu;
    };

    struct SolverReport
    {
        std::vector<CVec> x;
        double objective = 0.0;
        SolverStatus status = SolverStatus::Optimal;
        double kkt_residual = 0.0;
        Multipliers multipliers;
        std::vector<int> active_groups;
        bool linear_active = false;
    };

    /// 2 Re(sum_b c_b^H x_b)
    double objective_value(const SubproblemSpec &spec, std::span<const CVec> x);

    /// Re(sum_b a_b^H x_b) + const, or +inf without a linear constraint
    double linear_value(const SubproblemSpec &spec, std::span<const CVec> x);

    /// sum_{b in g} q_b ||x_b||^2
    double group_power(const QuadGroup &group, std::span<const CVec> x);

    /// Largest achievable linear-constraint value over the power set: const + sum_g sqrt(P_g sum_b ||a_b||^2 / q_b).
    double max_linear_value(const SubproblemSpec &spec);

    /// Max-block norm of the Lagrangian gradient plus complementary-slackness violations.
    double kkt_residual(const SubproblemSpec &spec, std::span<const CVec> x, const Multipliers &mult);

    /// Largest constraint violation, relative to max(1, |bound|) of each constraint.
    double feasibility_violation(const SubproblemSpec &spec, std::span<const CVec> x);

    /**
     * Global maximiser by dual bisection.
     *
     * With the linear multiplier fixed, every group has the closed form x_b = sqrt(P_g / S_g) d_b / q_b with
     * d_b = c_b + nu a_b and S_g = sum_b ||d_b||^2 / q_b. The linear-constraint value of that point is
     * nondecreasing in nu, so the smallest feasible nu is found by bisection. The search runs on
     * theta = nu / (1 + nu) in [0, 1], which keeps the bracket bounded.
     *
     * Infeasible: x is the point that maximises the linear-constraint value.
     * Degenerate: all c_b = 0; x is the minimum-norm feasible point along the sensing direction (zero if feasible).
     */
    SolverReport solve(const SubproblemSpec &spec);
}
