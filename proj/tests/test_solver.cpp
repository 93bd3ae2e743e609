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

#include "doctest.h"

#include "cfisac/solver.hpp"
#include "oracles.hpp"

using namespace cfisac;

namespace
{
    SubproblemSpec single_block(CVec c, double q, double P)
    {
        SubproblemSpec s;
        s.c.push_back(std::move(c));
        s.groups.push_back(QuadGroup{{0}, {q}, P});
        return s;
    }

    CVec vec(std::initializer_list<cd> v)
    {
        CVec out(Eigen::Index(v.size()));
        Eigen::Index i = 0;
        for (auto e : v)
            out[i++] = e;
        return out;
    }
}

TEST_CASE("matched filter without a linear constraint")
{
    const auto r = solve(single_block(vec({1.0, 0.0}), 1.0, 4.0));
    CHECK(r.status == SolverStatus::Optimal);
    CHECK(std::abs(r.x[0][0] - cd(2.0)) < 1e-12);
    CHECK(std::abs(r.x[0][1]) < 1e-12);
    CHECK(r.objective == doctest::Approx(4.0));
    CHECK(r.kkt_residual < 1e-12);
}

TEST_CASE("zero objective is degenerate")
{
    auto s = single_block(vec({0.0}), 1.0, 1.0);
    s.lin = LinearConstraint{{vec({1.0})}, 0.0, 0.0};
    const auto r = solve(s);
    CHECK(r.status == SolverStatus::Degenerate);
    CHECK(r.x[0].norm() == 0.0);

    // a binding linear constraint picks the shortest feasible point along a
    s.lin->bound = 0.5;
    const auto r2 = solve(s);
    CHECK(r2.status == SolverStatus::Degenerate);
    CHECK(std::abs(r2.x[0][0] - cd(0.5)) < 1e-12);
}

TEST_CASE("analytic infeasibility")
{
    auto s = single_block(vec({1.0}), 1.0, 1.0);
    s.lin = LinearConstraint{{vec({1.0})}, 0.0, 10.0};
    CHECK(max_linear_value(s) == doctest::Approx(1.0));
    const auto r = solve(s);
    CHECK(r.status == SolverStatus::Infeasible);
    // the returned point maximises the constraint value
    CHECK(linear_value(s, r.x) == doctest::Approx(1.0));
}

TEST_CASE("binding sensing constraint in two dimensions")
{
    // maximise 2 Re(x1) subject to |x|^2 <= 1, Re(x2) >= 0.6: x = (0.8, 0.6)
    auto s = single_block(vec({1.0, 0.0}), 1.0, 1.0);
    s.lin = LinearConstraint{{vec({0.0, 1.0})}, 0.0, 0.6};
    const auto r = solve(s);
    CHECK(r.status == SolverStatus::Optimal);
    CHECK(std::abs(r.x[0][0] - cd(0.8)) < 1e-9);
    CHECK(std::abs(r.x[0][1] - cd(0.6)) < 1e-9);
    CHECK(r.objective == doctest::Approx(1.6));
    CHECK(r.linear_active);
    CHECK(r.kkt_residual < 1e-6);
}

TEST_CASE("agreement with the projected-gradient reference")
{
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 60; ++i)
    {
        const auto spec = oracle::random_instance(rng, i % 5 != 0);
        const auto r = solve(spec);
        const auto ref = oracle::projected_gradient(spec);
        REQUIRE(r.status == SolverStatus::Optimal);
        CHECK(feasibility_violation(spec, r.x) <= 1e-8);
        CHECK(r.objective >= ref.objective - 1e-3 * std::abs(ref.objective));
        CHECK(std::abs(r.objective - ref.objective) <= 1e-3 * std::max(1.0, std::abs(ref.objective)));
        CHECK(r.kkt_residual <= 1e-6);
    }
}

TEST_CASE("solution lies on a power boundary")
{
    std::mt19937_64 rng(17);
    for (int i = 0; i < 20; ++i)
    {
        const auto spec = oracle::random_instance(rng);
        const auto r = solve(spec);
        double best = -1.0;
        for (const auto &g : spec.groups)
            best = std::max(best, group_power(g, r.x) / g.bound);
        CHECK(best == doctest::Approx(1.0).epsilon(1e-9));
        CHECK_FALSE(r.active_groups.empty());
    }
}

TEST_CASE("argmax is invariant to positive scaling of c")
{
    std::mt19937_64 rng(23);
    for (int i = 0; i < 10; ++i)
    {
        auto spec = oracle::random_instance(rng);
        const auto r1 = solve(spec);
        for (auto &c : spec.c)
            c *= 7.5;
        const auto r2 = solve(spec);
        for (size_t b = 0; b < r1.x.size(); ++b)
            CHECK((r1.x[b] - r2.x[b]).norm() < 1e-8 * std::max(1.0, r1.x[b].norm()));
    }
}

TEST_CASE("KKT residual probes")
{
    std::mt19937_64 rng(31);
    auto spec = oracle::random_instance(rng);
    const auto r = solve(spec);
    CHECK(kkt_residual(spec, r.x, r.multipliers) < 1e-6);

    auto perturbed = r.x;
    for (auto &x : perturbed)
        x += 1e-3 * oracle::random_cvec(rng, x.size());
    CHECK(kkt_residual(spec, perturbed, r.multipliers) > 1e-6);

    // zero multipliers at an interior point leave the bare objective gradient
    auto s = single_block(vec({3.0, 4.0}), 1.0, 1.0);
    const std::vector<CVec> interior{CVec::Zero(2)};
    Multipliers none;
    none.mu = {0.0};
    CHECK(kkt_residual(s, interior, none) == doctest::Approx(5.0));
}

TEST_CASE("malformed specs are rejected")
{
    SubproblemSpec s;
    s.c.push_back(vec({1.0}));
    s.c.push_back(vec({1.0}));
    s.groups.push_back(QuadGroup{{0}, {1.0}, 1.0});
    CHECK_THROWS_AS(s.validate(), std::invalid_argument); // block 1 in no group

    s.groups.push_back(QuadGroup{{1, 0}, {1.0, 1.0}, 1.0});
    CHECK_THROWS_AS(s.validate(), std::invalid_argument); // block 0 in two groups

    auto neg = single_block(vec({1.0}), -1.0, 1.0);
    CHECK_THROWS_AS(solve(neg), std::invalid_argument);

    auto zero_power = single_block(vec({1.0}), 1.0, 0.0);
    CHECK_THROWS_AS(solve(zero_power), std::invalid_argument);
}

TEST_CASE("zero-weight blocks")
{
    // a block without power cost must have nothing to gain
    SubproblemSpec s;
    s.c.push_back(vec({1.0}));
    s.c.push_back(vec({0.0}));
    s.groups.push_back(QuadGroup{{0, 1}, {1.0, 0.0}, 1.0});
    const auto r = solve(s);
    CHECK(r.status == SolverStatus::Optimal);
    CHECK(r.x[1].norm() == 0.0);

    s.c[1] = vec({1.0});
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}
