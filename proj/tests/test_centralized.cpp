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

#include "cfisac/centralized.hpp"

using namespace cfisac;

TEST_CASE("centralized fronthaul")
{
    const auto cfg = default_config();
    const auto r = run_centralized(cfg, 3, 0);
    CHECK(r.record.fronthaul_total() == 512);
    CHECK(r.record.method == Method::Centralized);
    CHECK(r.record.iterations.size() <= 3);
}

TEST_CASE("centralized subproblem layout")
{
    const auto cfg = default_config();
    const auto ch = generate_channels(cfg, 3);
    const auto geo = make_sensing_geometry(cfg);
    const auto ns = project(ch, geo);
    const auto sensing = SensingConstants::from(geo, cfg.K);
    const auto init = init_state(cfg, ns, 3);
    const auto spec = centralized_subproblem(ns, sensing, cfg.Pm, init.state.w_hat);

    REQUIRE(spec.c.size() == size_t(cfg.M * cfg.K));
    REQUIRE(spec.groups.size() == size_t(cfg.M));
    REQUIRE(spec.lin);
    CHECK(spec.lin->bound == doctest::Approx(std::sqrt(20.0)));
    for (int k = 0; k < cfg.K; ++k)
    {
        cd received = 0.0;
        for (int m = 0; m < cfg.M; ++m)
            received += ns.h_hat[size_t(m)][size_t(k)].dot(init.state.w_hat[size_t(m)][size_t(k)]);
        for (int m = 0; m < cfg.M; ++m)
        {
            const auto b = size_t(m * cfg.K + k);
            CHECK((spec.c[b] - ns.h_hat[size_t(m)][size_t(k)] * received).norm() < 1e-12);
            CHECK((spec.lin->a[b] - std::conj(sensing.weight[size_t(m)]) * ns.a_hat[size_t(m)][size_t(k)]).norm() < 1e-12);
        }
    }
}

TEST_CASE("centralized MM ascends and stays feasible")
{
    const auto cfg = default_config();
    for (std::uint64_t t = 0; t < 3; ++t)
    {
        const auto r = run_centralized(cfg, 40, t);
        double prev = r.record.initial.objective;
        for (const auto &rec : r.record.iterations)
        {
            CHECK(rec.objective >= prev * (1.0 - 1e-8));
            CHECK(rec.max_mui_ratio <= 1e-12);
            CHECK(rec.sensing_slack >= -1e-9);
            CHECK(rec.power_slack >= -1e-8);
            prev = rec.objective;
        }
    }
}

TEST_CASE("trivial case matches the two-stage design")
{
    auto cfg = default_config();
    cfg.M = 1;
    cfg.K = 1;
    cfg.Pm = {1.0};
    cfg.sigma_k2 = {1.0};
    cfg.sigma_mn2 = RMat::Constant(1, cfg.N, 0.1);
    cfg.theta_deg = {0.0};
    cfg.delta_dB = -INFINITY;
    cfg.n_iter = 3;
    const auto ts = run_two_stage(cfg, 5);
    const auto ce = run_centralized(cfg, 3, 5);
    CHECK((ts.precoders[0] - ce.precoders[0]).norm() < 1e-9);
}

TEST_CASE("centralized infeasibility")
{
    auto cfg = default_config();
    cfg.delta_dB = 48.0;
    CHECK_THROWS_AS(run_centralized(cfg, 3, 0), GlobalInfeasible);
    CHECK_THROWS_AS(run_centralized(cfg, -1, 0), std::invalid_argument);
}
