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

#include "cfisac/nullspace.hpp"
#include "oracles.hpp"

using namespace cfisac;

namespace
{
    ChannelSet random_channels(std::mt19937_64 &rng, int M, int K, int Ntx)
    {
        ChannelSet ch;
        ch.h.resize(size_t(M));
        for (auto &row : ch.h)
            for (int k = 0; k < K; ++k)
                row.push_back(oracle::random_cvec(rng, Ntx));
        return ch;
    }

    double identity_error(const CMat &P)
    {
        return (P.adjoint() * P - CMat::Identity(P.cols(), P.cols())).norm();
    }
}

TEST_CASE("interference matrix rows")
{
    std::mt19937_64 rng(3);
    const auto ch = random_channels(rng, 2, 3, 5);
    CHECK(interference_matrix(random_channels(rng, 1, 1, 5), 0, 0).rows() == 0);

    const CMat H = interference_matrix(ch, 1, 1);
    REQUIRE(H.rows() == 2);
    REQUIRE(H.cols() == 5);
    CHECK((H.row(0).transpose() - ch.h[1][0].conjugate()).norm() == 0.0);
    CHECK((H.row(1).transpose() - ch.h[1][2].conjugate()).norm() == 0.0);

    const auto two = random_channels(rng, 1, 2, 4);
    const CMat H2 = interference_matrix(two, 0, 0);
    REQUIRE(H2.rows() == 1);
    CHECK((H2.row(0).transpose() - two.h[0][1].conjugate()).norm() == 0.0);
}

TEST_CASE("null-space basis")
{
    CMat e1 = CMat::Zero(1, 4);
    e1(0, 0) = 1.0;
    const CMat P = nullspace_basis(e1);
    CHECK(P.cols() == 3);
    CHECK((e1 * P).norm() < 1e-14);
    CHECK(identity_error(P) < 1e-12);

    const CMat I = nullspace_basis(CMat(0, 6));
    CHECK((I - CMat::Identity(6, 6)).norm() == 0.0);

    std::mt19937_64 rng(5);
    const CMat row = oracle::random_cvec(rng, 32).adjoint();
    const CMat P32 = nullspace_basis(row);
    CHECK(P32.cols() == 31);
    CHECK((row * P32).norm() < 1e-10);
    CHECK(identity_error(P32) < 1e-10);

    // rank-deficient interference: two copies of the same row leave a 3-dim null space in C^4
    CMat dup(2, 4);
    dup.row(0) = oracle::random_cvec(rng, 4).adjoint();
    dup.row(1) = dup.row(0);
    CHECK(nullspace_basis(dup).cols() == 3);

    CMat full(4, 4);
    for (int i = 0; i < 4; ++i)
        full.row(i) = oracle::random_cvec(rng, 4).adjoint();
    CHECK_THROWS_AS(nullspace_basis(full), NullspaceEmpty);
}

TEST_CASE("projection onto interference null spaces")
{
    std::mt19937_64 rng(11);
    auto cfg = default_config();
    cfg.Ntx = 8;
    const auto geo = make_sensing_geometry(cfg);
    const auto ch = random_channels(rng, cfg.M, cfg.K, cfg.Ntx);
    const auto ns = project(ch, geo);

    for (int m = 0; m < cfg.M; ++m)
        for (int k = 0; k < cfg.K; ++k)
        {
            const auto &P = ns.P[size_t(m)][size_t(k)];
            CHECK(P.cols() == cfg.Ntx - (cfg.K - 1));
            CHECK(identity_error(P) < 1e-10);
            CHECK((ns.h_hat[size_t(m)][size_t(k)] - P.adjoint() * ch.h[size_t(m)][size_t(k)]).norm() < 1e-12);
            CHECK((ns.a_hat[size_t(m)][size_t(k)] - P.adjoint() * geo.a_tx[size_t(m)]).norm() < 1e-12);
            CHECK(ns.h_hat[size_t(m)][size_t(k)].norm() <= ch.h[size_t(m)][size_t(k)].norm() + 1e-12);
            for (int i = 0; i < cfg.K; ++i)
                if (i != k)
                {
                    const CVec w = ns.lift(m, k, oracle::random_cvec(rng, ns.dim(m, k)));
                    CHECK(std::abs(ch.h[size_t(m)][size_t(i)].dot(w)) < 1e-10 * ch.h[size_t(m)][size_t(i)].norm() * w.norm());
                }
            // projecting again with the same basis changes nothing
            const CVec again = P.adjoint() * (P * ns.h_hat[size_t(m)][size_t(k)]);
            CHECK((again - ns.h_hat[size_t(m)][size_t(k)]).norm() < 1e-12);
        }
}

TEST_CASE("single UE keeps the full space")
{
    std::mt19937_64 rng(2);
    auto cfg = default_config();
    cfg.K = 1;
    cfg.sigma_k2 = {1.0};
    const auto geo = make_sensing_geometry(cfg);
    const auto ch = random_channels(rng, cfg.M, 1, cfg.Ntx);
    const auto ns = project(ch, geo);
    CHECK((ns.h_hat[0][0] - ch.h[0][0]).norm() == 0.0);
}

TEST_CASE("too many UEs for the array")
{
    std::mt19937_64 rng(8);
    auto cfg = default_config();
    cfg.K = 3;
    cfg.Ntx = 2;
    cfg.sigma_k2.assign(3, 1.0);
    const auto geo = make_sensing_geometry(cfg);
    const auto ch = random_channels(rng, cfg.M, 3, 2);
    CHECK_THROWS_AS(project(ch, geo), NullspaceEmpty);
}
