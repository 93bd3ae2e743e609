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

#include "cfisac/metrics.hpp"
#include "oracles.hpp"

using namespace cfisac;

TEST_CASE("SINR of a matched filter")
{
    std::mt19937_64 rng(1);
    ChannelSet ch;
    ch.h = {{oracle::random_cvec(rng, 8)}};
    const double P = 2.5;
    const PrecoderSet F{CMat(std::sqrt(P) * ch.h[0][0].normalized())};
    const std::vector<double> noise{0.3};
    const auto r = sinr_per_ue(ch, F, noise);
    CHECK(r.sinr[0] == doctest::Approx(P * ch.h[0][0].squaredNorm() / 0.3));
    CHECK(r.p_mui[0] == 0.0);

    const PrecoderSet zero{CMat::Zero(8, 1)};
    CHECK(sinr_per_ue(ch, zero, noise).sinr[0] == 0.0);
}

TEST_CASE("SINR definition with interference")
{
    std::mt19937_64 rng(2);
    const int M = 2, K = 3, Ntx = 4;
    ChannelSet ch;
    ch.h.resize(M);
    PrecoderSet F(M, CMat(Ntx, K));
    for (int m = 0; m < M; ++m)
        for (int k = 0; k < K; ++k)
        {
            ch.h[size_t(m)].push_back(oracle::random_cvec(rng, Ntx));
            F[size_t(m)].col(k) = oracle::random_cvec(rng, Ntx);
        }
    const std::vector<double> noise{0.1, 0.2, 0.3};
    const auto r = sinr_per_ue(ch, F, noise);
    for (int k = 0; k < K; ++k)
    {
        double mui = 0.0;
        cd ds = 0.0;
        for (int m = 0; m < M; ++m)
            ds += ch.h[size_t(m)][size_t(k)].dot(F[size_t(m)].col(k));
        for (int i = 0; i < K; ++i)
            if (i != k)
            {
                cd s = 0.0;
                for (int m = 0; m < M; ++m)
                    s += ch.h[size_t(m)][size_t(k)].dot(F[size_t(m)].col(i));
                mui += std::norm(s);
            }
        CHECK(r.p_ds[k] == doctest::Approx(std::norm(ds)));
        CHECK(r.p_mui[k] == doctest::Approx(mui));
        CHECK(r.sinr[k] == doctest::Approx(std::norm(ds) / (mui + noise[size_t(k)])));
    }
    CHECK(r.sum_sinr() == doctest::Approx(r.sinr.sum()));

    // a common phase on every stream leaves SINR unchanged
    PrecoderSet G = F;
    for (auto &Fm : G)
        Fm.col(1) *= std::polar(1.0, 0.7);
    const auto r2 = sinr_per_ue(ch, G, noise);
    CHECK((r2.sinr - r.sinr).norm() < 1e-12 * r.sinr.norm());
}

TEST_CASE("sensing SNR")
{
    auto cfg = default_config();
    cfg.M = 1;
    cfg.N = 1;
    cfg.theta_deg = {20.0};
    cfg.phi_deg = {-5.0};
    cfg.Pm = {3.0};
    cfg.sigma_mn2 = RMat::Constant(1, 1, 0.1);
    const auto geo = make_sensing_geometry(cfg);
    const PrecoderSet F{CMat(steering(20.0, 32) / std::sqrt(32.0) * std::sqrt(3.0))};
    // ||gamma a^H F||^2 = Nrx Ntx P
    CHECK(ssnr(F, geo, cfg.sigma_mn2, cfg.sigma_n2) == doctest::Approx(0.1 * 32 * 32 * 3.0 / 0.01));

    const PrecoderSet Z{CMat::Zero(32, 2)};
    CHECK(ssnr(Z, geo, cfg.sigma_mn2, cfg.sigma_n2) == 0.0);

    const PrecoderSet F2{CMat(2.0 * F[0])};
    CHECK(ssnr(F2, geo, cfg.sigma_mn2, cfg.sigma_n2) ==
          doctest::Approx(4.0 * ssnr(F, geo, cfg.sigma_mn2, cfg.sigma_n2)));
}

TEST_CASE("beampattern")
{
    std::vector<double> grid;
    for (int i = -900; i <= 900; ++i)
        grid.push_back(0.1 * i);
    const CMat F = steering(23.4, 32);
    const auto g = beampattern(F, grid);
    const auto peak = std::max_element(g.begin(), g.end()) - g.begin();
    CHECK(grid[size_t(peak)] == doctest::Approx(23.4));
    CHECK(g[size_t(peak)] == doctest::Approx(10.0 * std::log10(32.0 * 32.0)));

    const auto floor = beampattern(CMat::Zero(32, 2), grid);
    CHECK(std::all_of(floor.begin(), floor.end(), [](double v) { return v == beampattern_floor_dB; }));

    const auto def = default_beampattern_grid();
    CHECK(def.size() == 721);
    CHECK(def.front() == -90.0);
    CHECK(def.back() == 90.0);
    CHECK(def[1] - def[0] == doctest::Approx(0.25));
}

TEST_CASE("fronthaul formulas")
{
    CHECK(fronthaul_load(Method::TwoStage, 4, 2, 32, 3) == 144);
    CHECK(fronthaul_load(Method::Centralized, 4, 2, 32, 3) == 512);
    CHECK(fronthaul_load(Method::TwoStage, 4, 2, 8, 3) == fronthaul_load(Method::TwoStage, 4, 2, 1024, 3));
    CHECK(fronthaul_load(Method::Centralized, 16, 8, 1024, 3) == 2 * fronthaul_load(Method::Centralized, 16, 8, 512, 3));
    CHECK_THROWS_AS(fronthaul_load(Method::TwoStage, 0, 2, 32, 3), std::invalid_argument);
    CHECK(to_string(Method::TwoStage) == "tsdba");
    CHECK(to_string(Method::Centralized) == "centralized");
}
