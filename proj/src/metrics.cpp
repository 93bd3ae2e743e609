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

#include "cfisac/metrics.hpp"

namespace cfisac
{
    std::string_view to_string(Method m)
    {
        return m == Method::TwoStage ? "tsdba" : "centralized";
    }

    SinrReport sinr_per_ue(const ChannelSet &channels, const PrecoderSet &F, std::span<const double> sigma_k2)
    {
        const int M = channels.num_tx();
        const int K = channels.num_ue();

        // rx(k, i) = sum_m h_{m,k}^H f_{m,i}
        CMat rx = CMat::Zero(K, K);
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
                rx.row(k) += channels.h[size_t(m)][size_t(k)].adjoint() * F[size_t(m)];

        SinrReport r;
        r.sinr.resize(K);
        r.p_ds.resize(K);
        r.p_mui.resize(K);
        for (int k = 0; k < K; ++k)
        {
            r.p_ds[k] = std::norm(rx(k, k));
            double mui = 0.0;
            for (int i = 0; i < K; ++i)
                if (i != k)
                    mui += std::norm(rx(k, i));
            r.p_mui[k] = mui;
            r.sinr[k] = r.p_ds[k] / (r.p_mui[k] + sigma_k2[size_t(k)]);
        }
        return r;
    }

    double ssnr(const PrecoderSet &F, const SensingGeometry &geometry, const RMat &sigma_mn2, double sigma_n2)
    {
        double num = 0.0;
        for (size_t m = 0; m < F.size(); ++m)
        {
            const double beam = (geometry.a_tx[m].adjoint() * F[m]).squaredNorm();
            for (size_t n = 0; n < geometry.g.size(); ++n)
                num += sigma_mn2(Eigen::Index(m), Eigen::Index(n)) * std::norm(geometry.gamma[n]) * beam;
        }
        double den = 0.0;
        for (const auto &g : geometry.g)
            den += g.squaredNorm() * sigma_n2;
        return num / den;
    }

    std::vector<double> beampattern(const CMat &F_m, std::span<const double> grid_deg, double spacing_over_lambda)
    {
        std::vector<double> out;
        out.reserve(grid_deg.size());
        for (double ang : grid_deg)
        {
            const double gain = (steering(ang, int(F_m.rows()), spacing_over_lambda).adjoint() * F_m).squaredNorm();
            out.push_back(gain > 0.0 ? std::max(linear_to_db(gain), beampattern_floor_dB) : beampattern_floor_dB);
        }
        return out;
    }

    std::vector<double> default_beampattern_grid()
    {
        std::vector<double> grid;
        for (int i = 0; i <= 720; ++i)
            grid.push_back(-90.0 + 0.25 * i);
        return grid;
    }

    std::int64_t fronthaul_load(Method method, std::int64_t M, std::int64_t K, std::int64_t Ntx, std::int64_t n_iter)
    {
        if (M < 1 || K < 1 || Ntx < 1 || n_iter < 0)
            throw std::invalid_argument("fronthaul_load: dimensions must be positive");
        // TsDBA: z, g, w up and delta, alpha, beta down, every round. Centralized: CSI up, precoders down, once.
        return method == Method::TwoStage ? 6 * n_iter * M * K : 2 * Ntx * M * K;
    }
}
