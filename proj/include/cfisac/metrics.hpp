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

#include "cfisac/model.hpp"

namespace cfisac
{
    /// Precoding matrices F_m (Ntx x K), one per transmit AP.
    using PrecoderSet = std::vector<CMat>;

    struct SinrReport
    {
        RVec sinr;
        RVec p_ds;
        RVec p_mui;

        double sum_sinr() const { return sinr.sum(); }
    };

    enum class Method
    {
        TwoStage,
        Centralized,
    };

    std::string_view to_string(Method m);

    /// Gain reported for directions with no radiated power.
    inline constexpr double beampattern_floor_dB = -120.0;

    SinrReport sinr_per_ue(const ChannelSet &channels, const PrecoderSet &F, std::span<const double> sigma_k2);

    /// Sensing SNR at the CU after coherent combining over all receive APs.
    double ssnr(const PrecoderSet &F, const SensingGeometry &geometry, const RMat &sigma_mn2, double sigma_n2);

    /// 10 log10 ||a(theta)^H F_m||^2 over a grid of angles [deg], floored at beampattern_floor_dB.
    std::vector<double> beampattern(const CMat &F_m, std::span<const double> grid_deg, double spacing_over_lambda = 0.5);

    /// -90 .. 90 deg in 0.25 deg steps
    std::vector<double> default_beampattern_grid();

    /// Complex scalars exchanged over the fronthaul for one beamforming design.
    std::int64_t fronthaul_load(Method method, std::int64_t M, std::int64_t K, std::int64_t Ntx, std::int64_t n_iter);
}
