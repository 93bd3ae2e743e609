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

#include "cfisac/record.hpp"

#include <algorithm>

namespace cfisac
{
    int RunRecord::safeguard_events() const
    {
        return int(std::count_if(iterations.begin(), iterations.end(), [](const auto &r) { return r.safeguard; }));
    }

    bool RunRecord::any_central_feasible() const
    {
        return std::any_of(iterations.begin(), iterations.end(),
                           [](const auto &r) { return r.central_status != SolverStatus::Infeasible; });
    }

    bool RunRecord::final_feasible() const
    {
        return !iterations.empty() && iterations.back().central_status != SolverStatus::Infeasible;
    }

    IterationRecord evaluate_precoders(const SystemConfig &cfg, const ChannelSet &channels,
                                       const SensingGeometry &geometry, const PrecoderSet &F, int iteration)
    {
        constexpr double eps = 1e-300;

        IterationRecord r;
        r.iteration = iteration;

        const auto sinr = sinr_per_ue(channels, F, cfg.sigma_k2);
        r.sum_sinr = sinr.sum_sinr();
        r.objective = sinr.p_ds.sum();
        for (Eigen::Index k = 0; k < sinr.p_ds.size(); ++k)
            r.max_mui_ratio = std::max(r.max_mui_ratio, sinr.p_mui[k] / std::max(sinr.p_ds[k], eps));

        r.ssnr = ssnr(F, geometry, cfg.sigma_mn2, cfg.sigma_n2);
        const double threshold = db_to_linear(cfg.delta_dB);
        r.sensing_slack = threshold > 0.0 ? r.ssnr / threshold - 1.0 : INFINITY;

        r.power_slack = INFINITY;
        for (size_t m = 0; m < F.size(); ++m)
            r.power_slack = std::min(r.power_slack, (cfg.Pm[m] - F[m].squaredNorm()) / cfg.Pm[m]);
        return r;
    }
}
