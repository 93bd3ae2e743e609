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

#include <string>

#include "cfisac/metrics.hpp"
#include "cfisac/solver.hpp"

namespace cfisac
{
    /// Raised when no iteration produced a feasible central (or joint) subproblem.
    class GlobalInfeasible : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Metrics of one iterate. Iteration 0 is the initial point.
    struct IterationRecord
    {
        int iteration = 0;
        double sum_sinr = 0.0;
        double ssnr = 0.0;
        double objective = 0.0;         // sum_k P_DS,k with the full channels
        double surrogate_objective = 0.0; // CU (or joint) surrogate value; local values summed separately
        double local_surrogate = 0.0;
        double power_slack = 0.0;       // min_m (P_m - ||F_m||^2) / P_m
        double sensing_slack = 0.0;     // sSNR / Delta - 1
        double max_mui_ratio = 0.0;     // max_k P_MUI,k / max(P_DS,k, eps)
        std::vector<SolverStatus> local_status;
        SolverStatus central_status = SolverStatus::Optimal;
        bool safeguard = false;         // some subproblem was infeasible and a restoration step was taken
    };

    struct RunRecord
    {
        Method method = Method::TwoStage;
        IterationRecord initial;
        std::vector<IterationRecord> iterations;
        std::int64_t fronthaul_uplink = 0;
        std::int64_t fronthaul_downlink = 0;

        std::int64_t fronthaul_total() const { return fronthaul_uplink + fronthaul_downlink; }
        int safeguard_events() const;
        bool any_central_feasible() const;
        /// The last central solve succeeded, so the final iterate meets the sensing constraint.
        bool final_feasible() const;
    };

    /// Metrics of a precoder set, with statuses left at their defaults.
    IterationRecord evaluate_precoders(const SystemConfig &cfg, const ChannelSet &channels,
                                       const SensingGeometry &geometry, const PrecoderSet &F, int iteration);
}
