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

#include "cfisac/centralized.hpp"

#include <algorithm>
#include <cmath>

namespace cfisac
{
    PrecoderSet CentralizedState::precoders(const NullspaceData &ns) const
    {
        PrecoderSet F;
        for (size_t m = 0; m < f_hat.size(); ++m)
        {
            CMat Fm(ns.P[m].front().rows(), Eigen::Index(f_hat[m].size()));
            for (size_t k = 0; k < f_hat[m].size(); ++k)
                Fm.col(Eigen::Index(k)) = ns.lift(int(m), int(k), f_hat[m][k]);
            F.push_back(std::move(Fm));
        }
        return F;
    }

    SubproblemSpec centralized_subproblem(const NullspaceData &ns, const SensingConstants &sensing,
                                          std::span<const double> Pm, const std::vector<std::vector<CVec>> &f_prev)
    {
        const size_t M = f_prev.size();
        const size_t K = M > 0 ? f_prev.front().size() : 0;

        std::vector<cd> received(K, 0.0);
        for (size_t m = 0; m < M; ++m)
            for (size_t k = 0; k < K; ++k)
                received[k] += ns.h_hat[m][k].dot(f_prev[m][k]);

        SubproblemSpec spec;
        LinearConstraint lin;
        lin.bound = sensing.threshold;
        for (size_t m = 0; m < M; ++m)
        {
            QuadGroup power;
            power.bound = Pm[m];
            for (size_t k = 0; k < K; ++k)
            {
                power.blocks.push_back(int(spec.c.size()));
                power.weights.push_back(1.0);
                spec.c.push_back(ns.h_hat[m][k] * received[k]);
                lin.a.push_back(std::conj(sensing.weight[m]) * ns.a_hat[m][k]);
            }
            spec.groups.push_back(std::move(power));
        }
        if (sensing.threshold > 0.0)
            spec.lin = std::move(lin);
        return spec;
    }

    CentralizedResult run_centralized(const SystemConfig &cfg, const ChannelSet &channels, int n_mm_iter,
                                      std::uint64_t trial)
    {
        cfg.validate();
        if (n_mm_iter < 0)
            throw std::invalid_argument("run_centralized: n_mm_iter must be >= 0");

        const auto geometry = make_sensing_geometry(cfg);
        const auto ns = project(channels, geometry);
        const auto sensing = SensingConstants::from(geometry, cfg.K);

        CentralizedResult out;
        for (int m = 0; m < cfg.M; ++m)
            out.state.f_hat.push_back(random_local_precoders(cfg, ns, m, trial));

        out.record.method = Method::Centralized;
        out.record.initial = evaluate_precoders(cfg, channels, geometry, out.state.precoders(ns), 0);

        for (int it = 1; it <= n_mm_iter; ++it)
        {
            const auto spec = centralized_subproblem(ns, sensing, cfg.Pm, out.state.f_hat);
            auto sol = solve(spec);
            if (sol.status == SolverStatus::Infeasible)
                throw GlobalInfeasible("centralized sensing constraint infeasible (delta_dB = " +
                                       std::to_string(cfg.delta_dB) + ")");

            size_t b = 0;
            for (auto &fm : out.state.f_hat)
                for (auto &fmk : fm)
                    fmk = std::move(sol.x[b++]);

            auto rec = evaluate_precoders(cfg, channels, geometry, out.state.precoders(ns), it);
            rec.central_status = sol.status;
            rec.surrogate_objective = sol.objective;
            const double before = it == 1 ? out.record.initial.objective : out.record.iterations.back().objective;
            const bool done = sol.status != SolverStatus::Optimal ||
                              std::abs(rec.objective - before) <= cfg.mm_tol * std::max(std::abs(before), 1e-300);
            out.record.iterations.push_back(std::move(rec));
            if (done)
                break;
        }

        // CSI up and precoders down, once
        out.record.fronthaul_uplink = std::int64_t(cfg.Ntx) * cfg.M * cfg.K;
        out.record.fronthaul_downlink = std::int64_t(cfg.Ntx) * cfg.M * cfg.K;
        out.precoders = out.state.precoders(ns);
        return out;
    }

    CentralizedResult run_centralized(const SystemConfig &cfg, int n_mm_iter, std::uint64_t trial)
    {
        cfg.validate();
        return run_centralized(cfg, generate_channels(cfg, trial), n_mm_iter, trial);
    }
}
