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

#include "cfisac/twostage.hpp"

namespace cfisac
{
    /// Joint null-space precoders f_hat[m][k] (central weights absorbed).
    struct CentralizedState
    {
        std::vector<std::vector<CVec>> f_hat;

        PrecoderSet precoders(const NullspaceData &ns) const;
    };

    struct CentralizedResult
    {
        CentralizedState state;
        PrecoderSet precoders;
        RunRecord record;
    };

    /// Linearisation of sum_k |sum_m h_hat_{m,k}^H f_hat_{m,k}|^2 at f_prev, per-AP power groups and the
    /// full linearised sensing constraint. Blocks are laid out m-major.
    SubproblemSpec centralized_subproblem(const NullspaceData &ns, const SensingConstants &sensing,
                                          std::span<const double> Pm, const std::vector<std::vector<CVec>> &f_prev);

    /// Cap on MM steps used by the experiments; the loop normally stops earlier on cfg.mm_tol.
    inline constexpr int default_centralized_mm_steps = 1000;

    /// MM on the null-space problem with every variable at the CU, for at most n_mm_iter steps or until the
    /// objective changes by less than cfg.mm_tol (relative). Starts from the same random precoders as the
    /// two-stage design. Throws GlobalInfeasible when the (fixed) linearised sensing set is empty.
    CentralizedResult run_centralized(const SystemConfig &cfg, int n_mm_iter, std::uint64_t trial = 0);
    CentralizedResult run_centralized(const SystemConfig &cfg, const ChannelSet &channels, int n_mm_iter,
                                      std::uint64_t trial = 0);
}
