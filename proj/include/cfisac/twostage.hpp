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

#include "cfisac/nullspace.hpp"
#include "cfisac/record.hpp"

namespace cfisac
{
    /// Local precoders (null-space coordinates) and central weights.
    struct PrecoderState
    {
        std::vector<std::vector<CVec>> w_hat; // [m][k]
        CMat delta;                           // M x K

        /// F_m = [delta_{m,1} P_{m,1} w_hat_{m,1}, ..., delta_{m,K} P_{m,K} w_hat_{m,K}]
        PrecoderSet precoders(const NullspaceData &ns) const;

        /// sum_k |delta_{m,k}|^2 ||w_hat_{m,k}||^2
        double ap_power(int m) const;
    };

    /// AP -> CU message
    struct APReport
    {
        int m = 0;
        CVec z;    // h_hat^H w_hat, per k
        CVec g;    // a_hat^H w_hat, per k
        RVec wpow; // ||w_hat||^2, per k

        std::int64_t scalar_count() const { return z.size() + g.size() + wpow.size(); }
    };

    /// CU -> AP broadcast. Row m holds the values for AP m.
    struct CUReport
    {
        CMat delta;
        CMat alpha; // delta .* z
        CMat beta;  // delta .* g

        std::int64_t scalar_count() const { return delta.size() + alpha.size() + beta.size(); }
    };

    /// Coefficients of the linearised sensing constraint shared by all entities.
    struct SensingConstants
    {
        std::vector<cd> weight; // (1/sqrt(MNK)) sum_n sigma_{m,n} gamma_n, per m
        double threshold = 0.0; // sqrt(delta_tilde); 0 drops the linear constraint

        static SensingConstants from(const SensingGeometry &geometry, int K);
    };

    // Gradient of |delta h_hat^H w + others|^2 with respect to conj(w), evaluated at w
    CVec local_gradient(const CVec &h_hat, const CVec &w, cd delta, cd others);

    // Gradient of sum_k |sum_m delta_{m,k} z_{m,k}|^2 with respect to conj(delta), M x K
    CMat central_gradient(const CMat &delta, const CMat &z);

    /// Stopping rule of the MM loop run inside one local or central solve.
    struct MMControl
    {
        int max_steps = 50;
        double tol = 1e-9;
    };

    struct LocalUpdate
    {
        APReport report;
        SolverStatus status = SolverStatus::Optimal;
        double surrogate_objective = 0.0;
        int mm_steps = 0;
    };

    struct CentralUpdate
    {
        CUReport report;
        SolverStatus status = SolverStatus::Optimal;
        double surrogate_objective = 0.0;
        int mm_steps = 0;
    };

    /// Transmit AP: owns its projected channels and local precoders, sees only CU broadcasts.
    class AccessPoint
    {
    public:
        AccessPoint(int m, std::vector<CVec> h_hat, std::vector<CVec> a_hat, double power, SensingConstants sensing,
                    MMControl mm = {});

        void initialize(std::vector<CVec> w_hat) { w_hat_ = std::move(w_hat); }

        /// Surrogate problem for the current central broadcast. Exposed for inspection and tests.
        SubproblemSpec subproblem(const CUReport &cu) const;

        /// Local objective sum_k |delta_{m,k} h_hat^H w_hat + sum_{i != m} alpha_{i,k}|^2 at the current precoders.
        double local_objective(const CUReport &cu) const;

        /// Solves the local problem by MM steps until the local objective settles. On an infeasible surrogate
        /// the precoders move to the point that maximises the local sensing contribution and the update is flagged.
        LocalUpdate update(const CUReport &cu);

        APReport report() const;
        int index() const { return m_; }
        const std::vector<CVec> &w_hat() const { return w_hat_; }

    private:
        int m_;
        std::vector<CVec> h_hat_;
        std::vector<CVec> a_hat_;
        double power_;
        SensingConstants sensing_;
        MMControl mm_;
        std::vector<CVec> w_hat_;
    };

    /// Central unit: owns the delta weights, sees only AP reports.
    class CentralUnit
    {
    public:
        CentralUnit(int K, std::vector<double> power, SensingConstants sensing, MMControl mm = {});

        /// delta = 1, z = 0, g = (1/M) sqrt(delta_tilde / K)
        CUReport initial_report() const;

        SubproblemSpec subproblem(std::span<const APReport> reports) const;

        /// Solves the central problem by MM steps; on an infeasible surrogate delta moves to the
        /// sensing-maximising point and the update is flagged.
        CentralUpdate update(std::span<const APReport> reports);

        const CMat &delta() const { return delta_; }

    private:
        int M_;
        int K_;
        std::vector<double> power_;
        SensingConstants sensing_;
        MMControl mm_;
        CMat delta_;
        CMat g_init_;
    };

    /// One channel realisation driven through the AP/CU exchange.
    class TwoStageDesign
    {
    public:
        TwoStageDesign(const SystemConfig &cfg, ChannelSet channels, std::uint64_t trial = 0);

        /// One exchange round: every AP updates against the last broadcast, then the CU updates.
        void step();

        PrecoderState state() const;
        PrecoderSet precoders() const { return state().precoders(ns_); }

        const RunRecord &record() const { return record_; }
        const ChannelSet &channels() const { return channels_; }
        const SensingGeometry &geometry() const { return geometry_; }
        const NullspaceData &nullspace() const { return ns_; }
        const CUReport &last_broadcast() const { return broadcast_; }
        const std::vector<AccessPoint> &access_points() const { return aps_; }

    private:
        IterationRecord snapshot(int iteration) const;

        SystemConfig cfg_;
        ChannelSet channels_;
        SensingGeometry geometry_;
        NullspaceData ns_;
        std::vector<AccessPoint> aps_;
        CentralUnit cu_;
        CUReport broadcast_;
        RunRecord record_;
    };

    struct TwoStageResult
    {
        PrecoderState state;
        PrecoderSet precoders;
        RunRecord record;
    };

    /// Initial local precoders and CU caches for a trial.
    struct InitialState
    {
        PrecoderState state;
        CUReport broadcast;
    };

    /// CN(0,1) local precoders of AP m, jointly scaled so that sum_k ||w_hat_{m,k}||^2 = P_m.
    std::vector<CVec> random_local_precoders(const SystemConfig &cfg, const NullspaceData &ns, int m,
                                             std::uint64_t trial, StreamTag tag = StreamTag::precoder_init);

    InitialState init_state(const SystemConfig &cfg, const NullspaceData &ns, std::uint64_t trial);

    /// Runs cfg.n_iter rounds on the channels of `trial`. Throws GlobalInfeasible if every CU solve was infeasible.
    TwoStageResult run_two_stage(const SystemConfig &cfg, std::uint64_t trial = 0);
    TwoStageResult run_two_stage(const SystemConfig &cfg, const ChannelSet &channels, std::uint64_t trial = 0);
}
