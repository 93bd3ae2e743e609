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

#include "cfisac/twostage.hpp"

#include <algorithm>
#include <cmath>

namespace cfisac
{
    namespace
    {
        const SystemConfig &validated(const SystemConfig &cfg)
        {
            cfg.validate();
            return cfg;
        }

        bool settled(double before, double after, double tol)
        {
            return std::abs(after - before) <= tol * std::max(std::abs(before), 1e-300);
        }

        double combined_objective(const CMat &delta, const CMat &z)
        {
            return delta.cwiseProduct(z).colwise().sum().cwiseAbs2().sum();
        }
    }

    PrecoderSet PrecoderState::precoders(const NullspaceData &ns) const
    {
        PrecoderSet F;
        for (size_t m = 0; m < w_hat.size(); ++m)
        {
            const auto &P0 = ns.P[m].front();
            CMat Fm(P0.rows(), Eigen::Index(w_hat[m].size()));
            for (size_t k = 0; k < w_hat[m].size(); ++k)
                Fm.col(Eigen::Index(k)) = delta(Eigen::Index(m), Eigen::Index(k)) * ns.lift(int(m), int(k), w_hat[m][k]);
            F.push_back(std::move(Fm));
        }
        return F;
    }

    double PrecoderState::ap_power(int m) const
    {
        double p = 0.0;
        for (size_t k = 0; k < w_hat[size_t(m)].size(); ++k)
            p += std::norm(delta(m, Eigen::Index(k))) * w_hat[size_t(m)][k].squaredNorm();
        return p;
    }

    SensingConstants SensingConstants::from(const SensingGeometry &geometry, int K)
    {
        SensingConstants s;
        for (Eigen::Index m = 0; m < geometry.sigma_mn.rows(); ++m)
            s.weight.push_back(geometry.sensing_weight(int(m), K));
        s.threshold = std::sqrt(geometry.delta_tilde);
        return s;
    }

    CVec local_gradient(const CVec &h_hat, const CVec &w, cd delta, cd others)
    {
        return std::norm(delta) * h_hat * h_hat.dot(w) + others * std::conj(delta) * h_hat;
    }

    CMat central_gradient(const CMat &delta, const CMat &z)
    {
        CMat grad(delta.rows(), delta.cols());
        for (Eigen::Index k = 0; k < delta.cols(); ++k)
        {
            const cd total = (delta.col(k).array() * z.col(k).array()).sum();
            for (Eigen::Index m = 0; m < delta.rows(); ++m)
            {
                const cd others = total - delta(m, k) * z(m, k);
                grad(m, k) = delta(m, k) * std::norm(z(m, k)) + std::conj(z(m, k)) * others;
            }
        }
        return grad;
    }

    // ------------------------------------------------------------------------
    // Access point

    AccessPoint::AccessPoint(int m, std::vector<CVec> h_hat, std::vector<CVec> a_hat, double power,
                             SensingConstants sensing, MMControl mm)
        : m_(m), h_hat_(std::move(h_hat)), a_hat_(std::move(a_hat)), power_(power), sensing_(std::move(sensing)),
          mm_(mm)
    {
        for (const auto &h : h_hat_)
            w_hat_.push_back(CVec::Zero(h.size()));
    }

    SubproblemSpec AccessPoint::subproblem(const CUReport &cu) const
    {
        const auto K = Eigen::Index(h_hat_.size());
        const auto M = cu.delta.rows();

        SubproblemSpec spec;
        QuadGroup power;
        power.bound = power_;
        LinearConstraint lin;
        lin.bound = sensing_.threshold;

        // Cross-AP sensing term from the other APs' beta values. The APs solve in parallel, so each one may
        // release at most 1/M of the current slack of the joint constraint (or must cover 1/M of its deficit);
        // with a tight joint constraint this is exactly the sum over the other APs.
        double own = 0.0;
        double total = 0.0;
        for (Eigen::Index i = 0; i < M; ++i)
        {
            const double contrib = (sensing_.weight[size_t(i)] * cu.beta.row(i).sum()).real();
            total += contrib;
            if (i == m_)
                own = contrib;
        }
        const double slack = total - sensing_.threshold;
        lin.constant = (total - own) - std::max(slack, 0.0) * double(M - 1) / double(M);

        for (Eigen::Index k = 0; k < K; ++k)
        {
            const cd delta = cu.delta(m_, k);
            const cd others = cu.alpha.col(k).sum() - cu.alpha(m_, k);
            spec.c.push_back(local_gradient(h_hat_[size_t(k)], w_hat_[size_t(k)], delta, others));
            lin.a.push_back(std::conj(sensing_.weight[size_t(m_)] * delta) * a_hat_[size_t(k)]);
            power.blocks.push_back(int(k));
            power.weights.push_back(std::norm(delta));
        }
        spec.groups.push_back(std::move(power));
        if (sensing_.threshold > 0.0)
            spec.lin = std::move(lin);
        return spec;
    }

    double AccessPoint::local_objective(const CUReport &cu) const
    {
        double f = 0.0;
        for (size_t k = 0; k < w_hat_.size(); ++k)
        {
            const auto kk = Eigen::Index(k);
            const cd others = cu.alpha.col(kk).sum() - cu.alpha(m_, kk);
            f += std::norm(cu.delta(m_, kk) * h_hat_[k].dot(w_hat_[k]) + others);
        }
        return f;
    }

    LocalUpdate AccessPoint::update(const CUReport &cu)
    {
        LocalUpdate out;
        double f = local_objective(cu);
        for (int step = 0; step < mm_.max_steps; ++step)
        {
            const auto spec = subproblem(cu);
            auto sol = solve(spec);

            // Streams the CU switched off carry no signal; their precoders stay put.
            for (size_t k = 0; k < w_hat_.size(); ++k)
                if (spec.groups.front().weights[k] > 0.0)
                    w_hat_[k] = std::move(sol.x[k]);

            ++out.mm_steps;
            if (step == 0 || sol.status == SolverStatus::Infeasible)
                out.status = sol.status;
            out.surrogate_objective = sol.objective;
            const double f_new = local_objective(cu);
            if (sol.status != SolverStatus::Optimal || settled(f, f_new, mm_.tol))
                break;
            f = f_new;
        }
        out.report = report();
        return out;
    }

    APReport AccessPoint::report() const
    {
        const auto K = Eigen::Index(w_hat_.size());
        APReport r;
        r.m = m_;
        r.z.resize(K);
        r.g.resize(K);
        r.wpow.resize(K);
        for (Eigen::Index k = 0; k < K; ++k)
        {
            r.z[k] = h_hat_[size_t(k)].dot(w_hat_[size_t(k)]);
            r.g[k] = a_hat_[size_t(k)].dot(w_hat_[size_t(k)]);
            r.wpow[k] = w_hat_[size_t(k)].squaredNorm();
        }
        return r;
    }

    // ------------------------------------------------------------------------
    // Central unit

    CentralUnit::CentralUnit(int K, std::vector<double> power, SensingConstants sensing, MMControl mm)
        : M_(int(power.size())), K_(K), power_(std::move(power)), sensing_(std::move(sensing)), mm_(mm)
    {
        delta_ = CMat::Ones(M_, K_);
        g_init_ = CMat::Constant(M_, K_, sensing_.threshold / (double(M_) * std::sqrt(double(K_))));
    }

    CUReport CentralUnit::initial_report() const
    {
        CUReport r;
        r.delta = delta_;
        r.alpha = CMat::Zero(M_, K_);
        r.beta = delta_.cwiseProduct(g_init_);
        return r;
    }

    SubproblemSpec CentralUnit::subproblem(std::span<const APReport> reports) const
    {
        CMat z(M_, K_), g(M_, K_);
        RMat wpow(M_, K_);
        for (const auto &r : reports)
        {
            z.row(r.m) = r.z.transpose();
            g.row(r.m) = r.g.transpose();
            wpow.row(r.m) = r.wpow.transpose();
        }
        const CMat grad = central_gradient(delta_, z);

        // One scalar block per (m,k), laid out m-major
        SubproblemSpec spec;
        LinearConstraint lin;
        lin.bound = sensing_.threshold;
        for (int m = 0; m < M_; ++m)
        {
            QuadGroup power;
            power.bound = power_[size_t(m)];
            for (int k = 0; k < K_; ++k)
            {
                const int b = m * K_ + k;
                spec.c.push_back(CVec::Constant(1, grad(m, k)));
                lin.a.push_back(CVec::Constant(1, std::conj(sensing_.weight[size_t(m)] * g(m, k))));
                power.blocks.push_back(b);
                power.weights.push_back(wpow(m, k));
            }
            spec.groups.push_back(std::move(power));
        }
        if (sensing_.threshold > 0.0)
            spec.lin = std::move(lin);
        return spec;
    }

    CentralUpdate CentralUnit::update(std::span<const APReport> reports)
    {
        CMat z(M_, K_), g(M_, K_);
        for (const auto &r : reports)
        {
            z.row(r.m) = r.z.transpose();
            g.row(r.m) = r.g.transpose();
        }

        CentralUpdate out;
        double f = combined_objective(delta_, z);
        for (int step = 0; step < mm_.max_steps; ++step)
        {
            const auto spec = subproblem(reports);
            const auto sol = solve(spec);
            for (int m = 0; m < M_; ++m)
                for (int k = 0; k < K_; ++k)
                    if (spec.groups[size_t(m)].weights[size_t(k)] > 0.0)
                        delta_(m, k) = sol.x[size_t(m * K_ + k)][0];

            ++out.mm_steps;
            if (step == 0 || sol.status == SolverStatus::Infeasible)
                out.status = sol.status;
            out.surrogate_objective = sol.objective;
            const double f_new = combined_objective(delta_, z);
            if (sol.status != SolverStatus::Optimal || settled(f, f_new, mm_.tol))
                break;
            f = f_new;
        }

        out.report.delta = delta_;
        out.report.alpha = delta_.cwiseProduct(z);
        out.report.beta = delta_.cwiseProduct(g);
        return out;
    }

    // ------------------------------------------------------------------------
    // Orchestration

    std::vector<CVec> random_local_precoders(const SystemConfig &cfg, const NullspaceData &ns, int m,
                                             std::uint64_t trial, StreamTag tag)
    {
        std::vector<CVec> w;
        double total = 0.0;
        for (int k = 0; k < cfg.K; ++k)
        {
            auto rng = substream(cfg.seed, tag, trial, std::uint64_t(m), std::uint64_t(k));
            w.push_back(complex_gaussian(rng, ns.dim(m, k)));
            total += w.back().squaredNorm();
        }
        const double scale = total > 0.0 ? std::sqrt(cfg.Pm[size_t(m)] / total) : 0.0;
        for (auto &v : w)
            v *= scale;
        return w;
    }

    InitialState init_state(const SystemConfig &cfg, const NullspaceData &ns, std::uint64_t trial)
    {
        const auto geometry = make_sensing_geometry(cfg);
        InitialState init;
        for (int m = 0; m < cfg.M; ++m)
            init.state.w_hat.push_back(random_local_precoders(cfg, ns, m, trial));
        const CentralUnit cu(cfg.K, cfg.Pm, SensingConstants::from(geometry, cfg.K));
        init.broadcast = cu.initial_report();
        init.state.delta = init.broadcast.delta;
        return init;
    }

    TwoStageDesign::TwoStageDesign(const SystemConfig &cfg, ChannelSet channels, std::uint64_t trial)
        : cfg_(validated(cfg)), channels_(std::move(channels)), geometry_(make_sensing_geometry(cfg)),
          ns_(project(channels_, geometry_)),
          cu_(cfg.K, cfg.Pm, SensingConstants::from(geometry_, cfg.K), MMControl{cfg.mm_steps, cfg.mm_tol})
    {
        const auto sensing = SensingConstants::from(geometry_, cfg_.K);
        for (int m = 0; m < cfg_.M; ++m)
        {
            AccessPoint ap(m, ns_.h_hat[size_t(m)], ns_.a_hat[size_t(m)], cfg_.Pm[size_t(m)], sensing,
                           MMControl{cfg_.mm_steps, cfg_.mm_tol});
            ap.initialize(random_local_precoders(cfg_, ns_, m, trial));
            aps_.push_back(std::move(ap));
        }
        broadcast_ = cu_.initial_report();
        record_.method = Method::TwoStage;
        record_.initial = snapshot(0);
    }

    void TwoStageDesign::step()
    {
        std::vector<APReport> reports;
        IterationRecord rec;
        for (auto &ap : aps_)
        {
            auto lu = ap.update(broadcast_);
            record_.fronthaul_uplink += lu.report.scalar_count();
            rec.local_status.push_back(lu.status);
            rec.local_surrogate += lu.surrogate_objective;
            reports.push_back(std::move(lu.report));
        }

        auto cu = cu_.update(reports);
        broadcast_ = std::move(cu.report);
        record_.fronthaul_downlink += broadcast_.scalar_count();

        const int it = int(record_.iterations.size()) + 1;
        auto snap = snapshot(it);
        snap.local_status = std::move(rec.local_status);
        snap.local_surrogate = rec.local_surrogate;
        snap.central_status = cu.status;
        snap.surrogate_objective = cu.surrogate_objective;
        snap.safeguard = cu.status == SolverStatus::Infeasible;
        for (auto s : snap.local_status)
            snap.safeguard = snap.safeguard || s == SolverStatus::Infeasible;
        record_.iterations.push_back(std::move(snap));
    }

    PrecoderState TwoStageDesign::state() const
    {
        PrecoderState s;
        for (const auto &ap : aps_)
            s.w_hat.push_back(ap.w_hat());
        s.delta = cu_.delta();
        return s;
    }

    IterationRecord TwoStageDesign::snapshot(int iteration) const
    {
        return evaluate_precoders(cfg_, channels_, geometry_, precoders(), iteration);
    }

    TwoStageResult run_two_stage(const SystemConfig &cfg, const ChannelSet &channels, std::uint64_t trial)
    {
        TwoStageDesign design(cfg, channels, trial);
        for (int it = 0; it < cfg.n_iter; ++it)
            design.step();

        if (cfg.n_iter > 0 && !design.record().any_central_feasible())
            throw GlobalInfeasible("central surrogate infeasible at every iteration (delta_dB = " +
                                   std::to_string(cfg.delta_dB) + ")");

        return TwoStageResult{design.state(), design.precoders(), design.record()};
    }

    TwoStageResult run_two_stage(const SystemConfig &cfg, std::uint64_t trial)
    {
        cfg.validate();
        return run_two_stage(cfg, generate_channels(cfg, trial), trial);
    }
}
