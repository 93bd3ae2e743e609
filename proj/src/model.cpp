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

#include "cfisac/model.hpp"

#include <numbers>
#include <string>

namespace cfisac
{
    namespace
    {
        void require(bool ok, const std::string &msg)
        {
            if (!ok)
                throw std::invalid_argument("SystemConfig: " + msg);
        }

        bool open_half_plane(double deg) { return deg > -90.0 && deg < 90.0; }

        std::uint64_t splitmix64(std::uint64_t x)
        {
            x += 0x9E3779B97F4A7C15ULL;
            x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
            x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
            return x ^ (x >> 31);
        }
    }

    void SystemConfig::validate() const
    {
        require(M >= 1 && N >= 1 && K >= 1, "M, N and K must be >= 1");
        require(Nrx >= 1 && L >= 1, "Nrx and L must be >= 1");
        require(Ntx >= K, "Ntx must be >= K so that every interference null space is nonempty");
        require(spacing_over_lambda > 0.0, "spacing_over_lambda must be positive");
        require(n_iter >= 0, "n_iter must be >= 0");
        require(mm_steps >= 1, "mm_steps must be >= 1");
        require(mm_tol >= 0.0 && std::isfinite(mm_tol), "mm_tol must be finite and >= 0");
        require(Pm.size() == size_t(M), "Pm must have M entries");
        require(sigma_k2.size() == size_t(K), "sigma_k2 must have K entries");
        require(theta_deg.size() == size_t(M), "theta_deg must have M entries");
        require(phi_deg.size() == size_t(N), "phi_deg must have N entries");
        require(sigma_mn2.rows() == M && sigma_mn2.cols() == N, "sigma_mn2 must be M x N");
        for (double p : Pm)
            require(p > 0.0 && std::isfinite(p), "Pm entries must be positive");
        for (double s : sigma_k2)
            require(s > 0.0 && std::isfinite(s), "sigma_k2 entries must be positive");
        require(sigma_n2 > 0.0 && std::isfinite(sigma_n2), "sigma_n2 must be positive");
        require((sigma_mn2.array() > 0.0).all() && sigma_mn2.allFinite(), "sigma_mn2 entries must be positive");
        require(std::isfinite(delta_dB) || delta_dB == -INFINITY, "delta_dB must be finite or -inf");
        for (double t : theta_deg)
            require(open_half_plane(t), "theta_deg entries must lie in (-90, 90)");
        for (double p : phi_deg)
            require(open_half_plane(p), "phi_deg entries must lie in (-90, 90)");
    }

    SystemConfig default_config()
    {
        SystemConfig cfg;
        cfg.M = 4;
        cfg.N = 2;
        cfg.K = 2;
        cfg.Ntx = 32;
        cfg.Nrx = 32;
        cfg.spacing_over_lambda = 0.5;
        cfg.L = 10;
        cfg.Pm.assign(4, 1.0);
        cfg.sigma_k2.assign(2, 1.0);
        cfg.sigma_n2 = db_to_linear(-20.0);
        cfg.sigma_mn2 = RMat::Constant(4, 2, db_to_linear(-10.0));
        cfg.delta_dB = 30.0;
        cfg.theta_deg = {-15.0, 35.0, 5.0, 40.0};
        cfg.phi_deg = {10.0, -20.0};
        cfg.n_iter = 3;
        cfg.seed = 0;
        return cfg;
    }

    cd SensingGeometry::sensing_weight(int m, int K) const
    {
        const auto M = sigma_mn.rows();
        const auto N = sigma_mn.cols();
        cd s = 0.0;
        for (Eigen::Index n = 0; n < N; ++n)
            s += sigma_mn(m, n) * gamma[size_t(n)];
        return s / std::sqrt(double(M * N * K));
    }

    CVec steering(double angle_deg, int n_elem, double spacing_over_lambda)
    {
        const double phase_inc = 2.0 * std::numbers::pi * spacing_over_lambda * std::sin(deg_to_rad(angle_deg));
        CVec a(n_elem);
        for (int q = 0; q < n_elem; ++q)
            a[q] = std::polar(1.0, phase_inc * q);
        return a;
    }

    CVec channel_from_paths(std::span<const cd> gains, std::span<const double> angles_deg, int n_elem,
                            double spacing_over_lambda)
    {
        if (gains.size() != angles_deg.size() || gains.empty())
            throw std::invalid_argument("channel_from_paths: need matching, nonempty gain and angle lists");

        CVec h = CVec::Zero(n_elem);
        for (size_t l = 0; l < gains.size(); ++l)
            h += gains[l] * steering(angles_deg[l], n_elem, spacing_over_lambda);
        return h / std::sqrt(double(gains.size()));
    }

    CVec complex_gaussian(Rng &rng, Eigen::Index n)
    {
        std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
        CVec v(n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double re = nd(rng);
            v[i] = cd(re, nd(rng));
        }
        return v;
    }

    CVec gen_comm_channel(Rng &rng, int L, int n_elem, double spacing_over_lambda)
    {
        if (L < 1)
            throw std::invalid_argument("gen_comm_channel: L must be >= 1");

        std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
        std::uniform_real_distribution<double> ud(-90.0, 90.0);
        std::vector<cd> gains(static_cast<size_t>(L));
        std::vector<double> angles(static_cast<size_t>(L));
        for (int l = 0; l < L; ++l)
        {
            const double re = nd(rng);
            gains[size_t(l)] = cd(re, nd(rng));
            angles[size_t(l)] = ud(rng);
        }
        return channel_from_paths(gains, angles, n_elem, spacing_over_lambda);
    }

    CVec mrc_combiner(double phi_deg, int n_rx, double spacing_over_lambda)
    {
        return steering(phi_deg, n_rx, spacing_over_lambda) / std::sqrt(double(n_rx));
    }

    double delta_tilde(double delta_dB, std::span<const CVec> combiners, double sigma_n2)
    {
        double noise = 0.0;
        for (const auto &g : combiners)
            noise += g.squaredNorm() * sigma_n2;
        return noise * db_to_linear(delta_dB);
    }

    Rng substream(std::uint64_t seed, StreamTag tag, std::uint64_t trial, std::uint64_t m, std::uint64_t k)
    {
        std::uint64_t x = splitmix64(seed);
        x = splitmix64(x ^ static_cast<std::uint64_t>(tag));
        x = splitmix64(x ^ trial);
        x = splitmix64(x ^ m);
        x = splitmix64(x ^ k);
        return Rng(x);
    }

    ChannelSet generate_channels(const SystemConfig &cfg, std::uint64_t trial)
    {
        ChannelSet ch;
        ch.h.resize(size_t(cfg.M));
        for (int m = 0; m < cfg.M; ++m)
            for (int k = 0; k < cfg.K; ++k)
            {
                auto rng = substream(cfg.seed, StreamTag::comm_channel, trial, std::uint64_t(m), std::uint64_t(k));
                ch.h[size_t(m)].push_back(gen_comm_channel(rng, cfg.L, cfg.Ntx, cfg.spacing_over_lambda));
            }
        return ch;
    }

    SensingGeometry make_sensing_geometry(const SystemConfig &cfg)
    {
        SensingGeometry geo;
        for (double t : cfg.theta_deg)
            geo.a_tx.push_back(steering(t, cfg.Ntx, cfg.spacing_over_lambda));
        for (double p : cfg.phi_deg)
        {
            CVec g = mrc_combiner(p, cfg.Nrx, cfg.spacing_over_lambda);
            geo.gamma.push_back(g.dot(steering(p, cfg.Nrx, cfg.spacing_over_lambda)));
            geo.g.push_back(std::move(g));
        }
        geo.sigma_mn = cfg.sigma_mn2.array().sqrt().matrix();
        geo.delta_tilde = delta_tilde(cfg.delta_dB, geo.g, cfg.sigma_n2);
        return geo;
    }
}
