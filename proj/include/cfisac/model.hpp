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

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace cfisac
{
    using cd = std::complex<double>;
    using CVec = Eigen::VectorXcd;
    using CMat = Eigen::MatrixXcd;
    using RVec = Eigen::VectorXd;
    using RMat = Eigen::MatrixXd;

    /// Per-stream random engine. Seeded from a master seed and a stream coordinate.
    using Rng = std::mt19937_64;

    // Power ratio conversions (10*log10 convention for every quantity in this library)
    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

    inline double deg_to_rad(double deg) { return deg * 3.14159265358979323846 / 180.0; }

    /// Scenario parameters. Field names match the keys of the JSON configuration file.
    struct SystemConfig
    {
        int M = 4;                        // transmit APs
        int N = 2;                        // receive APs
        int K = 2;                        // single-antenna UEs
        int Ntx = 32;                     // antennas per transmit AP
        int Nrx = 32;                     // antennas per receive AP
        double spacing_over_lambda = 0.5; // ULA spacing d / lambda
        int L = 10;                       // multipath components per channel
        std::vector<double> Pm;           // per-AP power budget [W], length M
        std::vector<double> sigma_k2;     // UE noise variances, length K
        double sigma_n2 = 0.01;           // receive-AP noise variance
        RMat sigma_mn2;                   // sensing path-gain variances, M x N
        double delta_dB = 30.0;           // sensing SNR threshold
        std::vector<double> theta_deg;    // target AoD per transmit AP, length M
        std::vector<double> phi_deg;      // target AoA per receive AP, length N
        int n_iter = 3;                   // AP <-> CU exchange rounds
        int mm_steps = 50;                // max MM steps per local or central solve
        double mm_tol = 1e-9;             // relative objective change that ends the MM loop
        std::uint64_t seed = 0;

        /// Throws std::invalid_argument on the first violated invariant.
        void validate() const;
    };

    /// Evaluation scenario used throughout the numerical study: 4 Tx APs, 2 Rx APs, 2 UEs, 32-element ULAs.
    SystemConfig default_config();

    /// Communication channels, h[m][k] of length Ntx.
    struct ChannelSet
    {
        std::vector<std::vector<CVec>> h;

        int num_tx() const { return static_cast<int>(h.size()); }
        int num_ue() const { return h.empty() ? 0 : static_cast<int>(h.front().size()); }
    };

    /// Target geometry seen by the transmit and receive APs.
    struct SensingGeometry
    {
        std::vector<CVec> a_tx;  // steering towards theta_m, length Ntx
        std::vector<CVec> g;     // receive combiners, length Nrx
        std::vector<cd> gamma;   // g_n^H a(phi_n)
        RMat sigma_mn;           // sqrt(sigma_mn2), M x N
        double delta_tilde = 0.0;

        /// (1/sqrt(MNK)) * sum_n sigma_{m,n} gamma_n, the weight of AP m in the linearised sensing constraint.
        cd sensing_weight(int m, int K) const;
    };

    // ULA response exp(j 2 pi (d/lambda) q sin(angle)), q = 0 .. n_elem-1
    CVec steering(double angle_deg, int n_elem, double spacing_over_lambda = 0.5);

    // Multipath channel from explicit path gains and departure angles
    CVec channel_from_paths(std::span<const cd> gains, std::span<const double> angles_deg, int n_elem,
                            double spacing_over_lambda = 0.5);

    // (1/sqrt(L)) sum_l alpha_l a(psi_l), alpha ~ CN(0,1), psi ~ U(-90, 90) deg
    CVec gen_comm_channel(Rng &rng, int L, int n_elem, double spacing_over_lambda = 0.5);

    // Maximum ratio combiner a(phi)/sqrt(n_rx)
    CVec mrc_combiner(double phi_deg, int n_rx, double spacing_over_lambda = 0.5);

    // sum_n ||g_n||^2 sigma_n2 10^(delta_dB/10)
    double delta_tilde(double delta_dB, std::span<const CVec> combiners, double sigma_n2);

    /// Independent stream indices. Streams never overlap for distinct (tag, trial, m, k).
    enum class StreamTag : std::uint64_t
    {
        comm_channel = 1,
        precoder_init = 2,
    };

    /// Counter-based seeding: the engine for (seed, tag, trial, m, k) does not depend on generation order.
    Rng substream(std::uint64_t seed, StreamTag tag, std::uint64_t trial, std::uint64_t m = 0, std::uint64_t k = 0);

    /// i.i.d. CN(0,1) vector
    CVec complex_gaussian(Rng &rng, Eigen::Index n);

    /// Channels for all (m,k) of one Monte Carlo trial.
    ChannelSet generate_channels(const SystemConfig &cfg, std::uint64_t trial);

    /// Steering vectors, MRC combiners, gamma_n and the linear threshold for a configuration.
    SensingGeometry make_sensing_geometry(const SystemConfig &cfg);
}
