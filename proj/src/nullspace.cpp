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

#include "cfisac/nullspace.hpp"

#include <limits>
#include <string>

namespace cfisac
{
    CMat interference_matrix(const ChannelSet &channels, int m, int k)
    {
        const int K = channels.num_ue();
        const auto &hm = channels.h.at(size_t(m));
        const Eigen::Index n = hm.at(size_t(k)).size();

        CMat H(K - 1, n);
        Eigen::Index row = 0;
        for (int i = 0; i < K; ++i)
            if (i != k)
                H.row(row++) = hm[size_t(i)].adjoint();
        return H;
    }

    CMat nullspace_basis(const CMat &H)
    {
        const Eigen::Index cols = H.cols();
        if (H.rows() == 0)
            return CMat::Identity(cols, cols);

        Eigen::JacobiSVD<CMat> svd(H, Eigen::ComputeFullV);
        const auto &sv = svd.singularValues();
        const double tol = double(std::max(H.rows(), cols)) * std::numeric_limits<double>::epsilon() *
                           (sv.size() > 0 ? sv[0] : 0.0);

        Eigen::Index rank = 0;
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv[i] > tol)
                ++rank;

        if (rank >= cols)
            throw NullspaceEmpty("interference matrix of size " + std::to_string(H.rows()) + "x" +
                                 std::to_string(cols) + " has full column rank");

        return svd.matrixV().rightCols(cols - rank);
    }

    NullspaceData project(const ChannelSet &channels, const SensingGeometry &geometry)
    {
        const int M = channels.num_tx();
        const int K = channels.num_ue();

        NullspaceData ns;
        ns.P.resize(size_t(M));
        ns.h_hat.resize(size_t(M));
        ns.a_hat.resize(size_t(M));
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
            {
                CMat P = nullspace_basis(interference_matrix(channels, m, k));
                ns.h_hat[size_t(m)].push_back(P.adjoint() * channels.h[size_t(m)][size_t(k)]);
                ns.a_hat[size_t(m)].push_back(P.adjoint() * geometry.a_tx.at(size_t(m)));
                ns.P[size_t(m)].push_back(std::move(P));
            }
        return ns;
    }
}
