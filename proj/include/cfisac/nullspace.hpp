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
    /// Raised when an interference channel has a trivial null space (K-1 >= Ntx at full rank).
    class NullspaceEmpty : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Null-space bases and projected channels, indexed [m][k].
    struct NullspaceData
    {
        std::vector<std::vector<CMat>> P;     // Ntx x r_{m,k}, orthonormal columns
        std::vector<std::vector<CVec>> h_hat; // P^H h_{m,k}
        std::vector<std::vector<CVec>> a_hat; // P^H a(theta_m)

        /// w_{m,k} = P_{m,k} w_hat
        CVec lift(int m, int k, const CVec &w_hat) const { return P[size_t(m)][size_t(k)] * w_hat; }
        Eigen::Index dim(int m, int k) const { return P[size_t(m)][size_t(k)].cols(); }
    };

    // Rows h_{m,i}^H for every i != k, ascending in i
    CMat interference_matrix(const ChannelSet &channels, int m, int k);

    // Orthonormal basis of {x : H x = 0}. Identity for a matrix without rows.
    CMat nullspace_basis(const CMat &H);

    NullspaceData project(const ChannelSet &channels, const SensingGeometry &geometry);
}
