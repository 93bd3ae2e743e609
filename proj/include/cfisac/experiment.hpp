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

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfisac/config_io.hpp"
#include "cfisac/centralized.hpp"

namespace cfisac
{
    enum class ExperimentKind
    {
        Convergence,
        Beampattern,
        Tradeoff,
        Fronthaul
    };

    std::string to_string(ExperimentKind kind);
    ExperimentKind parse_experiment_kind(std::string_view name);

    struct ExperimentSpec
    {
        ExperimentKind kind = ExperimentKind::Convergence;
        SystemConfig config = default_config();
        int trials = 100;
        std::vector<double> delta_list;
        int jobs = 1;

        // Tradeoff only
        int centralized_mm_steps = default_centralized_mm_steps;

        // Beampattern only: shared channel draw. When unset, the first trial below `trials` that is feasible at
        // every delta is used.
        std::optional<std::uint64_t> beampattern_trial;
        std::vector<double> beampattern_grid = default_beampattern_grid();

        // Fronthaul only
        std::vector<int> ntx_list;
        std::vector<std::pair<int, int>> mk_list; // (M, K)

        void validate() const;
    };

    /// Defaults of the numerical study for one experiment kind, built on `cfg`.
    ExperimentSpec default_spec(ExperimentKind kind, SystemConfig cfg = default_config());

    struct DataRow
    {
        std::string experiment;
        std::string method;
        std::uint64_t seed = 0;
        std::int64_t trial = 0;
        int iteration = 0;
        std::optional<double> delta_dB;
        std::string metric;
        std::string params; // "key=value;..." or empty
        double value = 0.0;
    };

    struct ExperimentResult
    {
        std::vector<DataRow> rows;
        json summary;

        /// True when every (delta, method) group kept at least one feasible trial.
        bool all_groups_feasible = true;
    };

    ExperimentResult run_experiment(const ExperimentSpec &spec);

    /// Header: experiment,method,seed,trial,iteration,delta_dB,metric_name,params,value
    void write_csv(std::ostream &os, const std::vector<DataRow> &rows);

    struct OutputPaths
    {
        std::filesystem::path csv;
        std::filesystem::path summary;
    };

    /// Writes <dir>/<kind>.csv and <dir>/<kind>_summary.json, creating `dir` if needed.
    OutputPaths write_outputs(const ExperimentResult &result, ExperimentKind kind, const std::filesystem::path &dir);
}
