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

// Monte Carlo runner for the convergence, beampattern, tradeoff and fronthaul studies.
//
//   cfisac --experiment tradeoff --trials 100 --jobs 4 --out results
//   cfisac --experiment convergence --set n_iter=20 --delta 30 --delta 44
//
// Exit codes: 0 success, 1 I/O or internal error, 2 bad configuration, 3 infeasible design.
// Errors are reported on stderr as one JSON object.

#include <iostream>
#include <thread>

#include "CLI11.hpp"

#include "cfisac/experiment.hpp"

namespace
{
    enum ExitCode
    {
        ok = 0,
        internal = 1,
        bad_config = 2,
        infeasible = 3
    };

    // complex scalar as two 32-bit floats
    constexpr std::int64_t bytes_per_scalar = 8;

    int fail(ExitCode code, const std::string &kind, const std::string &message)
    {
        std::cerr << cfisac::json{{"error", kind}, {"message", message}}.dump() << '\n';
        return code;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Distributed beamforming for cell-free ISAC: Monte Carlo experiments"};

    std::string experiment;
    std::string config_path;
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    std::vector<double> deltas;
    std::string out = "results";
    std::vector<std::string> overrides;
    int jobs = int(std::max(1u, std::thread::hardware_concurrency()));
    std::optional<std::uint64_t> bp_trial;
    std::optional<int> central_steps;
    bool bytes = false;

    app.add_option("--experiment,-e", experiment, "convergence | beampattern | tradeoff | fronthaul")
        ->required()
        ->check(CLI::IsMember({"convergence", "beampattern", "tradeoff", "fronthaul"}));
    app.add_option("--config,-c", config_path, "JSON configuration applied on top of the defaults");
    app.add_option("--trials,-t", trials, "channel draws per delta (default 100)");
    app.add_option("--seed,-s", seed, "master seed");
    app.add_option("--delta,-d", deltas, "sensing threshold(s) in dB, repeatable");
    app.add_option("--out,-o", out, "output directory")->capture_default_str();
    app.add_option("--set", overrides, "configuration override key=value, repeatable");
    app.add_option("--jobs,-j", jobs, "worker threads")->capture_default_str();
    app.add_option("--beampattern-trial", bp_trial, "channel draw for the beampattern study");
    app.add_option("--centralized-mm-steps", central_steps, "MM step cap of the centralized baseline");
    app.add_flag("--bytes", bytes, "fronthaul: also print loads in bytes (8 bytes per complex scalar)");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        return fail(bad_config, "usage", e.what());
    }

    cfisac::ExperimentSpec spec;
    try
    {
        const auto kind = cfisac::parse_experiment_kind(experiment);
        spec = cfisac::default_spec(kind);
        if (!config_path.empty())
            spec.config = cfisac::load_config(config_path, spec.config);
        for (const auto &o : overrides)
            cfisac::apply_override(spec.config, o);
        if (seed)
            spec.config.seed = *seed;
        if (trials)
            spec.trials = *trials;
        if (!deltas.empty())
            spec.delta_list = deltas;
        if (central_steps)
            spec.centralized_mm_steps = *central_steps;
        spec.beampattern_trial = bp_trial;
        spec.jobs = jobs;
        spec.validate();
    }
    catch (const std::invalid_argument &e)
    {
        return fail(bad_config, "config", e.what());
    }

    try
    {
        const auto result = cfisac::run_experiment(spec);
        const auto paths = cfisac::write_outputs(result, spec.kind, out);
        const cfisac::json report{{"csv", paths.csv.string()}, {"summary", paths.summary.string()},
                                  {"rows", result.rows.size()}};
        if (bytes && spec.kind == cfisac::ExperimentKind::Fronthaul)
            for (const auto &row : result.rows)
                std::cout << row.method << ' ' << row.params << ' ' << std::int64_t(row.value) << " scalars "
                          << std::int64_t(row.value) * bytes_per_scalar << " bytes\n";
        if (!result.all_groups_feasible)
        {
            std::cout << report.dump() << '\n';
            return fail(infeasible, "infeasible", "at least one delta had no feasible channel draw; see the summary");
        }
        std::cout << report.dump() << '\n';
        return ok;
    }
    catch (const cfisac::GlobalInfeasible &e)
    {
        return fail(infeasible, "infeasible", e.what());
    }
    catch (const std::invalid_argument &e)
    {
        return fail(bad_config, "config", e.what());
    }
    catch (const std::exception &e)
    {
        return fail(internal, "internal", e.what());
    }
}
