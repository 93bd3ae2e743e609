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

#include "cfisac/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace cfisac
{
    namespace
    {
        struct TrialOutcome
        {
            bool feasible = true;
            std::vector<DataRow> rows;
        };

        // Runs fn(0..n-1) on up to `jobs` threads. Results keep their index, so the output order never depends on
        // scheduling.
        template <class Fn>
        std::vector<TrialOutcome> parallel_map(size_t n, int jobs, Fn fn)
        {
            std::vector<TrialOutcome> out(n);
            std::atomic<size_t> next{0};
            std::exception_ptr error;
            std::mutex error_mutex;

            auto worker = [&] {
                for (size_t i = next++; i < n; i = next++)
                {
                    try
                    {
                        out[i] = fn(i);
                    }
                    catch (...)
                    {
                        const std::lock_guard lock(error_mutex);
                        if (!error)
                            error = std::current_exception();
                        next = n;
                    }
                }
            };

            const size_t workers = std::min(n, size_t(std::max(jobs, 1)));
            if (workers <= 1)
                worker();
            else
            {
                std::vector<std::thread> pool;
                for (size_t w = 0; w < workers; ++w)
                    pool.emplace_back(worker);
                for (auto &t : pool)
                    t.join();
            }
            if (error)
                std::rethrow_exception(error);
            return out;
        }

        std::string method_name(Method m)
        {
            return std::string(to_string(m));
        }

        std::string number(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        SystemConfig with_delta(SystemConfig cfg, double delta_dB)
        {
            cfg.delta_dB = delta_dB;
            return cfg;
        }

        DataRow make_row(const ExperimentSpec &spec, std::string method, std::int64_t trial, int iteration,
                         std::optional<double> delta_dB, std::string metric, double value, std::string params = {})
        {
            DataRow r;
            r.experiment = to_string(spec.kind);
            r.method = std::move(method);
            r.seed = spec.config.seed;
            r.trial = trial;
            r.iteration = iteration;
            r.delta_dB = delta_dB;
            r.metric = std::move(metric);
            r.params = std::move(params);
            r.value = value;
            return r;
        }

        void append_iteration(const ExperimentSpec &spec, std::vector<DataRow> &rows, Method method,
                              std::int64_t trial, double delta_dB, const IterationRecord &rec)
        {
            rows.push_back(make_row(spec, method_name(method), trial, rec.iteration, delta_dB, "sum_sinr", rec.sum_sinr));
            rows.push_back(make_row(spec, method_name(method), trial, rec.iteration, delta_dB, "ssnr", rec.ssnr));
            rows.push_back(make_row(spec, method_name(method), trial, rec.iteration, delta_dB, "safeguard",
                                    rec.safeguard ? 1.0 : 0.0));
        }

        // Mean of the rows of one group, in row order.
        double row_mean(const std::vector<DataRow> &rows, const std::string &method, double delta_dB,
                        const std::string &metric, std::optional<int> iteration)
        {
            double sum = 0.0;
            std::size_t n = 0;
            for (const auto &r : rows)
                if (r.method == method && r.delta_dB == delta_dB && r.metric == metric &&
                    (!iteration || r.iteration == *iteration))
                {
                    sum += r.value;
                    ++n;
                }
            return n ? sum / double(n) : std::nan("");
        }

        json nullable(double v)
        {
            return std::isfinite(v) ? json(v) : json(nullptr);
        }

        struct Group
        {
            std::vector<std::int64_t> included;
            std::vector<std::int64_t> infeasible;
        };

        json group_json(const Group &g)
        {
            return json{{"included", g.included.size()},
                        {"infeasible", g.infeasible.size()},
                        {"infeasible_trials", g.infeasible}};
        }

        json summary_header(const ExperimentSpec &spec)
        {
            json s;
            s["experiment"] = to_string(spec.kind);
            s["seed"] = spec.config.seed;
            s["trials"] = spec.trials;
            s["config"] = to_json(spec.config);
            if (!spec.delta_list.empty())
                s["delta_list"] = spec.delta_list;
            return s;
        }

        // ------------------------------------------------------------------------

        ExperimentResult run_convergence(const ExperimentSpec &spec)
        {
            const size_t T = size_t(spec.trials);
            const auto outcomes = parallel_map(spec.delta_list.size() * T, spec.jobs, [&](size_t i) {
                const double d = spec.delta_list[i / T];
                const auto trial = std::int64_t(i % T);
                TrialOutcome o;
                try
                {
                    const auto res = run_two_stage(with_delta(spec.config, d), std::uint64_t(trial));
                    append_iteration(spec, o.rows, Method::TwoStage, trial, d, res.record.initial);
                    for (const auto &rec : res.record.iterations)
                        append_iteration(spec, o.rows, Method::TwoStage, trial, d, rec);
                }
                catch (const GlobalInfeasible &)
                {
                    o.feasible = false;
                }
                return o;
            });

            ExperimentResult result;
            result.summary = summary_header(spec);
            result.summary["results"] = json::array();
            const auto method = method_name(Method::TwoStage);
            for (size_t di = 0; di < spec.delta_list.size(); ++di)
            {
                Group g;
                for (size_t t = 0; t < T; ++t)
                {
                    auto &o = outcomes[di * T + t];
                    (o.feasible ? g.included : g.infeasible).push_back(std::int64_t(t));
                    result.rows.insert(result.rows.end(), o.rows.begin(), o.rows.end());
                }
                const double d = spec.delta_list[di];
                json entry = group_json(g);
                entry["delta_dB"] = d;
                entry["method"] = method;
                json means = json::array();
                double safeguards = 0.0;
                for (int it = 0; it <= spec.config.n_iter; ++it)
                    means.push_back(nullable(row_mean(result.rows, method, d, "sum_sinr", it)));
                for (const auto &r : result.rows)
                    if (r.delta_dB == d && r.metric == "safeguard")
                        safeguards += r.value;
                entry["mean_sum_sinr"] = std::move(means);
                entry["safeguard_events"] = safeguards;
                result.all_groups_feasible = result.all_groups_feasible && !g.included.empty();
                result.summary["results"].push_back(std::move(entry));
            }
            return result;
        }

        ExperimentResult run_tradeoff(const ExperimentSpec &spec)
        {
            const size_t T = size_t(spec.trials);
            const std::array methods{Method::TwoStage, Method::Centralized};
            const size_t per_delta = methods.size() * T;

            const auto outcomes = parallel_map(spec.delta_list.size() * per_delta, spec.jobs, [&](size_t i) {
                const double d = spec.delta_list[i / per_delta];
                const Method method = methods[(i % per_delta) / T];
                const auto trial = std::int64_t(i % T);
                const auto cfg = with_delta(spec.config, d);
                TrialOutcome o;
                try
                {
                    const RunRecord record =
                        method == Method::TwoStage
                            ? run_two_stage(cfg, std::uint64_t(trial)).record
                            : run_centralized(cfg, spec.centralized_mm_steps, std::uint64_t(trial)).record;
                    const auto &last = record.iterations.empty() ? record.initial : record.iterations.back();
                    append_iteration(spec, o.rows, method, trial, d, last);
                }
                catch (const GlobalInfeasible &)
                {
                    o.feasible = false;
                }
                return o;
            });

            ExperimentResult result;
            result.summary = summary_header(spec);
            result.summary["centralized_mm_steps"] = spec.centralized_mm_steps;
            result.summary["results"] = json::array();
            for (size_t di = 0; di < spec.delta_list.size(); ++di)
                for (size_t mi = 0; mi < methods.size(); ++mi)
                {
                    Group g;
                    for (size_t t = 0; t < T; ++t)
                    {
                        auto &o = outcomes[di * per_delta + mi * T + t];
                        (o.feasible ? g.included : g.infeasible).push_back(std::int64_t(t));
                        result.rows.insert(result.rows.end(), o.rows.begin(), o.rows.end());
                    }
                    const double d = spec.delta_list[di];
                    const auto method = method_name(methods[mi]);
                    json entry = group_json(g);
                    entry["delta_dB"] = d;
                    entry["method"] = method;
                    entry["mean_sum_sinr"] = nullable(row_mean(result.rows, method, d, "sum_sinr", std::nullopt));
                    result.all_groups_feasible = result.all_groups_feasible && !g.included.empty();
                    result.summary["results"].push_back(std::move(entry));
                }
            return result;
        }

        std::optional<std::vector<TwoStageResult>> feasible_everywhere(const ExperimentSpec &spec, std::uint64_t trial)
        {
            std::vector<TwoStageResult> runs;
            for (double d : spec.delta_list)
            {
                try
                {
                    auto res = run_two_stage(with_delta(spec.config, d), trial);
                    if (!res.record.final_feasible())
                        return std::nullopt;
                    runs.push_back(std::move(res));
                }
                catch (const GlobalInfeasible &)
                {
                    return std::nullopt;
                }
            }
            return runs;
        }

        ExperimentResult run_beampattern(const ExperimentSpec &spec)
        {
            std::optional<std::vector<TwoStageResult>> runs;
            std::uint64_t trial = 0;
            if (spec.beampattern_trial)
            {
                trial = *spec.beampattern_trial;
                runs = feasible_everywhere(spec, trial);
                if (!runs)
                    throw GlobalInfeasible("beampattern: trial " + std::to_string(trial) +
                                           " is not feasible at every delta");
            }
            else
            {
                for (trial = 0; trial < std::uint64_t(spec.trials) && !runs; ++trial)
                    runs = feasible_everywhere(spec, trial);
                if (!runs)
                    throw GlobalInfeasible("beampattern: no channel draw below trial " +
                                           std::to_string(spec.trials) + " is feasible at every delta");
                --trial;
            }

            ExperimentResult result;
            result.summary = summary_header(spec);
            result.summary["trial"] = trial;
            result.summary["results"] = json::array();
            const auto method = method_name(Method::TwoStage);
            const auto &cfg = spec.config;
            for (size_t di = 0; di < spec.delta_list.size(); ++di)
            {
                const double d = spec.delta_list[di];
                const auto &res = (*runs)[di];
                json target_gain = json::array();
                json peak = json::array();
                for (int m = 0; m < cfg.M; ++m)
                {
                    const auto &F = res.precoders[size_t(m)];
                    const auto gain = beampattern(F, spec.beampattern_grid, cfg.spacing_over_lambda);
                    for (size_t a = 0; a < gain.size(); ++a)
                        result.rows.push_back(make_row(spec, method, std::int64_t(trial), cfg.n_iter, d, "gain_dB",
                                                       gain[a],
                                                       "m=" + std::to_string(m + 1) +
                                                           ";angle_deg=" + number(spec.beampattern_grid[a])));
                    const std::array target{cfg.theta_deg[size_t(m)]};
                    target_gain.push_back(beampattern(F, target, cfg.spacing_over_lambda).front());
                    const auto best = std::max_element(gain.begin(), gain.end()) - gain.begin();
                    peak.push_back(gain.empty() ? json(nullptr) : json(spec.beampattern_grid[size_t(best)]));
                }
                result.summary["results"].push_back(json{{"delta_dB", d},
                                                         {"method", method},
                                                         {"gain_at_target_dB", std::move(target_gain)},
                                                         {"peak_angle_deg", std::move(peak)},
                                                         {"sum_sinr", res.record.iterations.empty()
                                                                          ? res.record.initial.sum_sinr
                                                                          : res.record.iterations.back().sum_sinr}});
            }
            return result;
        }

        ExperimentResult run_fronthaul(const ExperimentSpec &spec)
        {
            ExperimentResult result;
            result.summary = summary_header(spec);
            result.summary["results"] = json::array();
            const int n_iter = spec.config.n_iter;
            for (const auto &[M, K] : spec.mk_list)
                for (auto method : {Method::TwoStage, Method::Centralized})
                {
                    json loads = json::array();
                    for (int ntx : spec.ntx_list)
                    {
                        const auto load = fronthaul_load(method, M, K, ntx, n_iter);
                        loads.push_back(load);
                        result.rows.push_back(make_row(spec, method_name(method), 0, n_iter, std::nullopt,
                                                       "fronthaul_scalars", double(load),
                                                       "M=" + std::to_string(M) + ";K=" + std::to_string(K) +
                                                           ";Ntx=" + std::to_string(ntx)));
                    }
                    result.summary["results"].push_back(json{{"method", method_name(method)},
                                                             {"label", "M=" + std::to_string(M) +
                                                                           ", K=" + std::to_string(K)},
                                                             {"M", M},
                                                             {"K", K},
                                                             {"n_iter", n_iter},
                                                             {"ntx", spec.ntx_list},
                                                             {"scalars", std::move(loads)}});
                }
            return result;
        }
    }

    std::string to_string(ExperimentKind kind)
    {
        switch (kind)
        {
        case ExperimentKind::Convergence:
            return "convergence";
        case ExperimentKind::Beampattern:
            return "beampattern";
        case ExperimentKind::Tradeoff:
            return "tradeoff";
        case ExperimentKind::Fronthaul:
            return "fronthaul";
        }
        return "unknown";
    }

    ExperimentKind parse_experiment_kind(std::string_view name)
    {
        for (auto k : {ExperimentKind::Convergence, ExperimentKind::Beampattern, ExperimentKind::Tradeoff,
                       ExperimentKind::Fronthaul})
            if (name == to_string(k))
                return k;
        throw std::invalid_argument("unknown experiment '" + std::string(name) +
                                    "' (expected convergence, beampattern, tradeoff or fronthaul)");
    }

    void ExperimentSpec::validate() const
    {
        auto require = [](bool ok, const char *what) {
            if (!ok)
                throw std::invalid_argument(std::string("ExperimentSpec: ") + what);
        };
        config.validate();
        require(trials >= 1, "trials must be >= 1");
        require(jobs >= 1, "jobs must be >= 1");
        if (kind != ExperimentKind::Fronthaul)
        {
            require(!delta_list.empty(), "delta_list must not be empty");
            for (double d : delta_list)
                require(std::isfinite(d) || d == -INFINITY, "delta_list entries must be finite or -inf");
        }
        if (kind == ExperimentKind::Tradeoff)
            require(centralized_mm_steps >= 1, "centralized_mm_steps must be >= 1");
        if (kind == ExperimentKind::Beampattern)
            require(!beampattern_grid.empty(), "beampattern_grid must not be empty");
        if (kind == ExperimentKind::Fronthaul)
        {
            require(!ntx_list.empty() && !mk_list.empty(), "ntx_list and mk_list must not be empty");
            for (int n : ntx_list)
                require(n >= 1, "ntx_list entries must be >= 1");
            for (const auto &[M, K] : mk_list)
                require(M >= 1 && K >= 1, "mk_list entries must be >= 1");
        }
    }

    ExperimentSpec default_spec(ExperimentKind kind, SystemConfig cfg)
    {
        ExperimentSpec spec;
        spec.kind = kind;
        switch (kind)
        {
        case ExperimentKind::Convergence:
            cfg.n_iter = 10;
            spec.delta_list = {30.0, 40.0};
            break;
        case ExperimentKind::Beampattern:
            spec.delta_list = {40.0, 46.0};
            break;
        case ExperimentKind::Tradeoff:
            cfg.n_iter = 3;
            for (int d = 30; d <= 44; d += 2)
                spec.delta_list.push_back(d);
            break;
        case ExperimentKind::Fronthaul:
            for (int n = 8; n <= 1024; n *= 2)
                spec.ntx_list.push_back(n);
            spec.mk_list = {{4, 2}, {4, 8}, {16, 2}, {16, 8}};
            break;
        }
        spec.config = std::move(cfg);
        return spec;
    }

    ExperimentResult run_experiment(const ExperimentSpec &spec)
    {
        spec.validate();
        switch (spec.kind)
        {
        case ExperimentKind::Convergence:
            return run_convergence(spec);
        case ExperimentKind::Beampattern:
            return run_beampattern(spec);
        case ExperimentKind::Tradeoff:
            return run_tradeoff(spec);
        case ExperimentKind::Fronthaul:
            return run_fronthaul(spec);
        }
        throw std::invalid_argument("run_experiment: unknown kind");
    }

    void write_csv(std::ostream &os, const std::vector<DataRow> &rows)
    {
        os << "experiment,method,seed,trial,iteration,delta_dB,metric_name,params,value\n";
        for (const auto &r : rows)
        {
            os << r.experiment << ',' << r.method << ',' << r.seed << ',' << r.trial << ',' << r.iteration << ',';
            if (r.delta_dB)
                os << number(*r.delta_dB);
            os << ',' << r.metric << ',' << r.params << ',' << number(r.value) << '\n';
        }
    }

    OutputPaths write_outputs(const ExperimentResult &result, ExperimentKind kind, const std::filesystem::path &dir)
    {
        std::filesystem::create_directories(dir);
        OutputPaths paths{dir / (to_string(kind) + ".csv"), dir / (to_string(kind) + "_summary.json")};

        std::ofstream csv(paths.csv, std::ios::binary);
        if (!csv)
            throw std::runtime_error("cannot write " + paths.csv.string());
        write_csv(csv, result.rows);

        std::ofstream summary(paths.summary, std::ios::binary);
        if (!summary)
            throw std::runtime_error("cannot write " + paths.summary.string());
        summary << result.summary.dump(2) << '\n';
        return paths;
    }
}
