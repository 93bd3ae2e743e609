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

#include "cfisac/config_io.hpp"

#include <algorithm>
#include <fstream>
#include <string>

namespace cfisac
{
    namespace
    {
        std::vector<double> broadcast(const json &v, int n)
        {
            if (v.is_number())
                return std::vector<double>(size_t(n), v.get<double>());
            return v.get<std::vector<double>>();
        }

        double number(const json &v)
        {
            // JSON has no -inf literal; accept it as a string for delta_dB
            if (v.is_string())
            {
                const auto s = v.get<std::string>();
                if (s == "-inf" || s == "-Infinity")
                    return -INFINITY;
                return std::stod(s);
            }
            return v.get<double>();
        }
    }

    json to_json(const SystemConfig &cfg)
    {
        json sig = json::array();
        for (Eigen::Index m = 0; m < cfg.sigma_mn2.rows(); ++m)
        {
            std::vector<double> row(size_t(cfg.sigma_mn2.cols()));
            for (Eigen::Index n = 0; n < cfg.sigma_mn2.cols(); ++n)
                row[size_t(n)] = cfg.sigma_mn2(m, n);
            sig.push_back(row);
        }
        return json{{"M", cfg.M},
                    {"N", cfg.N},
                    {"K", cfg.K},
                    {"Ntx", cfg.Ntx},
                    {"Nrx", cfg.Nrx},
                    {"spacing_over_lambda", cfg.spacing_over_lambda},
                    {"L", cfg.L},
                    {"Pm", cfg.Pm},
                    {"sigma_k2", cfg.sigma_k2},
                    {"sigma_n2", cfg.sigma_n2},
                    {"sigma_mn2", sig},
                    {"delta_dB", std::isfinite(cfg.delta_dB) ? json(cfg.delta_dB) : json("-inf")},
                    {"theta_deg", cfg.theta_deg},
                    {"phi_deg", cfg.phi_deg},
                    {"n_iter", cfg.n_iter},
                    {"mm_steps", cfg.mm_steps},
                    {"mm_tol", cfg.mm_tol},
                    {"seed", cfg.seed}};
    }

    static SystemConfig apply_keys(const json &j, SystemConfig cfg)
    {
        if (!j.is_object())
            throw std::invalid_argument("configuration must be a JSON object");

        // Dimensions first so that scalar broadcasts see the final sizes.
        for (const char *key : {"M", "N", "K", "Ntx", "Nrx", "L", "n_iter"})
            if (j.contains(key))
            {
                const int v = j.at(key).get<int>();
                const std::string k = key;
                if (k == "M") cfg.M = v;
                else if (k == "N") cfg.N = v;
                else if (k == "K") cfg.K = v;
                else if (k == "Ntx") cfg.Ntx = v;
                else if (k == "Nrx") cfg.Nrx = v;
                else if (k == "L") cfg.L = v;
                else cfg.n_iter = v;
            }

        // Uniform per-AP / per-UE lists follow dimension changes unless given explicitly.
        auto uniform = [](const std::vector<double> &v) {
            return !v.empty() && std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
        };
        if (!j.contains("Pm") && cfg.Pm.size() != size_t(cfg.M) && uniform(cfg.Pm))
            cfg.Pm.assign(size_t(cfg.M), cfg.Pm.front());
        if (!j.contains("sigma_k2") && cfg.sigma_k2.size() != size_t(cfg.K) && uniform(cfg.sigma_k2))
            cfg.sigma_k2.assign(size_t(cfg.K), cfg.sigma_k2.front());
        if (!j.contains("sigma_mn2") && (cfg.sigma_mn2.rows() != cfg.M || cfg.sigma_mn2.cols() != cfg.N) &&
            cfg.sigma_mn2.size() > 0 && (cfg.sigma_mn2.array() == cfg.sigma_mn2(0, 0)).all())
            cfg.sigma_mn2 = RMat::Constant(cfg.M, cfg.N, cfg.sigma_mn2(0, 0));

        for (const auto &[key, v] : j.items())
        {
            if (key == "M" || key == "N" || key == "K" || key == "Ntx" || key == "Nrx" || key == "L" ||
                key == "n_iter")
                continue;
            else if (key == "spacing_over_lambda")
                cfg.spacing_over_lambda = v.get<double>();
            else if (key == "Pm")
                cfg.Pm = broadcast(v, cfg.M);
            else if (key == "sigma_k2")
                cfg.sigma_k2 = broadcast(v, cfg.K);
            else if (key == "sigma_n2")
                cfg.sigma_n2 = v.get<double>();
            else if (key == "sigma_mn2")
            {
                if (v.is_number())
                    cfg.sigma_mn2 = RMat::Constant(cfg.M, cfg.N, v.get<double>());
                else
                {
                    const auto rows = v.get<std::vector<std::vector<double>>>();
                    cfg.sigma_mn2.resize(Eigen::Index(rows.size()), rows.empty() ? 0 : Eigen::Index(rows[0].size()));
                    for (size_t m = 0; m < rows.size(); ++m)
                    {
                        if (rows[m].size() != size_t(cfg.sigma_mn2.cols()))
                            throw std::invalid_argument("sigma_mn2 rows must have equal length");
                        for (size_t n = 0; n < rows[m].size(); ++n)
                            cfg.sigma_mn2(Eigen::Index(m), Eigen::Index(n)) = rows[m][n];
                    }
                }
            }
            else if (key == "delta_dB")
                cfg.delta_dB = number(v);
            else if (key == "theta_deg")
                cfg.theta_deg = v.get<std::vector<double>>();
            else if (key == "phi_deg")
                cfg.phi_deg = v.get<std::vector<double>>();
            else if (key == "seed")
                cfg.seed = v.get<std::uint64_t>();
            else if (key == "mm_steps")
                cfg.mm_steps = v.get<int>();
            else if (key == "mm_tol")
                cfg.mm_tol = v.get<double>();
            else
                throw std::invalid_argument("unknown configuration key '" + key + "'");
        }
        return cfg;
    }

    SystemConfig config_from_json(const json &j, SystemConfig base)
    {
        try
        {
            return apply_keys(j, std::move(base));
        }
        catch (const json::exception &e)
        {
            throw std::invalid_argument(std::string("configuration value has the wrong type: ") + e.what());
        }
    }

    SystemConfig load_config(const std::filesystem::path &path, SystemConfig base)
    {
        std::ifstream in(path);
        if (!in)
            throw std::invalid_argument("cannot open configuration file " + path.string());
        json j;
        try
        {
            in >> j;
        }
        catch (const json::parse_error &e)
        {
            throw std::invalid_argument("malformed configuration file " + path.string() + ": " + e.what());
        }
        return config_from_json(j, std::move(base));
    }

    void apply_override(SystemConfig &cfg, std::string_view assignment)
    {
        const auto eq = assignment.find('=');
        if (eq == std::string_view::npos || eq == 0)
            throw std::invalid_argument("override must look like key=value, got '" + std::string(assignment) + "'");

        const std::string key(assignment.substr(0, eq));
        const std::string text(assignment.substr(eq + 1));
        json value = json::parse(text, nullptr, false);
        if (value.is_discarded())
            value = text;
        cfg = config_from_json(json{{key, value}}, cfg);
    }
}
