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
#include <string_view>

#include "json.hpp"

#include "cfisac/model.hpp"

namespace cfisac
{
    using json = nlohmann::json;

    json to_json(const SystemConfig &cfg);

    /**
     * Applies the keys present in `j` on top of `base`. Unknown keys are rejected.
     * Pm, sigma_k2 and sigma_mn2 accept a scalar, which is broadcast to the configured dimensions.
     */
    SystemConfig config_from_json(const json &j, SystemConfig base = default_config());

    SystemConfig load_config(const std::filesystem::path &path, SystemConfig base = default_config());

    /// "key=value" with a JSON-typed value; bare words are taken as strings.
    void apply_override(SystemConfig &cfg, std::string_view assignment);
}
