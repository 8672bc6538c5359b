// Copyright 2026 The phonon-robin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied. See the License for the specific language governing
// permissions and limitations under the License.

#pragma once

/// @file
/// JSON experiment files and the two built-in examples. The schema is
/// documented in README.md; unknown keys are rejected.

#include "phonon/harness.hpp"

#include <json.hpp>

#include <string>

namespace phonon {

MaterialTables material_from_json(const nlohmann::json& j);

/// "v", "v2", or {"table": {"v": [...], "value": [...]}} interpolated
/// linearly in v (clamped at the ends).
PhaseFunction phi_from_json(const nlohmann::json& j, std::string& name);

/// A number, a per-bin array, or "tanh" for η(ω) = tanh_reflection(ω).
std::vector<double> eta_from_json(const nlohmann::json& j, const MaterialTables& material);

ExperimentConfig experiment_from_json(const nlohmann::json& j);
ExperimentConfig load_experiment(const std::string& path);

/// Single frequency, η = 0.5, φ ∈ {"v", "v2"}.
ExperimentConfig example1_config(const std::string& phi = "v");
/// Six bins, tanh η, φ ∈ {"v", "v2"}.
ExperimentConfig example2_config(const std::string& phi = "v",
                                 FrequencyLayout layout = FrequencyLayout::GridPoints);

} // namespace phonon
