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
/// End-to-end convergence runs: for each Kn, the reference temperature from
/// the kinetic solver, the Robin (or Dirichlet) limit, and the interior
/// error; then a log-log rate fit over the Kn sweep.

#include "phonon/diffusion.hpp"
#include "phonon/kinetic.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace phonon {

/// How the boundary conditions of the limit equation are formed.
///  Robin          b₁ρ(0) - b₂ρ'(0) = b₀,  b₃ρ(1) + b₄ρ'(1) = 0
///  Dirichlet      ρ(0) = b₀/b₁,            right side as Robin
///  DirichletBoth  ρ(0) = b₀/b₁,            b₃ρ(1) = 0
enum class LimitMode { Robin, Dirichlet, DirichletBoth };

const char* to_string(LimitMode mode);
LimitMode parse_limit_mode(const std::string& s);

/// Coefficients actually used by the limit solve in a given mode.
RobinCoefficients limit_coefficients(const RobinCoefficients& b, LimitMode mode);

struct ExperimentConfig {
    std::string example = "example1";
    /// Material at any Kn; rescaled per sweep point so that ⟨Kn⟩ = kn.
    MaterialTables material = single_frequency_tables(1.0);
    std::string phi_name = "v";
    PhaseFunction phi = [](double v, std::size_t) { return v; };
    /// One value or one per bin.
    std::vector<double> eta{0.5};
    std::vector<double> kn{0.25, 0.125, 0.0625};
    std::size_t n_poly = 16;
    double damping = 0.01;
    std::size_t velocity_nodes = 32;
    KineticGrid kinetic{512, 1024};
    KineticOptions kinetic_options;
    /// Direct sparse reference instead of source iteration (small grids).
    bool direct_reference = false;
    std::vector<LimitMode> modes{LimitMode::Robin, LimitMode::Dirichlet};
    /// Empty: nothing is written.
    std::string output_dir;
    std::size_t workers = 1;
};

/// Throws ConfigurationError on an empty, non-positive or non-decreasing
/// Kn list and other invalid fields.
void validate(const ExperimentConfig& cfg);

/// Cell-centered values linearly interpolated to the nodes i/nx; the two
/// end nodes take the nearest cell value.
std::vector<double> cell_to_nodes(const std::vector<double>& cells);

/// sqrt(Σ_{i=⌊nx/4⌋}^{⌊3nx/4⌋} (ρ_i - T_i)²) over nodal arrays of length nx + 1.
double error_metric(const std::vector<double>& rho, const std::vector<double>& t_nodes);

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// RMS of the log-space residuals.
    double residual = 0.0;
};

/// Least-squares fit of log(error) against log(kn).
RateFit fit_rate(const std::vector<double>& kn, const std::vector<double>& error);

struct ModeResult {
    double error = 0.0;
    std::vector<double> rho;
};

struct KnPoint {
    double kn = 0.0;
    RobinCoefficients coeffs;
    std::size_t iterations = 0;
    double kinetic_residual = 0.0;
    bool within_bounds = true;
    std::vector<double> t_nodes;
    std::map<LimitMode, ModeResult> modes;
    std::vector<std::string> warnings;
    /// Set when any stage failed for this Kn; other fields are then partial.
    std::optional<std::string> failure;
    double seconds = 0.0;
};

struct ConvergenceRecord {
    ExperimentConfig config;
    std::vector<KnPoint> points;
    /// Present when every point succeeded for that mode.
    std::map<LimitMode, RateFit> rates;
};

/// Runs one Kn point; failures are captured in the returned record.
KnPoint run_point(const ExperimentConfig& cfg, double kn);

/// Runs the sweep on a bounded worker pool and writes errors.csv,
/// profiles.csv and summary.json when an output directory is set.
ConvergenceRecord run_experiment(const ExperimentConfig& cfg);

void write_outputs(const ConvergenceRecord& rec, const std::string& dir);

} // namespace phonon
