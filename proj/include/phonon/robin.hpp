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
/// Extrapolation coefficients b₀…b₄ of the Robin conditions for the limit
/// equation. Each is the far field θ∞ of one half-space problem:
///
///   left  (Dirichlet data):   ψ₀ = φ, ψ₁ = 1, ψ₂ = v Kn(ω)
///   right (reflective data):  ψ₃ = -(1-η), ψ₄ = -(1+η) v Kn(ω)
///
/// and the limit ρ satisfies
///
///   b₁ρ(0) - b₂∂ₓρ(0) = b₀,     b₃ρ(1) + b₄∂ₓρ(1) = 0.
///
/// Mind the signs: the right layer runs in z = (1-x)/⟨Kn⟩ with v → -v,
/// which flips the gradient term relative to the left.

#include "phonon/halfspace.hpp"

#include <string>
#include <vector>

namespace phonon {

struct RobinCoefficients {
    double b0 = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
    double b3 = 0.0;
    double b4 = 0.0;
};

struct LeftLayers {
    double b0 = 0.0, b1 = 0.0, b2 = 0.0;
    HalfSpaceSolution phi, one, gradient;
};

struct RightLayers {
    double b3 = 0.0, b4 = 0.0;
    HalfSpaceSolution value, gradient;
};

/// ψ₂ and ψ₄ without the reflective factor: v Kn(ω) on the grid.
PhaseSlice knudsen_velocity(const MaterialModel& m, const VelocityGrid& grid);

/// Per-bin η broadcast from one value or validated against the bin count.
std::vector<double> expand_eta(const std::vector<double>& eta, std::size_t bins);

LeftLayers compute_left(const PhaseSlice& phi, const HalfSpaceSolver& solver);
RightLayers compute_right(const std::vector<double>& eta, const HalfSpaceSolver& solver);

LeftLayers compute_left(const PhaseSlice& phi, const MaterialModel& m, const VelocityGrid& grid,
                        std::size_t n_poly, double damping = 0.01);
RightLayers compute_right(const std::vector<double>& eta, const MaterialModel& m,
                          const VelocityGrid& grid, std::size_t n_poly, double damping = 0.01);

/// All five coefficients from one shared decomposition.
RobinCoefficients compute_robin(const PhaseSlice& phi, const std::vector<double>& eta,
                                const MaterialModel& m, const VelocityGrid& grid,
                                std::size_t n_poly = 16, double damping = 0.01);

/// Throws ConfigurationError when either side has both coefficients zero.
void validate(const RobinCoefficients& b);

/// Single-line JSON record with the five named coefficients.
std::string to_json(const RobinCoefficients& b);

} // namespace phonon
