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
/// Limit equation D ρ'' + ⟨α₀⟩ρ = 0 on [0, 1] with the Robin pair from
/// robin.hpp, discretized on nodes x_i = i/nx:
///
///   D(ρ_{i+1} - 2ρ_i + ρ_{i-1}) + ⟨α₀⟩dx²ρ_i = 0,   0 < i < nx
///   b₁ρ₀ - b₂(ρ₁ - ρ₀)/dx = b₀
///   b₃ρ_nx + b₄(ρ_nx - ρ_{nx-1})/dx = 0
///
/// plus reconstruction of the kinetic approximation from ρ and the layers.

#include "phonon/robin.hpp"

#include <cstddef>
#include <vector>

namespace phonon {

struct DiffusionConfig {
    std::size_t nx = 512;
    RobinCoefficients coeffs;
    double alpha0_avg = 0.0;
    double diff_coeff = 1.0 / 3.0;
};

/// D and ⟨α₀⟩ taken from the material.
DiffusionConfig diffusion_config(const MaterialModel& m, const RobinCoefficients& b,
                                 std::size_t nx);

struct DensityProfile {
    std::vector<double> x;
    std::vector<double> rho;
    /// Max-norm residual of the discrete system.
    double residual = 0.0;

    double dx() const { return x.size() > 1 ? x[1] - x[0] : 0.0; }
};

DensityProfile solve_robin(const DiffusionConfig& cfg);

/// ∂ₓρ at every node: centered inside, one-sided at the ends as in the
/// boundary rows.
std::vector<double> gradient(const DensityProfile& rho);

/// f^in(x_i) = ρ(x_i) - v Kn(ω) ∂ₓρ(x_i).
std::vector<PhaseSlice> interior_distribution(const DensityProfile& rho, const MaterialModel& m,
                                              const VelocityGrid& grid);

/// f^A(x_i) = f^in + f^L(x/⟨Kn⟩) + f^R((1-x)/⟨Kn⟩, -v) with
/// f^L = f₀ - ρ(0)f₁ + ∂ₓρ(0)f₂ and f^R = ρ(1)f₃ + ∂ₓρ(1)f₄.
std::vector<PhaseSlice> compose_approximation(const DensityProfile& rho, const LeftLayers& left,
                                              const RightLayers& right,
                                              const HalfSpaceSolver& solver);

/// Left layer sum f^L at depth z (in ⟨Kn⟩ units).
PhaseSlice left_layer(const LeftLayers& left, double rho0, double drho0, double z,
                      const EvenOddBasis& basis);

/// Right layer sum f^R at depth z, returned in the x-frame velocity (v → -v).
PhaseSlice right_layer(const RightLayers& right, double rho1, double drho1, double z,
                       const EvenOddBasis& basis);

} // namespace phonon
