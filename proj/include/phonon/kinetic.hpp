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
/// Reference solver for the slab problem
///
///   v ∂ₓf = (⟨f⟩ - f)/Kn(ω),   x ∈ [0, 1]
///   f(0, v > 0, ω) = φ(v, ω),   f(1, v < 0, ω) = η(ω) f(1, -v, ω)
///
/// First-order upwind finite volumes in x, midpoint cells in v, source
/// iteration on T = ⟨f⟩. A direct sparse solve of the same discrete system
/// is kept for small grids.

#include "phonon/phase_space.hpp"

#include <cstddef>
#include <vector>

namespace phonon {

struct KineticGrid {
    std::size_t nx = 512;
    /// Velocity cells over [-1, 1]; must be even.
    std::size_t nv = 1024;

    double dx() const { return 1.0 / static_cast<double>(nx); }
    double dv() const { return 2.0 / static_cast<double>(nv); }
    /// Cell centers (i + ½)dx.
    std::vector<double> centers() const;
    VelocityGrid velocity() const;
};

/// Paper resolution Δx = Δv = 2^-level.
KineticGrid uniform_kinetic_grid(unsigned level);

struct KineticOptions {
    double tol = 1e-10;
    std::size_t max_iter = 100000;
};

struct KineticField {
    std::size_t nx = 0, nv = 0, bins = 0;
    /// f(i, j, k) at values[(i * bins + k) * nv + j].
    std::vector<double> values;

    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return values[(i * bins + k) * nv + j];
    }
    /// Cell i as a (velocity × bin) slice.
    PhaseSlice cell(std::size_t i) const;
};

struct KineticSolution {
    KineticField field;
    /// T at cell centers.
    std::vector<double> temperature;
    std::size_t iterations = 0;
    double residual = 0.0;
    /// T stayed inside the range spanned by the data and zero.
    bool within_bounds = true;
};

/// φ is sampled on grid.velocity(); rows with v < 0 are ignored.
KineticSolution solve_steady(const PhaseSlice& phi, const std::vector<double>& eta,
                             const MaterialModel& m, const KineticGrid& grid,
                             const KineticOptions& opt = {});

/// Same discretization assembled into one sparse system (f and T unknowns).
KineticSolution solve_direct(const PhaseSlice& phi, const std::vector<double>& eta,
                             const MaterialModel& m, const KineticGrid& grid);

/// T_i = ⟨f(x_i, ·, ·)⟩.
std::vector<double> temperature(const KineticField& f, const MaterialModel& m,
                                const VelocityGrid& grid);

/// Cellwise ⟨v Kn f⟩ (upwind face flux) at the nx + 1 cell faces.
std::vector<double> face_flux(const KineticField& f, const PhaseSlice& phi,
                              const std::vector<double>& eta, const MaterialModel& m,
                              const VelocityGrid& grid);

} // namespace phonon
