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
/// Half-space boundary-layer solver.
///
/// The layer equation v ∂_z f = (⟨Kn⟩/Kn)(L f - f) on z ∈ [0, ∞) is solved
/// by damping-recovering: the damped equation v ∂_z f̃ = (⟨Kn⟩/Kn) L_d f̃ has
/// a zero far field for any incoming data, and the undamped far field θ∞ is
/// recovered from two damped solves (data ψ and data 1, or source 1-η for
/// the reflective wall) as a flux ratio.
///
/// Velocity dependence is expanded in an even/odd weighted Legendre basis
/// (N even and N+1 odd functions per frequency bin), which turns the PDE
/// into the ODE system A c' = B c. The decaying solutions are selected with
/// the generalized eigenvectors of (A, B).
///
/// Coefficient layout: c = (c^O, c^E). Odd coefficients come first, bin
/// major (N+1 per bin), then even ones (N per bin). Rows of A and B are
/// ordered as test functions: even tests first, then odd tests, so that
/// A = diag(M, Mᵀ) and B = [[0, B^E], [B^O, 0]].

#include "phonon/phase_space.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace phonon {

enum class Parity { Odd, Even };

struct EvenOddBasis {
    MaterialModel material;
    VelocityGrid grid;
    std::size_t n_poly = 0;
    /// l_i(v_j) on the positive nodes, i = 0..N; ∫₀¹ l_i l_j dv = δ_ij.
    Eigen::MatrixXd legendre;
    /// sqrt(2/w_k) per bin.
    std::vector<double> weight;
    /// Column a holds basis function a, flattened column-major like PhaseSlice.
    Eigen::MatrixXd samples;

    struct Label {
        Parity parity;
        std::size_t poly;
        std::size_t bin;
    };

    std::size_t bins() const noexcept { return material.bins(); }
    std::size_t odd_count() const noexcept { return (n_poly + 1) * bins(); }
    std::size_t even_count() const noexcept { return n_poly * bins(); }
    std::size_t size() const noexcept { return odd_count() + even_count(); }
    std::size_t odd_index(std::size_t bin, std::size_t i) const noexcept {
        return bin * (n_poly + 1) + i;
    }
    std::size_t even_index(std::size_t bin, std::size_t i) const noexcept {
        return odd_count() + bin * n_poly + i;
    }
    Label label(std::size_t flat) const;

    /// Samples of basis function `flat` on the full velocity grid.
    PhaseSlice function(std::size_t flat) const;
    /// Σ c_a φ_a on the full velocity grid.
    PhaseSlice synthesize(const Eigen::VectorXd& coefficients) const;
};

/// Builds the basis and certifies orthonormality; throws ConfigurationError
/// carrying the measured defect when the quadrature is too coarse.
EvenOddBasis build_basis(const MaterialModel& m, const VelocityGrid& grid, std::size_t n_poly);

/// Matrix of ½⟨φ_a φ_b⟩ over the flat basis.
Eigen::MatrixXd gram_matrix(const EvenOddBasis& basis);
double orthonormality_defect(const EvenOddBasis& basis);

/// ṽ = v Kn(ω)/⟨Kn⟩ on the grid.
PhaseSlice scaled_velocity(const MaterialModel& m, const VelocityGrid& grid);

/// L_d g = (L - I)g - α_d ṽ⟨ṽ, g⟩ - α_d q⟨q, g⟩ with q = ṽ (L - I)⁺ ṽ.
/// For the rank-one L the pseudo-inverse gives (L - I)⁺ṽ = -ṽ, so q = -ṽ².
PhaseSlice apply_damped(const PhaseSlice& g, const MaterialModel& m, const VelocityGrid& grid,
                        double damping);

struct LayerSystem {
    Eigen::MatrixXd a_matrix;
    Eigen::MatrixXd b_matrix;
    double damping = 0.0;
    std::size_t n_poly = 0;
    std::size_t bins = 0;
    /// Flat basis index of the test function of each row.
    std::vector<std::size_t> row_function;
    /// ⟨Kn⟩/Kn of each row's bin.
    Eigen::VectorXd row_scale;
};

LayerSystem assemble(const EvenOddBasis& basis, double damping);

struct ModeDecomposition {
    /// λ_k; +∞ marks the structural null vectors of A.
    Eigen::VectorXd eigenvalues;
    /// ν_k = 1/λ_k, the eigenvalues of B⁻¹A.
    Eigen::VectorXd inverse_eigenvalues;
    /// Right eigenvectors as columns (R).
    Eigen::MatrixXd eigenvectors;
    /// R⁻¹; row k maps coefficients to the amplitude of mode k.
    Eigen::MatrixXd projector;
    std::vector<std::size_t> nondecaying;
    std::vector<std::size_t> decaying;
};

/// Solves λ A v = B v. Throws NumericalStructureError on a complex
/// eigenvalue, a failed eigen-residual, or a non-decaying count other than
/// (N+1) per frequency bin.
ModeDecomposition decompose(const LayerSystem& sys);

struct DirichletBC {
    /// Incoming data; only the v > 0 rows are read.
    PhaseSlice psi;
};

struct ReflectiveBC {
    std::vector<double> eta;
    PhaseSlice psi;
};

using HalfSpaceBC = std::variant<DirichletBC, ReflectiveBC>;

struct DampedCoefficients {
    Eigen::VectorXd c;
    double residual = 0.0;
    double rcond = 0.0;
};

/// Coefficients at z = 0 of the damped solution: N incoming moment rows per
/// bin plus one zero-amplitude row per non-decaying mode.
DampedCoefficients solve_damped(const LayerSystem& sys, const ModeDecomposition& modes,
                                const EvenOddBasis& basis, const HalfSpaceBC& bc);

/// ⟨ṽ f(0)⟩ for a coefficient vector.
double boundary_flux(const EvenOddBasis& basis, const Eigen::VectorXd& c);

/// θ∞ = ⟨ṽ f̃(0)⟩ / ⟨ṽ g₀(0)⟩.
double recover_theta(const Eigen::VectorXd& f_tilde_c0, const Eigen::VectorXd& g0_c0,
                     const EvenOddBasis& basis);

struct HalfSpaceSolution {
    Eigen::VectorXd c0;
    Eigen::VectorXd g0;
    double theta_inf = 0.0;
    /// ⟨ṽ f(0)⟩ of the recovered undamped solution.
    double flux_residual = 0.0;
    double rcond = 0.0;
    std::vector<std::string> warnings;
    std::shared_ptr<const ModeDecomposition> modes;
};

/// Caches the basis, the assembled system and its modes so that several
/// boundary data can be solved against one decomposition.
class HalfSpaceSolver {
public:
    HalfSpaceSolver(const MaterialModel& m, const VelocityGrid& grid, std::size_t n_poly,
                    double damping = 0.01);

    HalfSpaceSolution solve(const HalfSpaceBC& bc) const;

    const EvenOddBasis& basis() const noexcept { return *basis_; }
    const LayerSystem& system() const noexcept { return *system_; }
    const ModeDecomposition& modes() const noexcept { return *modes_; }

private:
    std::shared_ptr<const EvenOddBasis> basis_;
    std::shared_ptr<const LayerSystem> system_;
    std::shared_ptr<const ModeDecomposition> modes_;
};

HalfSpaceSolution solve_halfspace(const HalfSpaceBC& bc, const MaterialModel& m,
                                  const VelocityGrid& grid, std::size_t n_poly,
                                  double damping = 0.01);

/// c(z) keeping only decaying modes.
Eigen::VectorXd propagate(const ModeDecomposition& modes, const Eigen::VectorXd& c0, double z);

/// Damped solution f̃(z).
PhaseSlice evaluate_damped(const HalfSpaceSolution& sol, double z, const EvenOddBasis& basis);

/// Recovered undamped solution f(z) = f̃(z) - θ∞ (g₀(z) - 1).
PhaseSlice evaluate(const HalfSpaceSolution& sol, double z, const EvenOddBasis& basis);

} // namespace phonon
