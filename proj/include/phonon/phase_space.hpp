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
/// Discrete (v, ω) phase space for the plane-symmetric linearized phonon
/// transport equation: the material model (per-bin C_ω, τ, ‖v_g‖, Kn), the
/// velocity quadrature on [-1, 1], sampled phase-space slices, the
/// normalized bracket average and the rank-one collision projection.

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <vector>

namespace phonon {

/// Raw per-bin tables. This is the canonical input form; closed-form
/// presets are expanded into it before a MaterialModel is built.
struct MaterialTables {
    std::vector<double> omega;
    /// Either one shared width or one width per bin.
    std::vector<double> bin_width{1.0};
    std::vector<double> c_omega;
    std::vector<double> tau;
    std::vector<double> vg;
    double domain_length = 1.0;
    /// Extra attenuation per bin; empty means zero everywhere.
    std::vector<double> alpha0;
};

struct MaterialModel {
    std::vector<double> omega_bins;
    std::vector<double> bin_width;
    std::vector<double> c_omega;
    std::vector<double> tau;
    std::vector<double> vg;
    double domain_length = 1.0;
    std::vector<double> kn;
    /// w_k ∝ (C_ω/τ)Δω, normalized to unit sum.
    std::vector<double> measure_weights;
    double kn_avg = 0.0;
    std::vector<double> alpha0;

    std::size_t bins() const noexcept { return omega_bins.size(); }
    double kn_sq_avg() const;
    double alpha0_avg() const;
    /// (1/3)⟨Kn²⟩/⟨Kn⟩², the coefficient of ∂xxρ in the limit equation.
    double diffusion_coefficient() const;
};

MaterialModel build_material(const MaterialTables& tables);

/// Single-frequency material with τ = ‖v_g‖ = C_ω = 1 and L = 1/kn.
MaterialTables single_frequency_tables(double kn);

/// Where the six Δω = 0.4 frequency values of the multi-frequency preset
/// sit. The interval [0.4, 2.4] holds six equispaced grid points, while six
/// bins of width 0.4 starting at 0.4 have centers 0.6 ... 2.6.
enum class FrequencyLayout { GridPoints, BinCenters };

/// Multi-frequency preset: C_ω = x²eˣ/(eˣ-1)² with x = 10ω, τ = 1/(10ω),
/// ‖v_g‖ = 10ω (so Kn is ω-uniform), L = 1/kn.
MaterialTables multi_frequency_tables(double kn,
                                      FrequencyLayout layout = FrequencyLayout::GridPoints);

/// η(ω) = 1/2 + (tanh(10(ω-1.5)) - tanh(2(ω-1)))/4.
double tanh_reflection(double omega);

/// Returns a copy with the domain length rescaled so that ⟨Kn⟩ = kn_avg.
MaterialModel with_kn_avg(const MaterialModel& m, double kn_avg);

/// Symmetric velocity quadrature. Nodes on (0, 1] are mirrored to [-1, 0);
/// no node sits at v = 0.
class VelocityGrid {
public:
    /// Gauss–Legendre with n nodes per half.
    static VelocityGrid gauss_legendre(std::size_t nodes_per_half = 32);
    /// Midpoint rule with n uniform cells per half (cell width 1/n).
    static VelocityGrid midpoint(std::size_t cells_per_half);

    std::size_t half_size() const noexcept { return positive_nodes_.size(); }
    std::size_t size() const noexcept { return 2 * positive_nodes_.size(); }

    /// Weights for ∫₀¹ · dv (sum to 1).
    const std::vector<double>& positive_nodes() const noexcept { return positive_nodes_; }
    const std::vector<double>& positive_weights() const noexcept { return positive_weights_; }

    /// Full grid ordered -v_{n-1} ... -v_0, v_0 ... v_{n-1}; weights are those
    /// of the normalized measure dv/2 and sum to 1.
    const std::vector<double>& full_nodes() const noexcept { return full_nodes_; }
    const std::vector<double>& full_weights() const noexcept { return full_weights_; }

    std::size_t positive_index(std::size_t j) const noexcept { return half_size() + j; }
    std::size_t negative_index(std::size_t j) const noexcept { return half_size() - 1 - j; }
    /// Index of -v for the full-grid index i.
    std::size_t mirror(std::size_t i) const noexcept { return size() - 1 - i; }

private:
    VelocityGrid(std::vector<double> nodes, std::vector<double> weights);

    std::vector<double> positive_nodes_;
    std::vector<double> positive_weights_;
    std::vector<double> full_nodes_;
    std::vector<double> full_weights_;
};

/// A function sampled on (full velocity grid) × (frequency bins).
struct PhaseSlice {
    Eigen::MatrixXd values;

    PhaseSlice() = default;
    PhaseSlice(Eigen::Index velocity_nodes, Eigen::Index bins, double fill = 0.0)
        : values(Eigen::MatrixXd::Constant(velocity_nodes, bins, fill)) {}
    explicit PhaseSlice(Eigen::MatrixXd v) : values(std::move(v)) {}

    double operator()(Eigen::Index j, Eigen::Index k) const { return values(j, k); }
    double& operator()(Eigen::Index j, Eigen::Index k) { return values(j, k); }
};

/// Throws ShapeMismatch unless g is (grid.size() x m.bins()).
void check_shape(const PhaseSlice& g, const MaterialModel& m, const VelocityGrid& grid);

using PhaseFunction = std::function<double(double v, std::size_t bin)>;

PhaseSlice sample(const VelocityGrid& grid, const MaterialModel& m, const PhaseFunction& f);

/// ∬ g (C_ω/τ)/C_τ dω dv with the normalized discrete measure.
double bracket(const PhaseSlice& g, const MaterialModel& m, const VelocityGrid& grid);

/// As bracket, restricted to v > 0.
double bracket_positive(const PhaseSlice& g, const MaterialModel& m, const VelocityGrid& grid);

/// L g = ⟨g⟩, returned as a constant slice.
PhaseSlice collide(const PhaseSlice& g, const MaterialModel& m, const VelocityGrid& grid);

} // namespace phonon
