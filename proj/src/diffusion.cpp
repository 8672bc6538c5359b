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

#include "phonon/diffusion.hpp"

#include "phonon/errors.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>

namespace phonon {

DiffusionConfig diffusion_config(const MaterialModel& m, const RobinCoefficients& b,
                                 std::size_t nx) {
    return {nx, b, m.alpha0_avg(), m.diffusion_coefficient()};
}

DensityProfile solve_robin(const DiffusionConfig& cfg) {
    if (cfg.nx < 4) throw ConfigurationError("diffusion grid needs at least 4 cells");
    validate(cfg.coeffs);
    if (!(cfg.diff_coeff > 0.0)) throw ConfigurationError("diffusion coefficient must be positive");
    const auto n = static_cast<Eigen::Index>(cfg.nx);
    const double dx = 1.0 / static_cast<double>(cfg.nx);
    const RobinCoefficients& b = cfg.coeffs;

    std::vector<Eigen::Triplet<double>> t;
    t.reserve(3 * static_cast<std::size_t>(n + 1));
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    t.emplace_back(0, 0, b.b1 + b.b2 / dx);
    t.emplace_back(0, 1, -b.b2 / dx);
    rhs(0) = b.b0;
    for (Eigen::Index i = 1; i < n; ++i) {
        t.emplace_back(i, i - 1, cfg.diff_coeff);
        t.emplace_back(i, i, -2.0 * cfg.diff_coeff + cfg.alpha0_avg * dx * dx);
        t.emplace_back(i, i + 1, cfg.diff_coeff);
    }
    t.emplace_back(n, n - 1, -b.b4 / dx);
    t.emplace_back(n, n, b.b3 + b.b4 / dx);
    Eigen::SparseMatrix<double> a(n + 1, n + 1);
    a.setFromTriplets(t.begin(), t.end());
    a.makeCompressed();

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success)
        throw ConfigurationError("limit equation system is singular for the given Robin pair");
    const Eigen::VectorXd rho = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !rho.allFinite())
        throw ConfigurationError("limit equation solve failed");

    DensityProfile out;
    out.x.resize(cfg.nx + 1);
    out.rho.assign(rho.data(), rho.data() + rho.size());
    for (std::size_t i = 0; i <= cfg.nx; ++i) out.x[i] = static_cast<double>(i) * dx;
    out.residual = (a * rho - rhs).cwiseAbs().maxCoeff();
    if (!(out.residual <= 1e-12 * std::max(1.0, rhs.cwiseAbs().maxCoeff())))
        throw ConfigurationError("limit equation residual too large; system is ill conditioned");
    return out;
}

std::vector<double> gradient(const DensityProfile& p) {
    const std::size_t n = p.rho.size();
    if (n < 3) throw ShapeMismatch("profile needs at least three nodes");
    const double dx = p.dx();
    std::vector<double> g(n);
    g[0] = (p.rho[1] - p.rho[0]) / dx;
    g[n - 1] = (p.rho[n - 1] - p.rho[n - 2]) / dx;
    for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (p.rho[i + 1] - p.rho[i - 1]) / (2.0 * dx);
    return g;
}

std::vector<PhaseSlice> interior_distribution(const DensityProfile& p, const MaterialModel& m,
                                              const VelocityGrid& grid) {
    const std::vector<double> g = gradient(p);
    std::vector<PhaseSlice> out;
    out.reserve(p.rho.size());
    for (std::size_t i = 0; i < p.rho.size(); ++i)
        out.push_back(sample(grid, m, [&](double v, std::size_t k) {
            return p.rho[i] - v * m.kn[k] * g[i];
        }));
    return out;
}

PhaseSlice left_layer(const LeftLayers& l, double rho0, double drho0, double z,
                      const EvenOddBasis& b) {
    PhaseSlice f = evaluate(l.phi, z, b);
    f.values += -rho0 * evaluate(l.one, z, b).values + drho0 * evaluate(l.gradient, z, b).values;
    return f;
}

PhaseSlice right_layer(const RightLayers& r, double rho1, double drho1, double z,
                       const EvenOddBasis& b) {
    const Eigen::MatrixXd layer =
        rho1 * evaluate(r.value, z, b).values + drho1 * evaluate(r.gradient, z, b).values;
    PhaseSlice f(layer.rows(), layer.cols());
    for (Eigen::Index i = 0; i < layer.rows(); ++i)
        f.values.row(static_cast<Eigen::Index>(b.grid.mirror(static_cast<std::size_t>(i)))) = layer.row(i);
    return f;
}

std::vector<PhaseSlice> compose_approximation(const DensityProfile& p, const LeftLayers& left,
                                              const RightLayers& right,
                                              const HalfSpaceSolver& solver) {
    const EvenOddBasis& b = solver.basis();
    const MaterialModel& m = b.material;
    const std::vector<double> g = gradient(p);
    std::vector<PhaseSlice> out = interior_distribution(p, m, b.grid);
    const double rho0 = p.rho.front(), rho1 = p.rho.back();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double x = p.x[i];
        out[i].values += left_layer(left, rho0, g.front(), x / m.kn_avg, b).values;
        out[i].values += right_layer(right, rho1, g.back(), (1.0 - x) / m.kn_avg, b).values;
    }
    return out;
}

} // namespace phonon
