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

#include "phonon/robin.hpp"

#include "phonon/errors.hpp"

#include <cmath>
#include <cstdio>

namespace phonon {

PhaseSlice knudsen_velocity(const MaterialModel& m, const VelocityGrid& grid) {
    return sample(grid, m, [&](double v, std::size_t k) { return v * m.kn[k]; });
}

std::vector<double> expand_eta(const std::vector<double>& eta, std::size_t bins) {
    if (eta.size() == 1) return std::vector<double>(bins, eta[0]);
    if (eta.size() != bins)
        throw ShapeMismatch("reflection coefficient has " + std::to_string(eta.size()) +
                            " entries for " + std::to_string(bins) + " bins");
    return eta;
}

LeftLayers compute_left(const PhaseSlice& phi, const HalfSpaceSolver& solver) {
    const EvenOddBasis& b = solver.basis();
    const PhaseSlice ones(static_cast<Eigen::Index>(b.grid.size()),
                          static_cast<Eigen::Index>(b.bins()), 1.0);
    LeftLayers out;
    out.phi = solver.solve(DirichletBC{phi});
    out.one = solver.solve(DirichletBC{ones});
    out.gradient = solver.solve(DirichletBC{knudsen_velocity(b.material, b.grid)});
    out.b0 = out.phi.theta_inf;
    out.b1 = out.one.theta_inf;
    out.b2 = out.gradient.theta_inf;
    return out;
}

RightLayers compute_right(const std::vector<double>& eta_in, const HalfSpaceSolver& solver) {
    const EvenOddBasis& b = solver.basis();
    const std::vector<double> eta = expand_eta(eta_in, b.bins());
    bool all_one = true;
    for (double e : eta) all_one = all_one && e == 1.0;
    if (all_one)
        throw DegenerateRecovery(
            "η ≡ 1 (pure reflection) leaves only a zero-flux condition at the right wall; the "
            "Robin pair (b3, b4) is undefined for this case");

    const PhaseSlice kv = knudsen_velocity(b.material, b.grid);
    PhaseSlice psi3(kv.values.rows(), kv.values.cols());
    PhaseSlice psi4 = kv;
    for (std::size_t k = 0; k < b.bins(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        psi3.values.col(kk).setConstant(-(1.0 - eta[k]));
        psi4.values.col(kk) *= -(1.0 + eta[k]);
    }
    RightLayers out;
    out.value = solver.solve(ReflectiveBC{eta, psi3});
    out.gradient = solver.solve(ReflectiveBC{eta, psi4});
    out.b3 = out.value.theta_inf;
    out.b4 = out.gradient.theta_inf;
    return out;
}

LeftLayers compute_left(const PhaseSlice& phi, const MaterialModel& m, const VelocityGrid& grid,
                        std::size_t n_poly, double damping) {
    return compute_left(phi, HalfSpaceSolver(m, grid, n_poly, damping));
}

RightLayers compute_right(const std::vector<double>& eta, const MaterialModel& m,
                          const VelocityGrid& grid, std::size_t n_poly, double damping) {
    return compute_right(eta, HalfSpaceSolver(m, grid, n_poly, damping));
}

RobinCoefficients compute_robin(const PhaseSlice& phi, const std::vector<double>& eta,
                                const MaterialModel& m, const VelocityGrid& grid,
                                std::size_t n_poly, double damping) {
    const HalfSpaceSolver solver(m, grid, n_poly, damping);
    const LeftLayers l = compute_left(phi, solver);
    const RightLayers r = compute_right(eta, solver);
    RobinCoefficients b{l.b0, l.b1, l.b2, r.b3, r.b4};
    validate(b);
    return b;
}

void validate(const RobinCoefficients& b) {
    for (double x : {b.b0, b.b1, b.b2, b.b3, b.b4})
        if (!std::isfinite(x)) throw ConfigurationError("Robin coefficient is not finite");
    if (b.b1 == 0.0 && b.b2 == 0.0)
        throw ConfigurationError("left Robin pair (b1, b2) is zero");
    if (b.b3 == 0.0 && b.b4 == 0.0)
        throw ConfigurationError("right Robin pair (b3, b4) is zero");
}

std::string to_json(const RobinCoefficients& b) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "{\"b0\": %.17g, \"b1\": %.17g, \"b2\": %.17g, \"b3\": %.17g, \"b4\": %.17g}",
                  b.b0, b.b1, b.b2, b.b3, b.b4);
    return buf;
}

} // namespace phonon
