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

#include "phonon/kinetic.hpp"

#include "phonon/errors.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>

namespace phonon {

namespace {

void check_inputs(const PhaseSlice& phi, const std::vector<double>& eta, const MaterialModel& m,
                  const KineticGrid& grid, const VelocityGrid& vg) {
    if (grid.nx < 1 || grid.nv < 2 || grid.nv % 2 != 0)
        throw ConfigurationError("kinetic grid needs nx >= 1 and an even nv >= 2");
    check_shape(phi, m, vg);
    if (!phi.values.allFinite()) throw ConfigurationError("boundary data is not finite");
    if (eta.size() != m.bins())
        throw ShapeMismatch("reflection coefficient has " + std::to_string(eta.size()) +
                            " entries for " + std::to_string(m.bins()) + " bins");
    for (double e : eta)
        if (!(e >= 0.0 && e <= 1.0))
            throw ConfigurationError("reflection coefficient must lie in [0, 1]");
    for (double k : m.kn)
        if (!(k > 0.0)) throw InvalidMaterial("Kn must be positive");
}

// Range of T allowed by the maximum principle of the upwind scheme.
bool in_bounds(const std::vector<double>& t, const PhaseSlice& phi, const VelocityGrid& vg) {
    const auto nh = static_cast<Eigen::Index>(vg.half_size());
    const double lo = std::min(0.0, phi.values.bottomRows(nh).minCoeff());
    const double hi = std::max(0.0, phi.values.bottomRows(nh).maxCoeff());
    const double slack = 1e-12 * std::max(1.0, hi - lo);
    return std::all_of(t.begin(), t.end(),
                       [&](double x) { return x >= lo - slack && x <= hi + slack; });
}

} // namespace

std::vector<double> KineticGrid::centers() const {
    std::vector<double> c(nx);
    for (std::size_t i = 0; i < nx; ++i) c[i] = (static_cast<double>(i) + 0.5) * dx();
    return c;
}

VelocityGrid KineticGrid::velocity() const { return VelocityGrid::midpoint(nv / 2); }

KineticGrid uniform_kinetic_grid(unsigned level) {
    const std::size_t n = std::size_t{1} << level;
    return {n, 2 * n};
}

PhaseSlice KineticField::cell(std::size_t i) const {
    PhaseSlice s(static_cast<Eigen::Index>(nv), static_cast<Eigen::Index>(bins));
    for (std::size_t k = 0; k < bins; ++k)
        for (std::size_t j = 0; j < nv; ++j)
            s(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)) = (*this)(i, j, k);
    return s;
}

std::vector<double> temperature(const KineticField& f, const MaterialModel& m,
                                const VelocityGrid& grid) {
    std::vector<double> t(f.nx, 0.0);
    const auto& wv = grid.full_weights();
    for (std::size_t i = 0; i < f.nx; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < f.bins; ++k) {
            double sk = 0.0;
            for (std::size_t j = 0; j < f.nv; ++j) sk += wv[j] * f(i, j, k);
            s += m.measure_weights[k] * sk;
        }
        t[i] = s;
    }
    return t;
}

KineticSolution solve_steady(const PhaseSlice& phi, const std::vector<double>& eta,
                             const MaterialModel& m, const KineticGrid& grid,
                             const KineticOptions& opt) {
    const VelocityGrid vg = grid.velocity();
    check_inputs(phi, eta, m, grid, vg);
    if (!(opt.tol > 0.0)) throw ConfigurationError("kinetic tolerance must be positive");

    const std::size_t nx = grid.nx, nv = grid.nv, nh = nv / 2, nb = m.bins();
    const double dx = grid.dx();
    const auto& nodes = vg.full_nodes();
    const auto& wv = vg.full_weights();

    KineticSolution out;
    out.field = {nx, nv, nb, std::vector<double>(nx * nv * nb, 0.0)};
    std::vector<double>& f = out.field.values;
    std::vector<double> t(nx, 0.0), t_new(nx);
    double first = -1.0;

    for (std::size_t it = 1; it <= opt.max_iter; ++it) {
        std::fill(t_new.begin(), t_new.end(), 0.0);
        for (std::size_t k = 0; k < nb; ++k) {
            const double s = 1.0 / m.kn[k];
            const double wk = m.measure_weights[k];
            for (std::size_t jp = 0; jp < nh; ++jp) {
                const std::size_t j = vg.positive_index(jp);
                const double a = nodes[j] / dx, inv = 1.0 / (a + s), w = wk * wv[j];
                double prev = phi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
                for (std::size_t i = 0; i < nx; ++i) {
                    prev = (a * prev + s * t[i]) * inv;
                    f[(i * nb + k) * nv + j] = prev;
                    t_new[i] += w * prev;
                }
                // Reflected inflow from the freshest outgoing trace.
                const std::size_t jn = vg.mirror(j);
                const double w_n = wk * wv[jn];
                double prev_n = eta[k] * prev;
                for (std::size_t i = nx; i-- > 0;) {
                    prev_n = (a * prev_n + s * t[i]) * inv;
                    f[(i * nb + k) * nv + jn] = prev_n;
                    t_new[i] += w_n * prev_n;
                }
            }
        }
        double res = 0.0;
        for (std::size_t i = 0; i < nx; ++i) res = std::max(res, std::abs(t_new[i] - t[i]));
        t.swap(t_new);
        out.iterations = it;
        out.residual = res;
        if (!std::isfinite(res) || (first > 0.0 && res > 1e6 * first))
            throw ConvergenceError("source iteration diverged", res);
        if (first < 0.0) first = std::max(res, std::numeric_limits<double>::min());
        if (res < opt.tol) {
            out.temperature = t;
            out.within_bounds = in_bounds(t, phi, vg);
            return out;
        }
    }
    throw ConvergenceError("source iteration did not reach tolerance in " +
                               std::to_string(opt.max_iter) + " sweeps",
                           out.residual);
}

KineticSolution solve_direct(const PhaseSlice& phi, const std::vector<double>& eta,
                             const MaterialModel& m, const KineticGrid& grid) {
    const VelocityGrid vg = grid.velocity();
    check_inputs(phi, eta, m, grid, vg);
    const std::size_t nx = grid.nx, nv = grid.nv, nb = m.bins();
    const double dx = grid.dx();
    const auto& nodes = vg.full_nodes();
    const auto& wv = vg.full_weights();
    const std::size_t nf = nx * nv * nb;
    const auto idx = [&](std::size_t i, std::size_t j, std::size_t k) {
        return static_cast<Eigen::Index>((i * nb + k) * nv + j);
    };
    const auto tidx = [&](std::size_t i) { return static_cast<Eigen::Index>(nf + i); };

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(4 * nf + nx * (nv * nb + 1));
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nf + nx));
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t k = 0; k < nb; ++k) {
            const double s = 1.0 / m.kn[k];
            for (std::size_t j = 0; j < nv; ++j) {
                const auto r = idx(i, j, k);
                const double a = std::abs(nodes[j]) / dx;
                trip.emplace_back(r, r, a + s);
                trip.emplace_back(r, tidx(i), -s);
                if (nodes[j] > 0.0) {
                    if (i > 0) trip.emplace_back(r, idx(i - 1, j, k), -a);
                    else rhs(r) += a * phi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
                } else if (i + 1 < nx) {
                    trip.emplace_back(r, idx(i + 1, j, k), -a);
                } else {
                    trip.emplace_back(r, idx(nx - 1, vg.mirror(j), k), -a * eta[k]);
                }
            }
        }
        trip.emplace_back(tidx(i), tidx(i), 1.0);
        for (std::size_t k = 0; k < nb; ++k)
            for (std::size_t j = 0; j < nv; ++j)
                trip.emplace_back(tidx(i), idx(i, j, k), -wv[j] * m.measure_weights[k]);
    }
    const auto n = static_cast<Eigen::Index>(nf + nx);
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(trip.begin(), trip.end());
    a.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw ConfigurationError("kinetic system is singular");
    const Eigen::VectorXd x = lu.solve(rhs);

    KineticSolution out;
    out.field = {nx, nv, nb, std::vector<double>(x.data(), x.data() + nf)};
    out.temperature.assign(x.data() + nf, x.data() + nf + nx);
    out.residual = (a * x - rhs).cwiseAbs().maxCoeff();
    out.within_bounds = in_bounds(out.temperature, phi, vg);
    return out;
}

std::vector<double> face_flux(const KineticField& f, const PhaseSlice& phi,
                              const std::vector<double>& eta, const MaterialModel& m,
                              const VelocityGrid& grid) {
    const std::size_t nx = f.nx, nv = f.nv;
    const auto& nodes = grid.full_nodes();
    const auto& wv = grid.full_weights();
    std::vector<double> flux(nx + 1, 0.0);
    for (std::size_t face = 0; face <= nx; ++face) {
        double s = 0.0;
        for (std::size_t k = 0; k < f.bins; ++k) {
            double sk = 0.0;
            for (std::size_t j = 0; j < nv; ++j) {
                const double v = nodes[j];
                double up;
                if (v > 0.0)
                    up = face == 0 ? phi(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k))
                                   : f(face - 1, j, k);
                else
                    up = face == nx ? eta[k] * f(nx - 1, grid.mirror(j), k) : f(face, j, k);
                sk += wv[j] * v * up;
            }
            s += m.measure_weights[k] * m.kn[k] * sk;
        }
        flux[face] = s;
    }
    return flux;
}

} // namespace phonon
