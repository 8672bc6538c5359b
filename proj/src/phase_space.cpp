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

#include "phonon/phase_space.hpp"

#include "phonon/errors.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace phonon {

namespace {

void require_positive(const std::vector<double>& v, const char* name) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
            throw InvalidMaterial(std::string(name) + "[" + std::to_string(i) +
                                  "] must be finite and positive, got " + std::to_string(v[i]));
        }
    }
}

// Gauss–Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
void gauss_legendre_ref(std::size_t n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            const double pn = n == 0 ? 1.0 : (n == 1 ? z : p1);
            const double pnm1 = n == 1 ? 1.0 : p0;
            dp = n * (z * pn - pnm1) / (z * z - 1.0);
            const double dz = pn / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

} // namespace

void check_shape(const PhaseSlice& g, const MaterialModel& m, const VelocityGrid& grid) {
    if (g.values.rows() != static_cast<Eigen::Index>(grid.size()) ||
        g.values.cols() != static_cast<Eigen::Index>(m.bins())) {
        throw ShapeMismatch("phase slice is " + std::to_string(g.values.rows()) + "x" +
                            std::to_string(g.values.cols()) + ", expected " +
                            std::to_string(grid.size()) + "x" + std::to_string(m.bins()));
    }
}

double MaterialModel::kn_sq_avg() const {
    double s = 0.0;
    for (std::size_t k = 0; k < bins(); ++k) s += measure_weights[k] * kn[k] * kn[k];
    return s;
}

double MaterialModel::alpha0_avg() const {
    double s = 0.0;
    for (std::size_t k = 0; k < bins(); ++k) s += measure_weights[k] * alpha0[k];
    return s;
}

double MaterialModel::diffusion_coefficient() const {
    return kn_sq_avg() / (3.0 * kn_avg * kn_avg);
}

MaterialModel build_material(const MaterialTables& t) {
    const std::size_t n = t.omega.size();
    if (n == 0) throw InvalidMaterial("material has no frequency bins");
    if (t.c_omega.size() != n || t.tau.size() != n || t.vg.size() != n) {
        throw InvalidMaterial("c_omega, tau and vg must all have one entry per frequency bin");
    }
    if (t.bin_width.size() != 1 && t.bin_width.size() != n) {
        throw InvalidMaterial("bin_width must have one entry or one per bin");
    }
    if (!t.alpha0.empty() && t.alpha0.size() != n) {
        throw InvalidMaterial("alpha0 must be empty or have one entry per bin");
    }
    require_positive(t.c_omega, "c_omega");
    require_positive(t.tau, "tau");
    require_positive(t.vg, "vg");
    require_positive(t.bin_width, "bin_width");
    if (!(t.domain_length > 0.0)) throw InvalidMaterial("domain_length must be positive");
    for (double a : t.alpha0) {
        if (!(a >= 0.0)) throw InvalidMaterial("alpha0 must be nonnegative");
    }

    MaterialModel m;
    m.omega_bins = t.omega;
    m.bin_width = t.bin_width.size() == 1 ? std::vector<double>(n, t.bin_width[0]) : t.bin_width;
    m.c_omega = t.c_omega;
    m.tau = t.tau;
    m.vg = t.vg;
    m.domain_length = t.domain_length;
    m.alpha0 = t.alpha0.empty() ? std::vector<double>(n, 0.0) : t.alpha0;

    m.kn.resize(n);
    m.measure_weights.resize(n);
    double total = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        m.kn[k] = m.vg[k] * m.tau[k] / m.domain_length;
        m.measure_weights[k] = m.c_omega[k] / m.tau[k] * m.bin_width[k];
        total += m.measure_weights[k];
    }
    for (double& w : m.measure_weights) w /= total;
    m.kn_avg = 0.0;
    for (std::size_t k = 0; k < n; ++k) m.kn_avg += m.measure_weights[k] * m.kn[k];
    return m;
}

MaterialTables single_frequency_tables(double kn) {
    if (!(kn > 0.0)) throw InvalidMaterial("Knudsen number must be positive");
    MaterialTables t;
    t.omega = {1.0};
    t.c_omega = {1.0};
    t.tau = {1.0};
    t.vg = {1.0};
    t.domain_length = 1.0 / kn;
    return t;
}

MaterialTables multi_frequency_tables(double kn, FrequencyLayout layout) {
    if (!(kn > 0.0)) throw InvalidMaterial("Knudsen number must be positive");
    MaterialTables t;
    const double first = layout == FrequencyLayout::GridPoints ? 0.4 : 0.6;
    for (int k = 0; k < 6; ++k) {
        const double w = first + 0.4 * k;
        const double x = 10.0 * w;
        const double em1 = std::expm1(x);
        t.omega.push_back(w);
        t.c_omega.push_back(x * x * std::exp(x) / (em1 * em1));
        t.tau.push_back(1.0 / x);
        t.vg.push_back(x);
    }
    t.bin_width = {0.4};
    t.domain_length = 1.0 / kn;
    return t;
}

double tanh_reflection(double omega) {
    return 0.5 + (std::tanh(10.0 * (omega - 1.5)) - std::tanh(2.0 * (omega - 1.0))) / 4.0;
}

MaterialModel with_kn_avg(const MaterialModel& m, double kn_avg) {
    if (!(kn_avg > 0.0)) throw InvalidMaterial("target <Kn> must be positive");
    MaterialTables t;
    t.omega = m.omega_bins;
    t.bin_width = m.bin_width;
    t.c_omega = m.c_omega;
    t.tau = m.tau;
    t.vg = m.vg;
    t.alpha0 = m.alpha0;
    t.domain_length = m.domain_length * m.kn_avg / kn_avg;
    return build_material(t);
}

VelocityGrid::VelocityGrid(std::vector<double> nodes, std::vector<double> weights)
    : positive_nodes_(std::move(nodes)), positive_weights_(std::move(weights)) {
    const std::size_t n = positive_nodes_.size();
    full_nodes_.resize(2 * n);
    full_weights_.resize(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        full_nodes_[positive_index(j)] = positive_nodes_[j];
        full_nodes_[negative_index(j)] = -positive_nodes_[j];
        full_weights_[positive_index(j)] = 0.5 * positive_weights_[j];
        full_weights_[negative_index(j)] = 0.5 * positive_weights_[j];
    }
}

VelocityGrid VelocityGrid::gauss_legendre(std::size_t n) {
    if (n == 0) throw ConfigurationError("velocity grid needs at least one node per half");
    std::vector<double> x, w;
    gauss_legendre_ref(n, x, w);
    for (std::size_t j = 0; j < n; ++j) {
        x[j] = 0.5 * (x[j] + 1.0);
        w[j] *= 0.5;
    }
    return VelocityGrid(std::move(x), std::move(w));
}

VelocityGrid VelocityGrid::midpoint(std::size_t n) {
    if (n == 0) throw ConfigurationError("velocity grid needs at least one cell per half");
    std::vector<double> x(n), w(n, 1.0 / static_cast<double>(n));
    for (std::size_t j = 0; j < n; ++j) x[j] = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
    return VelocityGrid(std::move(x), std::move(w));
}

PhaseSlice sample(const VelocityGrid& grid, const MaterialModel& m, const PhaseFunction& f) {
    PhaseSlice s(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(m.bins()));
    const auto& v = grid.full_nodes();
    for (std::size_t j = 0; j < grid.size(); ++j) {
        for (std::size_t k = 0; k < m.bins(); ++k) s(j, k) = f(v[j], k);
    }
    return s;
}

double bracket(const PhaseSlice& g, const MaterialModel& m, const VelocityGrid& grid) {
    check_shape(g, m, grid);
    const Eigen::Map<const Eigen::VectorXd> wv(grid.full_weights().data(), grid.size());
    const Eigen::Map<const Eigen::VectorXd> wk(m.measure_weights.data(), m.bins());
    return wv.dot(g.values * wk);
}

double bracket_positive(const PhaseSlice& g, const MaterialModel& m, const VelocityGrid& grid) {
    check_shape(g, m, grid);
    const auto n = static_cast<Eigen::Index>(grid.half_size());
    const Eigen::Map<const Eigen::VectorXd> wv(grid.full_weights().data() + n, n);
    const Eigen::Map<const Eigen::VectorXd> wk(m.measure_weights.data(), m.bins());
    return wv.dot(g.values.bottomRows(n) * wk);
}

PhaseSlice collide(const PhaseSlice& g, const MaterialModel& m, const VelocityGrid& grid) {
    return PhaseSlice(g.values.rows(), g.values.cols(), bracket(g, m, grid));
}

} // namespace phonon
