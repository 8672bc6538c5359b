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

#include "phonon/halfspace.hpp"

#include "phonon/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <sstream>

namespace phonon {

namespace {

// sqrt(2i+1) P_i(2v-1), orthonormal on [0, 1].
double shifted_legendre(std::size_t i, double v) {
    const double x = 2.0 * v - 1.0;
    double p0 = 1.0, p1 = x;
    if (i == 0) return 1.0;
    for (std::size_t n = 1; n < i; ++n) {
        const double p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return std::sqrt(2.0 * i + 1.0) * p1;
}

// Quadrature weight of each flattened (v, ω) sample.
Eigen::VectorXd flat_weights(const MaterialModel& m, const VelocityGrid& grid) {
    const Eigen::Index nv = static_cast<Eigen::Index>(grid.size());
    Eigen::VectorXd w(nv * static_cast<Eigen::Index>(m.bins()));
    for (std::size_t k = 0; k < m.bins(); ++k)
        for (Eigen::Index j = 0; j < nv; ++j)
            w(j + nv * static_cast<Eigen::Index>(k)) =
                grid.full_weights()[static_cast<std::size_t>(j)] * m.measure_weights[k];
    return w;
}

Eigen::VectorXd flat_velocity(const MaterialModel& m, const VelocityGrid& grid) {
    const Eigen::Index nv = static_cast<Eigen::Index>(grid.size());
    Eigen::VectorXd v(nv * static_cast<Eigen::Index>(m.bins()));
    for (std::size_t k = 0; k < m.bins(); ++k)
        for (Eigen::Index j = 0; j < nv; ++j)
            v(j + nv * static_cast<Eigen::Index>(k)) = grid.full_nodes()[static_cast<std::size_t>(j)];
    return v;
}

Eigen::Map<const Eigen::VectorXd> flat(const PhaseSlice& g) {
    return {g.values.data(), g.values.size()};
}

int parity_sign(Parity p) { return p == Parity::Odd ? -1 : 1; }

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

} // namespace

EvenOddBasis::Label EvenOddBasis::label(std::size_t flat_index) const {
    if (flat_index < odd_count())
        return {Parity::Odd, flat_index % (n_poly + 1), flat_index / (n_poly + 1)};
    const std::size_t e = flat_index - odd_count();
    return {Parity::Even, e % n_poly, e / n_poly};
}

PhaseSlice EvenOddBasis::function(std::size_t flat_index) const {
    const Eigen::Index nv = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXd out = Eigen::Map<const Eigen::MatrixXd>(
        samples.col(static_cast<Eigen::Index>(flat_index)).data(), nv,
        static_cast<Eigen::Index>(bins()));
    return PhaseSlice(std::move(out));
}

PhaseSlice EvenOddBasis::synthesize(const Eigen::VectorXd& c) const {
    if (c.size() != static_cast<Eigen::Index>(size()))
        throw ShapeMismatch("coefficient vector has " + std::to_string(c.size()) +
                            " entries, basis has " + std::to_string(size()));
    const Eigen::VectorXd g = samples * c;
    return PhaseSlice(Eigen::Map<const Eigen::MatrixXd>(
        g.data(), static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(bins())));
}

EvenOddBasis build_basis(const MaterialModel& m, const VelocityGrid& grid, std::size_t n_poly) {
    if (n_poly < 1) throw ConfigurationError("spectral order N must be at least 1");
    EvenOddBasis b{m, grid, n_poly, {}, {}, {}};
    const std::size_t nh = grid.half_size();
    b.legendre.resize(static_cast<Eigen::Index>(nh), static_cast<Eigen::Index>(n_poly + 1));
    for (std::size_t j = 0; j < nh; ++j)
        for (std::size_t i = 0; i <= n_poly; ++i)
            b.legendre(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
                shifted_legendre(i, grid.positive_nodes()[j]);
    for (double w : m.measure_weights) b.weight.push_back(std::sqrt(2.0 / w));

    const Eigen::Index nv = static_cast<Eigen::Index>(grid.size());
    b.samples = Eigen::MatrixXd::Zero(nv * static_cast<Eigen::Index>(m.bins()),
                                      static_cast<Eigen::Index>(b.size()));
    for (std::size_t a = 0; a < b.size(); ++a) {
        const auto lab = b.label(a);
        const Eigen::Index off = nv * static_cast<Eigen::Index>(lab.bin);
        for (std::size_t j = 0; j < nh; ++j) {
            const double l = b.weight[lab.bin] *
                             b.legendre(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(lab.poly));
            b.samples(off + static_cast<Eigen::Index>(grid.positive_index(j)), static_cast<Eigen::Index>(a)) = l;
            b.samples(off + static_cast<Eigen::Index>(grid.negative_index(j)), static_cast<Eigen::Index>(a)) =
                lab.parity == Parity::Odd ? -l : l;
        }
    }
    const double defect = orthonormality_defect(b);
    if (!(defect <= 1e-12))
        throw ConfigurationError("basis orthonormality defect " + fmt(defect) +
                                 " exceeds 1e-12; use more velocity nodes than N+1 per half");
    return b;
}

Eigen::MatrixXd gram_matrix(const EvenOddBasis& b) {
    const Eigen::VectorXd w = flat_weights(b.material, b.grid);
    return 0.5 * b.samples.transpose() * w.asDiagonal() * b.samples;
}

double orthonormality_defect(const EvenOddBasis& b) {
    const Eigen::MatrixXd g = gram_matrix(b);
    return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

PhaseSlice scaled_velocity(const MaterialModel& m, const VelocityGrid& grid) {
    return sample(grid, m, [&](double v, std::size_t k) { return v * m.kn[k] / m.kn_avg; });
}

PhaseSlice apply_damped(const PhaseSlice& g, const MaterialModel& m, const VelocityGrid& grid,
                        double damping) {
    check_shape(g, m, grid);
    const PhaseSlice vt = scaled_velocity(m, grid);
    const PhaseSlice q(-vt.values.cwiseProduct(vt.values));
    const double mean = bracket(g, m, grid);
    const double pv = bracket(PhaseSlice(vt.values.cwiseProduct(g.values)), m, grid);
    const double pq = bracket(PhaseSlice(q.values.cwiseProduct(g.values)), m, grid);
    PhaseSlice out(Eigen::MatrixXd::Constant(g.values.rows(), g.values.cols(), mean) - g.values);
    out.values -= damping * pv * vt.values + damping * pq * q.values;
    return out;
}

LayerSystem assemble(const EvenOddBasis& b, double damping) {
    if (!(damping >= 0.0)) throw ConfigurationError("damping strength must be non-negative");
    const std::size_t n = b.size();
    const Eigen::Index nn = static_cast<Eigen::Index>(n);
    LayerSystem sys;
    sys.damping = damping;
    sys.n_poly = b.n_poly;
    sys.bins = b.bins();
    sys.row_function.resize(n);
    sys.row_scale.resize(nn);
    for (std::size_t r = 0; r < n; ++r) {
        sys.row_function[r] = r < b.even_count() ? b.odd_count() + r : r - b.even_count();
        sys.row_scale(static_cast<Eigen::Index>(r)) =
            b.material.kn_avg / b.material.kn[b.label(sys.row_function[r]).bin];
    }

    const Eigen::VectorXd w = flat_weights(b.material, b.grid);
    const Eigen::VectorXd wv = w.cwiseProduct(flat_velocity(b.material, b.grid));
    Eigen::MatrixXd tests(b.samples.rows(), nn);
    for (std::size_t r = 0; r < n; ++r)
        tests.col(static_cast<Eigen::Index>(r)) = b.samples.col(static_cast<Eigen::Index>(sys.row_function[r]));

    Eigen::MatrixXd damped(b.samples.rows(), nn);
    for (std::size_t c = 0; c < n; ++c) {
        const PhaseSlice ld = apply_damped(b.function(c), b.material, b.grid, damping);
        damped.col(static_cast<Eigen::Index>(c)) = flat(ld);
    }

    sys.a_matrix = tests.transpose() * wv.asDiagonal() * b.samples;
    sys.b_matrix = sys.row_scale.asDiagonal() * (tests.transpose() * w.asDiagonal() * damped);

    // Parity-forbidden entries are rounding noise; zero them outright.
    for (std::size_t r = 0; r < n; ++r) {
        const auto pr = b.label(sys.row_function[r]).parity;
        for (std::size_t c = 0; c < n; ++c) {
            const bool same = pr == b.label(c).parity;
            const auto ri = static_cast<Eigen::Index>(r), ci = static_cast<Eigen::Index>(c);
            if (same) sys.a_matrix(ri, ci) = 0.0;
            else sys.b_matrix(ri, ci) = 0.0;
        }
    }
    return sys;
}

ModeDecomposition decompose(const LayerSystem& sys) {
    const Eigen::Index n = sys.a_matrix.rows();
    const std::size_t expected = (sys.n_poly + 1) * sys.bins;

    // Undo the row permutation and the ⟨Kn⟩/Kn scaling: the result is a
    // symmetric pencil (A_s, B_s) with -B_s positive definite.
    Eigen::MatrixXd as(n, n), bs(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto f = static_cast<Eigen::Index>(sys.row_function[static_cast<std::size_t>(r)]);
        as.row(f) = sys.a_matrix.row(r);
        bs.row(f) = sys.b_matrix.row(r) / sys.row_scale(r);
    }
    const double asym = (as - as.transpose()).cwiseAbs().maxCoeff();
    const double bsym = (bs - bs.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * std::max(1.0, as.cwiseAbs().maxCoeff()) ||
        bsym > 1e-12 * std::max(1.0, bs.cwiseAbs().maxCoeff()))
        throw NumericalStructureError("layer matrices are not symmetric (asymmetry " + fmt(asym) +
                                      ", " + fmt(bsym) + ")");
    as = 0.5 * (as + as.transpose()).eval();
    const Eigen::MatrixXd neg_b = -0.5 * (bs + bs.transpose());

    Eigen::LLT<Eigen::MatrixXd> llt(neg_b);
    if (llt.info() != Eigen::Success)
        throw NumericalStructureError(
            "damped collision matrix is not negative definite; the layer spectrum is not "
            "guaranteed real");

    // Spectrum of B⁻¹A as a standard problem, checked to be real.
    const Eigen::VectorXcd standard =
        Eigen::EigenSolver<Eigen::MatrixXd>(sys.b_matrix.partialPivLu().solve(sys.a_matrix), false)
            .eigenvalues();
    const double scale = standard.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < standard.size(); ++i) {
        if (std::abs(standard(i).imag()) > 1e-8 * scale)
            throw NumericalStructureError("complex layer eigenvalue " + fmt(standard(i).real()) +
                                          (standard(i).imag() < 0 ? " - " : " + ") +
                                          fmt(std::abs(standard(i).imag())) + "i");
    }

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(as, neg_b);
    if (ges.info() != Eigen::Success)
        throw NumericalStructureError("generalized eigen-solve of the layer pencil failed");

    ModeDecomposition md;
    md.inverse_eigenvalues = -ges.eigenvalues();
    md.eigenvectors = ges.eigenvectors();
    md.projector = md.eigenvectors.transpose() * neg_b;
    md.eigenvalues.resize(n);

    const double nu_max = md.inverse_eigenvalues.cwiseAbs().maxCoeff();
    const double anorm = sys.a_matrix.norm(), bnorm = sys.b_matrix.norm();
    for (Eigen::Index k = 0; k < n; ++k) {
        const double nu = md.inverse_eigenvalues(k);
        const Eigen::VectorXd x = md.eigenvectors.col(k);
        const double res = (sys.a_matrix * x - nu * (sys.b_matrix * x)).norm();
        if (res > 1e-10 * (anorm + std::abs(nu) * bnorm) * x.norm())
            throw NumericalStructureError("eigen-residual " + fmt(res) + " for mode " +
                                          std::to_string(k));
        const bool zero = std::abs(nu) <= 1e-12 * nu_max;
        md.eigenvalues(k) = zero ? std::numeric_limits<double>::infinity() : 1.0 / nu;
        if (nu >= -1e-12 * nu_max) md.nondecaying.push_back(static_cast<std::size_t>(k));
        else md.decaying.push_back(static_cast<std::size_t>(k));
    }
    if (md.nondecaying.size() != expected)
        throw NumericalStructureError("found " + std::to_string(md.nondecaying.size()) +
                                      " non-decaying modes, expected " + std::to_string(expected));
    return md;
}

DampedCoefficients solve_damped(const LayerSystem& sys, const ModeDecomposition& modes,
                                const EvenOddBasis& b, const HalfSpaceBC& bc) {
    const PhaseSlice& psi = std::visit([](const auto& x) -> const PhaseSlice& { return x.psi; }, bc);
    check_shape(psi, b.material, b.grid);
    std::vector<double> eta(b.bins(), 0.0);
    if (const auto* r = std::get_if<ReflectiveBC>(&bc)) {
        if (r->eta.size() == 1) eta.assign(b.bins(), r->eta[0]);
        else if (r->eta.size() == b.bins()) eta = r->eta;
        else
            throw ShapeMismatch("reflection coefficient has " + std::to_string(r->eta.size()) +
                                " entries for " + std::to_string(b.bins()) + " bins");
        for (double e : eta)
            if (!(e >= 0.0 && e <= 1.0))
                throw ConfigurationError("reflection coefficient must lie in [0, 1], got " + fmt(e));
    }
    if (!psi.values.allFinite()) throw ConfigurationError("boundary data is not finite");

    const Eigen::Index n = static_cast<Eigen::Index>(b.size());
    const Eigen::Index ne = static_cast<Eigen::Index>(b.even_count());
    const Eigen::Index no = static_cast<Eigen::Index>(b.odd_count());
    if (sys.a_matrix.rows() != n || modes.projector.rows() != n)
        throw ShapeMismatch("layer system does not match the basis");

    // Weight of v⟨·⟩₊: w v on v > 0, zero elsewhere.
    Eigen::VectorXd wplus = flat_weights(b.material, b.grid).cwiseProduct(flat_velocity(b.material, b.grid));
    for (Eigen::Index i = 0; i < wplus.size(); ++i) wplus(i) = std::max(wplus(i), 0.0);

    const Eigen::MatrixXd even_tests = b.samples.rightCols(ne);
    Eigen::MatrixXd m(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    m.topRows(ne) = even_tests.transpose() * wplus.asDiagonal() * b.samples;
    for (Eigen::Index c = 0; c < n; ++c) {
        const auto lab = b.label(static_cast<std::size_t>(c));
        m.topRows(ne).col(c) *= 1.0 - eta[lab.bin] * parity_sign(lab.parity);
    }
    rhs.head(ne) = even_tests.transpose() * wplus.asDiagonal() * flat(psi);
    if (static_cast<Eigen::Index>(modes.nondecaying.size()) != no)
        throw NumericalStructureError("non-decaying mode count does not match odd block size");
    for (Eigen::Index i = 0; i < no; ++i)
        m.row(ne + i) = modes.projector.row(static_cast<Eigen::Index>(modes.nondecaying[static_cast<std::size_t>(i)]));

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
    DampedCoefficients out;
    out.rcond = lu.rcond();
    if (!(out.rcond > 1e-15))
        throw ConfigurationError("boundary system is singular (rcond " + fmt(out.rcond) +
                                 "); check N and the reflection coefficient");
    out.c = lu.solve(rhs);
    out.residual = (m * out.c - rhs).cwiseAbs().maxCoeff() / std::max(1.0, rhs.cwiseAbs().maxCoeff());
    if (!(out.residual <= 1e-10))
        throw NumericalStructureError("boundary system residual " + fmt(out.residual) +
                                      " exceeds 1e-10");
    return out;
}

double boundary_flux(const EvenOddBasis& b, const Eigen::VectorXd& c) {
    const PhaseSlice f = b.synthesize(c);
    const PhaseSlice vt = scaled_velocity(b.material, b.grid);
    return bracket(PhaseSlice(vt.values.cwiseProduct(f.values)), b.material, b.grid);
}

double recover_theta(const Eigen::VectorXd& f_tilde_c0, const Eigen::VectorXd& g0_c0,
                     const EvenOddBasis& b) {
    const double num = boundary_flux(b, f_tilde_c0);
    const double den = boundary_flux(b, g0_c0);
    if (!(std::abs(den) > 1e-12))
        throw DegenerateRecovery("flux of the unit-data layer vanishes (" + fmt(den) +
                                 "); θ∞ is undefined, e.g. for a fully reflecting wall");
    return num / den;
}

HalfSpaceSolver::HalfSpaceSolver(const MaterialModel& m, const VelocityGrid& grid,
                                 std::size_t n_poly, double damping)
    : basis_(std::make_shared<const EvenOddBasis>(build_basis(m, grid, n_poly))),
      system_(std::make_shared<const LayerSystem>(assemble(*basis_, damping))),
      modes_(std::make_shared<const ModeDecomposition>(decompose(*system_))) {}

HalfSpaceSolution HalfSpaceSolver::solve(const HalfSpaceBC& bc) const {
    const EvenOddBasis& b = *basis_;
    const PhaseSlice ones(static_cast<Eigen::Index>(b.grid.size()), static_cast<Eigen::Index>(b.bins()), 1.0);
    HalfSpaceBC unit = DirichletBC{ones};
    if (const auto* r = std::get_if<ReflectiveBC>(&bc)) {
        PhaseSlice src = ones;
        for (std::size_t k = 0; k < b.bins(); ++k)
            src.values.col(static_cast<Eigen::Index>(k)).array() =
                1.0 - (r->eta.size() == 1 ? r->eta[0] : r->eta.at(k));
        unit = ReflectiveBC{r->eta, src};
    }
    const DampedCoefficients f = solve_damped(*system_, *modes_, b, bc);
    const DampedCoefficients g = solve_damped(*system_, *modes_, b, unit);

    HalfSpaceSolution sol;
    sol.c0 = f.c;
    sol.g0 = g.c;
    sol.theta_inf = recover_theta(f.c, g.c, b);
    sol.flux_residual = boundary_flux(b, f.c) - sol.theta_inf * boundary_flux(b, g.c);
    sol.rcond = std::min(f.rcond, g.rcond);
    if (sol.rcond < 1e-12)
        sol.warnings.push_back("boundary system condition estimate exceeds 1e12 (rcond " +
                               fmt(sol.rcond) + ")");
    sol.modes = modes_;
    return sol;
}

HalfSpaceSolution solve_halfspace(const HalfSpaceBC& bc, const MaterialModel& m,
                                  const VelocityGrid& grid, std::size_t n_poly, double damping) {
    return HalfSpaceSolver(m, grid, n_poly, damping).solve(bc);
}

Eigen::VectorXd propagate(const ModeDecomposition& modes, const Eigen::VectorXd& c0, double z) {
    if (!(z >= 0.0)) throw ConfigurationError("layer coordinate must be non-negative");
    const Eigen::VectorXd amp = modes.projector * c0;
    Eigen::VectorXd scaled = Eigen::VectorXd::Zero(amp.size());
    for (std::size_t k : modes.decaying) {
        const auto i = static_cast<Eigen::Index>(k);
        scaled(i) = amp(i) * std::exp(modes.eigenvalues(i) * z);
    }
    return modes.eigenvectors * scaled;
}

PhaseSlice evaluate_damped(const HalfSpaceSolution& sol, double z, const EvenOddBasis& b) {
    return b.synthesize(propagate(*sol.modes, sol.c0, z));
}

PhaseSlice evaluate(const HalfSpaceSolution& sol, double z, const EvenOddBasis& b) {
    PhaseSlice f = b.synthesize(propagate(*sol.modes, sol.c0, z));
    const PhaseSlice g = b.synthesize(propagate(*sol.modes, sol.g0, z));
    f.values -= sol.theta_inf * (g.values.array() - 1.0).matrix();
    return f;
}

} // namespace phonon
