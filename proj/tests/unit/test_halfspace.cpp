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

#include "common.hpp"

#include "phonon/errors.hpp"
#include "phonon/halfspace.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace phonon;
using namespace testing_util;

namespace {

PhaseSlice of(const VelocityGrid& g, const MaterialModel& m, PhaseFunction f) {
    return sample(g, m, std::move(f));
}

double theta(const HalfSpaceSolver& s, PhaseFunction f) {
    const auto& b = s.basis();
    return s.solve(DirichletBC{of(b.grid, b.material, std::move(f))}).theta_inf;
}

double theta_reflective(const HalfSpaceSolver& s, std::vector<double> eta, PhaseFunction f) {
    const auto& b = s.basis();
    return s.solve(ReflectiveBC{std::move(eta), of(b.grid, b.material, std::move(f))}).theta_inf;
}

} // namespace

TEST_CASE("basis sizes and orthonormality") {
    const auto g = VelocityGrid::gauss_legendre(32);
    {
        const auto b = build_basis(example1(), g, 1);
        CHECK(b.odd_count() == 2);
        CHECK(b.even_count() == 1);
        // ⟨φ_a φ_b⟩ = 2δ_ab
        const Eigen::MatrixXd gram = 2.0 * gram_matrix(b);
        CHECK(max_abs(gram - 2.0 * Eigen::MatrixXd::Identity(3, 3)) <= 1e-13);
    }
    CHECK(orthonormality_defect(build_basis(example1(), g, 8)) < 1e-12);
    CHECK(orthonormality_defect(build_basis(example1(), g, 16)) < 1e-12);
    const auto b6 = build_basis(example2(), g, 4);
    CHECK(orthonormality_defect(b6) < 1e-12);
    // Functions of different bins never overlap.
    const Eigen::MatrixXd gram = gram_matrix(b6);
    for (std::size_t a = 0; a < b6.size(); ++a)
        for (std::size_t c = 0; c < b6.size(); ++c)
            if (b6.label(a).bin != b6.label(c).bin)
                CHECK(gram(Eigen::Index(a), Eigen::Index(c)) == 0.0);
}

TEST_CASE("basis labels round-trip") {
    const auto b = build_basis(example2(), VelocityGrid::gauss_legendre(16), 3);
    for (std::size_t k = 0; k < b.bins(); ++k) {
        for (std::size_t i = 0; i <= 3; ++i) {
            const auto l = b.label(b.odd_index(k, i));
            CHECK((l.parity == Parity::Odd && l.poly == i && l.bin == k));
        }
        for (std::size_t i = 0; i < 3; ++i) {
            const auto l = b.label(b.even_index(k, i));
            CHECK((l.parity == Parity::Even && l.poly == i && l.bin == k));
        }
    }
}

TEST_CASE("too coarse a quadrature is rejected with the defect") {
    CHECK_THROWS_AS(build_basis(example1(), VelocityGrid::gauss_legendre(8), 16), ConfigurationError);
    CHECK_THROWS_AS(build_basis(example1(), VelocityGrid::gauss_legendre(8), 0), ConfigurationError);
}

TEST_CASE("damped operator: closed forms and structure") {
    const auto m = example1();
    const auto g = VelocityGrid::gauss_legendre(32);
    const double a = 0.01;
    const auto one = of(g, m, [](double, std::size_t) { return 1.0; });
    const auto v = of(g, m, [](double x, std::size_t) { return x; });
    const auto d1 = apply_damped(one, m, g, a);
    const auto dv = apply_damped(v, m, g, a);
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.full_nodes()[j];
        CHECK(d1(Eigen::Index(j), 0) == doctest::Approx(-a * x * x / 3.0).epsilon(1e-13));
        CHECK(dv(Eigen::Index(j), 0) == doctest::Approx(-x * (1.0 + a / 3.0)).epsilon(1e-13));
    }
    // No damping: plain (L - I).
    std::mt19937_64 rng(11);
    const auto m2 = example2();
    const auto f = random_slice(g, m2, rng);
    const auto h = random_slice(g, m2, rng);
    const auto d0 = apply_damped(f, m2, g, 0.0);
    CHECK(max_abs(d0.values - (collide(f, m2, g).values - f.values)) <= 1e-15);
    // Self-adjoint and negative definite.
    const auto df = apply_damped(f, m2, g, a);
    const auto dh = apply_damped(h, m2, g, a);
    const double hf = bracket(PhaseSlice(h.values.cwiseProduct(df.values)), m2, g);
    const double fh = bracket(PhaseSlice(f.values.cwiseProduct(dh.values)), m2, g);
    CHECK(std::abs(hf - fh) <= 1e-14);
    CHECK(bracket(PhaseSlice(f.values.cwiseProduct(df.values)), m2, g) < 0.0);
}

TEST_CASE("layer matrices: quadrature oracle, blocks, rank") {
    const auto m = example1();
    const auto g = VelocityGrid::gauss_legendre(32);
    const auto b = build_basis(m, g, 1);
    const auto sys = assemble(b, 0.01);
    // Direct oracle for N = 1: odd √2 sgn(v) l_i(|v|), even √2 l_0.
    auto l = [](int i, double v) { return i == 0 ? 1.0 : std::sqrt(3.0) * (2.0 * v - 1.0); };
    auto phi = [&](std::size_t flat, double v) {
        if (flat < 2) return std::sqrt(2.0) * (v > 0 ? 1.0 : -1.0) * l(int(flat), std::abs(v));
        return std::sqrt(2.0) * l(0, std::abs(v));
    };
    for (std::size_t r = 0; r < 3; ++r) {
        for (std::size_t c = 0; c < 3; ++c) {
            double s = 0.0;
            for (std::size_t j = 0; j < g.size(); ++j) {
                const double x = g.full_nodes()[j];
                s += g.full_weights()[j] * phi(sys.row_function[r], x) * x * phi(c, x);
            }
            CHECK(sys.a_matrix(Eigen::Index(r), Eigen::Index(c)) == doctest::Approx(s).epsilon(1e-13));
        }
    }
    // Rows: even test first.
    CHECK(sys.row_function[0] == 2);

    for (std::size_t n : {2u, 5u}) {
        const auto bb = build_basis(example2(), g, n);
        const auto s = assemble(bb, 0.01);
        const Eigen::Index ne = Eigen::Index(bb.even_count()), no = Eigen::Index(bb.odd_count());
        // A = diag(M, Mᵀ), B = [[0, B^E], [B^O, 0]].
        CHECK(max_abs(s.a_matrix.block(0, no, ne, ne)) == 0.0);
        CHECK(max_abs(s.a_matrix.block(ne, 0, no, no)) == 0.0);
        CHECK(max_abs(s.a_matrix.block(0, 0, ne, no) - s.a_matrix.block(ne, no, no, ne).transpose()) <= 1e-14);
        CHECK(max_abs(s.b_matrix.block(0, 0, ne, no)) == 0.0);
        CHECK(max_abs(s.b_matrix.block(ne, no, no, ne)) == 0.0);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(s.a_matrix);
        lu.setThreshold(1e-10);
        CHECK(lu.rank() == Eigen::Index(2 * n * bb.bins()));
        const auto s0 = assemble(bb, 0.0);
        CHECK(max_abs(s0.b_matrix.block(0, 0, ne, no)) == 0.0);
        CHECK(max_abs(s0.b_matrix.block(ne, no, no, ne)) == 0.0);
    }
}

TEST_CASE("scaling a uniform Kn leaves the layer system unchanged") {
    const auto g = VelocityGrid::gauss_legendre(16);
    const auto s1 = assemble(build_basis(example2(0.25), g, 3), 0.01);
    const auto s2 = assemble(build_basis(example2(0.125), g, 3), 0.01);
    CHECK(max_abs(s1.a_matrix - s2.a_matrix) <= 1e-14);
    CHECK(max_abs(s1.b_matrix - s2.b_matrix) <= 1e-13);
}

TEST_CASE("mode decomposition: counts, residuals, projector") {
    const auto g = VelocityGrid::gauss_legendre(32);
    {
        const HalfSpaceSolver s(example1(), g, 1, 0.01);
        CHECK(s.modes().nondecaying.size() == 2);
    }
    for (std::size_t n : {4u, 8u, 16u}) {
        const HalfSpaceSolver s(example1(), g, n, 0.01);
        const auto& md = s.modes();
        CHECK(md.nondecaying.size() == n + 1);
        const Eigen::Index dim = md.eigenvectors.rows();
        CHECK(max_abs(md.projector * md.eigenvectors - Eigen::MatrixXd::Identity(dim, dim)) <= 1e-9);
        for (Eigen::Index k = 0; k < dim; ++k) {
            const double lam = md.eigenvalues(k);
            const Eigen::VectorXd x = md.eigenvectors.col(k);
            if (std::isinf(lam)) {
                CHECK((s.system().a_matrix * x).norm() <= 1e-10 * x.norm() * s.system().a_matrix.norm());
            } else {
                const double r = (s.system().b_matrix * x - lam * (s.system().a_matrix * x)).norm();
                CHECK(r <= 1e-9 * s.system().b_matrix.norm() * x.norm() * std::max(1.0, std::abs(lam)));
            }
        }
    }
    const HalfSpaceSolver s6(example2(), g, 4, 0.01);
    CHECK(s6.modes().nondecaying.size() == 5 * 6);
}

TEST_CASE("damping removes the zero eigenvalues; undamped spectrum is ± symmetric") {
    const auto g = VelocityGrid::gauss_legendre(32);
    const auto b = build_basis(example1(), g, 2);
    auto finite_spectrum = [&](double a) {
        const auto s = assemble(b, a);
        Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges(s.a_matrix, s.b_matrix, false);
        // λ A v = B v  ⇔  generalized eigenvalue of (B, A); here use (A, B) for ν = 1/λ.
        std::vector<double> lam;
        for (Eigen::Index i = 0; i < ges.betas().size(); ++i) {
            const auto al = ges.alphas()(i);
            const double be = ges.betas()(i);
            // ν = α/β solves A v = ν B v; λ = β/α.
            if (std::abs(al) > 1e-12) lam.push_back((be / al).real());
            else lam.push_back(std::numeric_limits<double>::infinity());
        }
        return lam;
    };
    const auto l0 = finite_spectrum(0.0);
    const auto l1 = finite_spectrum(0.01);
    const auto zero = [](const std::vector<double>& l) {
        return std::count_if(l.begin(), l.end(), [](double x) { return std::abs(x) < 1e-8; });
    };
    CHECK(zero(l0) >= 1);
    CHECK(zero(l1) == 0);
    std::vector<double> fin;
    for (double x : l0)
        if (std::isfinite(x) && std::abs(x) >= 1e-8) fin.push_back(x);
    std::sort(fin.begin(), fin.end());
    REQUIRE(!fin.empty());
    for (std::size_t i = 0; i < fin.size(); ++i)
        CHECK(fin[i] == doctest::Approx(-fin[fin.size() - 1 - i]).epsilon(1e-8));
    // The undamped pencil is not definite: the decomposition refuses it.
    CHECK_THROWS_AS(decompose(assemble(b, 0.0)), NumericalStructureError);
}

TEST_CASE("boundary system: moments, projections, zero data") {
    const auto g = VelocityGrid::gauss_legendre(32);
    const HalfSpaceSolver s(example1(), g, 8, 0.01);
    const auto& b = s.basis();
    const auto m = b.material;
    const auto psi = of(g, m, [](double x, std::size_t) { return 1.0 + x; });
    const auto c = solve_damped(s.system(), s.modes(), b, DirichletBC{psi});
    CHECK(c.residual <= 1e-10);
    const PhaseSlice trace = b.synthesize(c.c);
    for (std::size_t i = 0; i < b.n_poly; ++i) {
        const PhaseSlice e = b.function(b.even_index(0, i));
        const auto vt = of(g, m, [](double x, std::size_t) { return x; });
        const double lhs = bracket_positive(PhaseSlice(vt.values.cwiseProduct(e.values).cwiseProduct(trace.values)), m, g);
        const double rhs = bracket_positive(PhaseSlice(vt.values.cwiseProduct(e.values).cwiseProduct(psi.values)), m, g);
        CHECK(std::abs(lhs - rhs) <= 1e-10);
    }
    for (std::size_t k : s.modes().nondecaying)
        CHECK(std::abs(s.modes().projector.row(Eigen::Index(k)).dot(c.c)) <= 1e-10);

    const auto zero = solve_damped(s.system(), s.modes(), b, DirichletBC{of(g, m, [](double, std::size_t) { return 0.0; })});
    CHECK(zero.c.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("reflective rows: sign-flipped odd term against direct quadrature") {
    const auto g = VelocityGrid::gauss_legendre(32);
    const HalfSpaceSolver s(example1(), g, 4, 0.01);
    const auto& b = s.basis();
    const auto& m = b.material;
    const double eta = 0.5;
    const auto psi = of(g, m, [&](double, std::size_t) { return -(1.0 - eta); });
    const auto c = solve_damped(s.system(), s.modes(), b, ReflectiveBC{{eta}, psi});
    // f(0, v>0) - η f(0, -v) tested against v φ^E on v > 0 must equal the ψ moments.
    const PhaseSlice f = b.synthesize(c.c);
    PhaseSlice refl = f;
    for (std::size_t j = 0; j < g.size(); ++j) refl.values.row(Eigen::Index(j)) = f.values.row(Eigen::Index(g.mirror(j)));
    const auto v = of(g, m, [](double x, std::size_t) { return x; });
    for (std::size_t i = 0; i < b.n_poly; ++i) {
        const PhaseSlice e = b.function(b.even_index(0, i));
        const Eigen::MatrixXd ve = v.values.cwiseProduct(e.values);
        const double lhs = bracket_positive(PhaseSlice(ve.cwiseProduct(f.values - eta * refl.values)), m, g);
        const double rhs = bracket_positive(PhaseSlice(ve.cwiseProduct(psi.values)), m, g);
        CHECK(std::abs(lhs - rhs) <= 1e-10);
    }
}

TEST_CASE("far-field recovery: trivial data") {
    const auto g = VelocityGrid::gauss_legendre(32);
    for (const auto& m : {example1(), example2(0.25)}) {
        const HalfSpaceSolver s(m, g, 8, 0.01);
        CHECK(theta(s, [](double, std::size_t) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(theta(s, [](double, std::size_t) { return 2.5; }) - 2.5) <= 1e-10);
        CHECK(theta(s, [](double, std::size_t) { return 0.0; }) == 0.0);
        CHECK(std::abs(theta_reflective(s, {0.0}, [](double, std::size_t) { return -1.0; }) + 1.0) <= 1e-10);
        CHECK(std::abs(theta_reflective(s, {0.3}, [](double, std::size_t) { return -0.7; }) + 1.0) <= 1e-10);
    }
}

TEST_CASE("far-field recovery: pure reflection is degenerate") {
    const auto g = VelocityGrid::gauss_legendre(32);
    const HalfSpaceSolver s(example1(), g, 4, 0.01);
    CHECK_THROWS_AS(theta_reflective(s, {1.0}, [](double x, std::size_t) { return x; }), DegenerateRecovery);
    CHECK_THROWS_AS(theta_reflective(s, {1.5}, [](double x, std::size_t) { return x; }), ConfigurationError);
}

TEST_CASE("frozen far-field values, single bin, Kn = 1") {
    // Computed by this solver (N = 16, 32 nodes, α_d = 0.01) and confirmed
    // against the finite-volume oracle in the acceptance suite.
    const auto g = VelocityGrid::gauss_legendre(32);
    const HalfSpaceSolver s(example1(), g, 16, 0.01);
    CHECK(theta(s, [](double x, std::size_t) { return x; }) == doctest::Approx(0.7104432373).epsilon(1e-9));
    CHECK(theta(s, [](double x, std::size_t) { return x * x; }) == doctest::Approx(0.5523648).epsilon(1e-6));
    CHECK(theta_reflective(s, {0.5}, [](double x, std::size_t) { return -1.5 * x; }) ==
          doctest::Approx(-2.0673862).epsilon(1e-6));
}

TEST_CASE("single-bin and multi-bin agree for ω-independent data and Kn") {
    const auto g = VelocityGrid::gauss_legendre(32);
    const HalfSpaceSolver s1(example1(0.25), g, 8, 0.01);
    const HalfSpaceSolver s6(example2(0.25), g, 8, 0.01);
    for (auto f : {PhaseFunction([](double x, std::size_t) { return x; }),
                   PhaseFunction([](double x, std::size_t) { return x * x - 0.2; })})
        CHECK(std::abs(theta(s1, f) - theta(s6, f)) <= 1e-10);
    CHECK(std::abs(theta_reflective(s1, {0.4}, [](double x, std::size_t) { return x; }) -
                   theta_reflective(s6, {0.4}, [](double x, std::size_t) { return x; })) <= 1e-10);
}

TEST_CASE("θ∞ is linear in the data") {
    const auto g = VelocityGrid::gauss_legendre(32);
    const HalfSpaceSolver s(example2(0.125), g, 6, 0.01);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 5; ++t) {
        const double a = u(rng), c = u(rng), p = u(rng);
        auto f1 = [p](double x, std::size_t k) { return std::sin(p * x) + 0.1 * double(k); };
        auto f2 = [](double x, std::size_t k) { return x * x * x - 0.05 * double(k); };
        const double lhs = theta(s, [&](double x, std::size_t k) { return a * f1(x, k) + c * f2(x, k); });
        CHECK(std::abs(lhs - (a * theta(s, f1) + c * theta(s, f2))) <= 1e-10);
    }
}

TEST_CASE("flux annihilation of the recovered solution at every depth") {
    const auto g = VelocityGrid::gauss_legendre(32);
    for (const auto& m : {example1(), example2(0.25)}) {
        const HalfSpaceSolver s(m, g, 8, 0.01);
        const auto& b = s.basis();
        const auto vkn = of(g, m, [&](double x, std::size_t k) { return x * m.kn[k]; });
        std::vector<double> eta;
        for (double w : m.omega_bins) eta.push_back(tanh_reflection(w));
        const HalfSpaceBC cases[] = {
            DirichletBC{of(g, m, [](double x, std::size_t) { return x; })},
            DirichletBC{of(g, m, [](double x, std::size_t) { return x * x; })},
            ReflectiveBC{eta, of(g, m, [&](double x, std::size_t k) { return -(1.0 + eta[k]) * x * m.kn[k]; })},
        };
        for (const auto& bc : cases) {
            const auto sol = s.solve(bc);
            for (double z : {0.0, 0.1, 0.5, 2.0, 10.0}) {
                const PhaseSlice f = evaluate(sol, z, b);
                CHECK(std::abs(bracket(PhaseSlice(vkn.values.cwiseProduct(f.values)), m, g)) <= 1e-8);
            }
        }
    }
}

TEST_CASE("evaluate: boundary expansion at z = 0 and decay at depth") {
    const auto g = VelocityGrid::gauss_legendre(32);
    const HalfSpaceSolver s(example1(), g, 8, 0.01);
    const auto& b = s.basis();
    const auto sol = s.solve(DirichletBC{of(g, b.material, [](double x, std::size_t) { return x; })});
    CHECK(max_abs(evaluate_damped(sol, 0.0, b).values - b.synthesize(sol.c0).values) <= 1e-10);
    double slowest = -std::numeric_limits<double>::infinity();
    for (std::size_t k : s.modes().decaying) slowest = std::max(slowest, s.modes().eigenvalues(Eigen::Index(k)));
    REQUIRE(slowest < 0.0);
    const double deep = 100.0 / std::abs(slowest);
    CHECK(max_abs(evaluate_damped(sol, deep, b).values) <= 1e-10);
    const PhaseSlice far = evaluate(sol, deep, b);
    CHECK(max_abs(far.values.array() - sol.theta_inf) <= 1e-10);
    CHECK_THROWS_AS(evaluate(sol, -1.0, b), ConfigurationError);
}

TEST_CASE("spectral self-convergence on the five boundary problems") {
    const auto g = VelocityGrid::gauss_legendre(32);
    const double eta = 0.5;
    auto run = [&](std::size_t n) {
        const HalfSpaceSolver s(example1(0.0625), g, n, 0.01);
        const double kn = 0.0625;
        return std::vector<double>{
            theta(s, [](double x, std::size_t) { return x; }),
            theta(s, [](double, std::size_t) { return 1.0; }),
            theta(s, [&](double x, std::size_t) { return x * kn; }),
            theta_reflective(s, {eta}, [&](double, std::size_t) { return -(1.0 - eta); }),
            theta_reflective(s, {eta}, [&](double x, std::size_t) { return -(1.0 + eta) * x * kn; }),
        };
    };
    const auto t4 = run(4), t8 = run(8), t16 = run(16);
    for (std::size_t i = 0; i < 5; ++i) {
        const double d1 = std::abs(t8[i] - t4[i]), d2 = std::abs(t16[i] - t8[i]);
        if (d1 < 1e-12) CHECK(d2 < 1e-12);
        else CHECK(d2 < d1);
    }
}
