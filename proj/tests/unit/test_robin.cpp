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
#include "phonon/robin.hpp"

#include <doctest.h>

#include <cmath>

using namespace phonon;
using namespace testing_util;

namespace {

PhaseSlice data(const VelocityGrid& g, const MaterialModel& m, PhaseFunction f) {
    return sample(g, m, std::move(f));
}

} // namespace

TEST_CASE("left coefficients: b1 = 1, zero data, frozen values") {
    const auto g = VelocityGrid::gauss_legendre(32);
    for (double kn : {0.25, 0.0625}) {
        const auto m = example1(kn);
        const auto l = compute_left(data(g, m, [](double x, std::size_t) { return x; }), m, g, 16, 0.01);
        CHECK(std::abs(l.b1 - 1.0) <= 1e-10);
        CHECK(l.b0 == doctest::Approx(0.7104432373).epsilon(1e-9));
        // ψ₂ = v Kn is Kn times the φ = v problem.
        CHECK(l.b2 == doctest::Approx(kn * l.b0).epsilon(1e-10));
        const auto z = compute_left(data(g, m, [](double, std::size_t) { return 0.0; }), m, g, 8, 0.01);
        CHECK(z.b0 == 0.0);
    }
    const auto m2 = example2(0.125);
    const auto l2 = compute_left(data(g, m2, [](double x, std::size_t) { return x; }), m2, g, 8, 0.01);
    CHECK(std::abs(l2.b1 - 1.0) <= 1e-10);
}

TEST_CASE("right coefficients: η = 0, frozen η = 0.5, degenerate η = 1") {
    const auto g = VelocityGrid::gauss_legendre(32);
    const auto m = example1(0.0625);
    const auto r0 = compute_right({0.0}, m, g, 8, 0.01);
    CHECK(std::abs(r0.b3 + 1.0) <= 1e-10);
    const auto r = compute_right({0.5}, m, g, 16, 0.01);
    CHECK(std::abs(r.b3 + 1.0) <= 1e-10);
    // θ∞ of ψ = -1.5 v at Kn = 1 is -2.0673862; ψ₄ carries Kn.
    CHECK(r.b4 == doctest::Approx(-2.0673862 * 0.0625).epsilon(1e-6));
    CHECK_THROWS_AS(compute_right({1.0}, m, g, 8, 0.01), DegenerateRecovery);
}

TEST_CASE("b4 scales linearly with a uniform Kn") {
    const auto g = VelocityGrid::gauss_legendre(32);
    const double b_a = compute_right({0.3}, example1(0.2), g, 8, 0.01).b4;
    const double b_b = compute_right({0.3}, example1(0.05), g, 8, 0.01).b4;
    CHECK(b_b == doctest::Approx(0.25 * b_a).epsilon(1e-10));
}

TEST_CASE("b0 is linear in φ") {
    const auto g = VelocityGrid::gauss_legendre(32);
    const auto m = example2(0.25);
    const HalfSpaceSolver s(m, g, 8, 0.01);
    auto f1 = [](double x, std::size_t) { return x; };
    auto f2 = [](double x, std::size_t k) { return std::exp(-x) * (1.0 + 0.1 * double(k)); };
    const double a = 0.7, c = -1.3;
    const double lhs = compute_left(data(g, m, [&](double x, std::size_t k) { return a * f1(x, k) + c * f2(x, k); }), s).b0;
    const double rhs = a * compute_left(data(g, m, f1), s).b0 + c * compute_left(data(g, m, f2), s).b0;
    CHECK(std::abs(lhs - rhs) <= 1e-10);
}

TEST_CASE("multi-frequency tanh reflection: finite and self-convergent") {
    const auto g = VelocityGrid::gauss_legendre(32);
    const auto m = example2(0.0625);
    std::vector<double> eta;
    for (double w : m.omega_bins) eta.push_back(tanh_reflection(w));
    const auto r8 = compute_right(eta, m, g, 8, 0.01);
    const auto r16 = compute_right(eta, m, g, 16, 0.01);
    CHECK(std::isfinite(r8.b3));
    CHECK(std::isfinite(r8.b4));
    CHECK(std::abs(r8.b3 - r16.b3) <= 1e-4);
    CHECK(std::abs(r8.b4 - r16.b4) <= 1e-4);
}

TEST_CASE("compute_robin and the coefficient record") {
    const auto g = VelocityGrid::gauss_legendre(32);
    const auto m = example1(0.125);
    const auto b = compute_robin(data(g, m, [](double x, std::size_t) { return x; }), {0.5}, m, g, 8, 0.01);
    CHECK(b.b1 > 0.0);
    const std::string j = to_json(b);
    CHECK(j.find("\"b0\"") != std::string::npos);
    CHECK(j.find("\"b4\"") != std::string::npos);
    CHECK_THROWS_AS(validate(RobinCoefficients{1, 0, 0, 1, 1}), ConfigurationError);
    CHECK_THROWS_AS(validate(RobinCoefficients{1, 1, 0, 0, 0}), ConfigurationError);
    CHECK_THROWS_AS(expand_eta({0.1, 0.2}, 6), ShapeMismatch);
}
