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

#include "phonon/harness.hpp"

#include "phonon/errors.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

namespace phonon {

const char* to_string(LimitMode mode) {
    switch (mode) {
    case LimitMode::Robin: return "robin";
    case LimitMode::Dirichlet: return "dirichlet";
    case LimitMode::DirichletBoth: return "dirichlet-both";
    }
    return "?";
}

LimitMode parse_limit_mode(const std::string& s) {
    if (s == "robin") return LimitMode::Robin;
    if (s == "dirichlet") return LimitMode::Dirichlet;
    if (s == "dirichlet-both") return LimitMode::DirichletBoth;
    throw ConfigurationError("unknown limit mode '" + s +
                             "' (expected robin, dirichlet or dirichlet-both)");
}

RobinCoefficients limit_coefficients(const RobinCoefficients& b, LimitMode mode) {
    RobinCoefficients out = b;
    if (mode != LimitMode::Robin) out.b2 = 0.0;
    if (mode == LimitMode::DirichletBoth) out.b4 = 0.0;
    return out;
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.kn.empty()) throw ConfigurationError("Kn list is empty");
    for (std::size_t i = 0; i < cfg.kn.size(); ++i) {
        if (!(cfg.kn[i] > 0.0)) throw ConfigurationError("Kn values must be positive");
        if (i > 0 && !(cfg.kn[i] < cfg.kn[i - 1]))
            throw ConfigurationError("Kn list must be strictly decreasing");
    }
    if (cfg.modes.empty()) throw ConfigurationError("no limit mode selected");
    if (!cfg.phi) throw ConfigurationError("boundary data φ is not set");
    if (cfg.kinetic.nx < 4) throw ConfigurationError("kinetic grid needs at least 4 cells");
    if (cfg.workers < 1) throw ConfigurationError("workers must be at least 1");
    for (double e : cfg.eta)
        if (!(e >= 0.0 && e <= 1.0))
            throw ConfigurationError("reflection coefficient must lie in [0, 1]");
}

std::vector<double> cell_to_nodes(const std::vector<double>& c) {
    const std::size_t n = c.size();
    if (n < 2) throw ShapeMismatch("need at least two cells to interpolate");
    std::vector<double> out(n + 1);
    out[0] = c[0];
    out[n] = c[n - 1];
    for (std::size_t i = 1; i < n; ++i) out[i] = 0.5 * (c[i - 1] + c[i]);
    return out;
}

double error_metric(const std::vector<double>& rho, const std::vector<double>& t) {
    if (rho.size() != t.size() || rho.size() < 5)
        throw ShapeMismatch("error metric needs matching nodal arrays (" +
                            std::to_string(rho.size()) + " vs " + std::to_string(t.size()) + ")");
    const std::size_t nx = rho.size() - 1;
    double s = 0.0;
    for (std::size_t i = nx / 4; i <= 3 * nx / 4; ++i) s += (rho[i] - t[i]) * (rho[i] - t[i]);
    return std::sqrt(s);
}

RateFit fit_rate(const std::vector<double>& kn, const std::vector<double>& err) {
    if (kn.size() != err.size()) throw ShapeMismatch("rate fit needs one error per Kn");
    if (kn.size() < 3) throw ConfigurationError("rate fit needs at least three points");
    const std::size_t n = kn.size();
    double sx = 0, sy = 0;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(err[i] > 0.0) || !(kn[i] > 0.0))
            throw ConfigurationError("rate fit needs positive Kn and error values");
        x[i] = std::log(kn[i]);
        y[i] = std::log(err[i]);
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw ConfigurationError("rate fit needs distinct Kn values");
    RateFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = y[i] - (f.intercept + f.slope * x[i]);
        r += d * d;
    }
    f.residual = std::sqrt(r / n);
    return f;
}

KnPoint run_point(const ExperimentConfig& cfg, double kn) {
    const auto start = std::chrono::steady_clock::now();
    KnPoint p;
    p.kn = kn;
    try {
        const MaterialModel m = with_kn_avg(build_material(cfg.material), kn);
        const std::vector<double> eta = expand_eta(cfg.eta, m.bins());

        const VelocityGrid layer_grid = VelocityGrid::gauss_legendre(cfg.velocity_nodes);
        const HalfSpaceSolver solver(m, layer_grid, cfg.n_poly, cfg.damping);
        const LeftLayers left = compute_left(sample(layer_grid, m, cfg.phi), solver);
        const RightLayers right = compute_right(eta, solver);
        p.coeffs = {left.b0, left.b1, left.b2, right.b3, right.b4};
        for (const auto* s : {&left.phi, &left.one, &left.gradient, &right.value, &right.gradient})
            p.warnings.insert(p.warnings.end(), s->warnings.begin(), s->warnings.end());

        const VelocityGrid kv = cfg.kinetic.velocity();
        const PhaseSlice phi_k = sample(kv, m, cfg.phi);
        const KineticSolution ref = cfg.direct_reference
                                        ? solve_direct(phi_k, eta, m, cfg.kinetic)
                                        : solve_steady(phi_k, eta, m, cfg.kinetic, cfg.kinetic_options);
        p.iterations = ref.iterations;
        p.kinetic_residual = ref.residual;
        p.within_bounds = ref.within_bounds;
        if (!ref.within_bounds) p.warnings.push_back("reference temperature left the data bounds");
        p.t_nodes = cell_to_nodes(ref.temperature);

        for (LimitMode mode : cfg.modes) {
            const DensityProfile rho = solve_robin(
                diffusion_config(m, limit_coefficients(p.coeffs, mode), cfg.kinetic.nx));
            p.modes[mode] = {error_metric(rho.rho, p.t_nodes), rho.rho};
        }
    } catch (const Error& e) {
        p.failure = std::string(e.kind()) + ": " + e.what();
    } catch (const std::exception& e) {
        p.failure = std::string("error: ") + e.what();
    }
    p.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return p;
}

ConvergenceRecord run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    ConvergenceRecord rec;
    rec.config = cfg;
    rec.points.resize(cfg.kn.size());

    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < cfg.kn.size(); i = next++)
            rec.points[i] = run_point(cfg, cfg.kn[i]);
    };
    const std::size_t n_threads = std::min(cfg.workers, cfg.kn.size());
    if (n_threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    for (LimitMode mode : cfg.modes) {
        std::vector<double> kn, err;
        for (const auto& p : rec.points) {
            if (p.failure) break;
            kn.push_back(p.kn);
            err.push_back(p.modes.at(mode).error);
        }
        if (kn.size() == cfg.kn.size() && kn.size() >= 3) {
            try {
                rec.rates[mode] = fit_rate(kn, err);
            } catch (const Error&) {
                // Zero errors (exact data) leave the rate undefined.
            }
        }
    }
    if (!cfg.output_dir.empty()) write_outputs(rec, cfg.output_dir);
    return rec;
}

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

void write_outputs(const ConvergenceRecord& rec, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const ExperimentConfig& cfg = rec.config;

    std::ofstream err(fs::path(dir) / "errors.csv");
    err << "kn,error,mode,phi,example\n";
    for (const auto& p : rec.points) {
        if (p.failure) continue;
        for (const auto& [mode, r] : p.modes)
            err << num(p.kn) << ',' << num(r.error) << ',' << to_string(mode) << ','
                << cfg.phi_name << ',' << cfg.example << '\n';
    }

    std::ofstream prof(fs::path(dir) / "profiles.csv");
    prof << "kn,mode,x,rho,T\n";
    for (const auto& p : rec.points) {
        if (p.failure) continue;
        const std::size_t nx = p.t_nodes.size() - 1;
        for (const auto& [mode, r] : p.modes)
            for (std::size_t i = 0; i <= nx; ++i)
                prof << num(p.kn) << ',' << to_string(mode) << ',' << num(double(i) / nx) << ','
                     << num(r.rho[i]) << ',' << num(p.t_nodes[i]) << '\n';
    }

    nlohmann::json j;
    j["example"] = cfg.example;
    j["phi"] = cfg.phi_name;
    j["eta"] = cfg.eta;
    j["n_poly"] = cfg.n_poly;
    j["damping"] = cfg.damping;
    j["velocity_nodes"] = cfg.velocity_nodes;
    j["kinetic"] = {{"nx", cfg.kinetic.nx},
                    {"nv", cfg.kinetic.nv},
                    {"tol", cfg.kinetic_options.tol},
                    {"max_iter", cfg.kinetic_options.max_iter},
                    {"direct", cfg.direct_reference}};
    j["points"] = nlohmann::json::array();
    for (const auto& p : rec.points) {
        nlohmann::json jp;
        jp["kn"] = p.kn;
        if (p.failure) {
            jp["failure"] = *p.failure;
        } else {
            jp["coefficients"] = {{"b0", p.coeffs.b0}, {"b1", p.coeffs.b1}, {"b2", p.coeffs.b2},
                                  {"b3", p.coeffs.b3}, {"b4", p.coeffs.b4}};
            jp["iterations"] = p.iterations;
            jp["kinetic_residual"] = p.kinetic_residual;
            jp["within_bounds"] = p.within_bounds;
            for (const auto& [mode, r] : p.modes) jp["error"][to_string(mode)] = r.error;
        }
        jp["warnings"] = p.warnings;
        jp["seconds"] = p.seconds;
        j["points"].push_back(jp);
    }
    for (const auto& [mode, f] : rec.rates)
        j["rates"][to_string(mode)] = {{"slope", f.slope}, {"intercept", f.intercept},
                                       {"residual", f.residual}};
    std::ofstream(fs::path(dir) / "summary.json") << j.dump(2) << '\n';
}

} // namespace phonon
