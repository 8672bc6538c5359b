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

// Command-line entry point: run, robin-coeffs, halfspace, reference.

#include "phonon/config.hpp"
#include "phonon/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace phonon;
using nlohmann::json;

namespace {

struct Overrides {
    std::string config;
    std::string example;
    std::string layout = "grid-points";
    std::string phi;
    std::vector<double> eta;
    std::vector<double> kn;
    std::size_t n_poly = 0;
    double damping = 0.0;
    std::size_t velocity_nodes = 0;
    std::size_t nx = 0, nv = 0;
    double tol = 0.0;
    std::size_t max_iter = 0;
    bool direct = false;
    std::vector<std::string> modes;
    std::string output_dir;
    std::size_t workers = 0;

    void add(CLI::App* app, bool with_config = true) {
        if (with_config) app->add_option("--config", config, "Experiment JSON file");
        app->add_option("--example", example, "Built-in preset")->check(CLI::IsMember({"example1", "example2"}));
        app->add_option("--layout", layout, "Example II frequency layout")
            ->check(CLI::IsMember({"grid-points", "bin-centers"}));
        app->add_option("--phi", phi, "Boundary data (v or v2)")->check(CLI::IsMember({"v", "v2"}));
        app->add_option("--eta", eta, "Reflection coefficient(s)");
        app->add_option("--kn", kn, "Kn sweep (decreasing)");
        app->add_option("--n-poly", n_poly, "Spectral order N");
        app->add_option("--damping", damping, "Damping strength");
        app->add_option("--velocity-nodes", velocity_nodes, "Gauss-Legendre nodes per half");
        app->add_option("--nx", nx, "Kinetic x cells");
        app->add_option("--nv", nv, "Kinetic v cells on [-1,1]");
        app->add_option("--tol", tol, "Source iteration tolerance");
        app->add_option("--max-iter", max_iter, "Source iteration cap");
        app->add_flag("--direct", direct, "Direct sparse reference solve");
        app->add_option("--modes", modes, "Limit modes (robin, dirichlet, dirichlet-both)");
        app->add_option("--output-dir", output_dir, "Output directory");
        app->add_option("--workers", workers, "Worker threads");
    }

    ExperimentConfig build() const {
        ExperimentConfig c;
        if (!config.empty()) c = load_experiment(config);
        else if (example == "example2")
            c = example2_config(phi.empty() ? "v" : phi,
                                layout == "bin-centers" ? FrequencyLayout::BinCenters
                                                        : FrequencyLayout::GridPoints);
        else c = example1_config(phi.empty() ? "v" : phi);
        if (!config.empty() && !phi.empty()) c.phi = phi_from_json(phi, c.phi_name);
        if (!eta.empty()) c.eta = eta;
        if (!kn.empty()) c.kn = kn;
        if (n_poly) c.n_poly = n_poly;
        if (damping > 0.0) c.damping = damping;
        if (velocity_nodes) c.velocity_nodes = velocity_nodes;
        if (nx) c.kinetic.nx = nx;
        if (nv) c.kinetic.nv = nv;
        if (tol > 0.0) c.kinetic_options.tol = tol;
        if (max_iter) c.kinetic_options.max_iter = max_iter;
        if (direct) c.direct_reference = true;
        if (!modes.empty()) {
            c.modes.clear();
            for (const auto& m : modes) c.modes.push_back(parse_limit_mode(m));
        }
        if (!output_dir.empty()) c.output_dir = output_dir;
        if (workers) c.workers = workers;
        validate(c);
        return c;
    }
};

json coeff_json(const RobinCoefficients& b) {
    return {{"b0", b.b0}, {"b1", b.b1}, {"b2", b.b2}, {"b3", b.b3}, {"b4", b.b4}};
}

int cmd_run(const Overrides& o) {
    const ExperimentConfig cfg = o.build();
    const ConvergenceRecord rec = run_experiment(cfg);
    json out;
    out["example"] = cfg.example;
    out["phi"] = cfg.phi_name;
    for (const auto& p : rec.points) {
        json jp{{"kn", p.kn}};
        if (p.failure) jp["failure"] = *p.failure;
        else
            for (const auto& [m, r] : p.modes) jp["error"][to_string(m)] = r.error;
        out["points"].push_back(jp);
    }
    for (const auto& [m, f] : rec.rates) out["rates"][to_string(m)] = f.slope;
    std::cout << out.dump(2) << '\n';
    for (const auto& p : rec.points)
        if (p.failure) return 3;
    return 0;
}

int cmd_robin(const Overrides& o) {
    const ExperimentConfig cfg = o.build();
    json out = json::array();
    for (double kn : cfg.kn) {
        const MaterialModel m = with_kn_avg(build_material(cfg.material), kn);
        const VelocityGrid g = VelocityGrid::gauss_legendre(cfg.velocity_nodes);
        const RobinCoefficients b = compute_robin(sample(g, m, cfg.phi), expand_eta(cfg.eta, m.bins()),
                                                  m, g, cfg.n_poly, cfg.damping);
        json r = coeff_json(b);
        r["kn"] = kn;
        out.push_back(r);
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

struct LayerArgs {
    std::string psi = "v";
    double z_max = 10.0;
    std::size_t points = 41;
    std::string dump;
    bool reflective = false;
};

json matrix_json(const Eigen::MatrixXd& a) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        std::vector<double> r(static_cast<std::size_t>(a.cols()));
        for (Eigen::Index k = 0; k < a.cols(); ++k) r[static_cast<std::size_t>(k)] = a(i, k);
        rows.push_back(r);
    }
    return rows;
}

int cmd_halfspace(const Overrides& o, const LayerArgs& a) {
    const ExperimentConfig cfg = o.build();
    const MaterialModel m = with_kn_avg(build_material(cfg.material), cfg.kn.front());
    const VelocityGrid g = VelocityGrid::gauss_legendre(cfg.velocity_nodes);
    const HalfSpaceSolver solver(m, g, cfg.n_poly, cfg.damping);
    PhaseFunction f;
    std::string name;
    if (a.psi == "one") f = [](double, std::size_t) { return 1.0; };
    else if (a.psi == "kv") f = [&](double v, std::size_t k) { return v * m.kn[k]; };
    else f = phi_from_json(a.psi, name);
    const PhaseSlice psi = sample(g, m, f);
    const HalfSpaceBC bc = a.reflective ? HalfSpaceBC(ReflectiveBC{expand_eta(cfg.eta, m.bins()), psi})
                                        : HalfSpaceBC(DirichletBC{psi});
    const HalfSpaceSolution sol = solver.solve(bc);

    json out{{"theta_inf", sol.theta_inf}, {"flux_residual", sol.flux_residual},
             {"rcond", sol.rcond}, {"warnings", sol.warnings}};
    const PhaseSlice vt = scaled_velocity(m, g);
    for (std::size_t i = 0; i < a.points; ++i) {
        const double z = a.points > 1 ? a.z_max * double(i) / double(a.points - 1) : 0.0;
        const PhaseSlice fz = evaluate(sol, z, solver.basis());
        out["profile"].push_back({{"z", z},
                                  {"density", bracket(fz, m, g)},
                                  {"flux", bracket(PhaseSlice(vt.values.cwiseProduct(fz.values)), m, g)}});
    }
    if (!a.dump.empty()) {
        std::vector<double> lambda(static_cast<std::size_t>(solver.modes().eigenvalues.size()));
        for (std::size_t i = 0; i < lambda.size(); ++i) lambda[i] = solver.modes().eigenvalues(Eigen::Index(i));
        json d{{"a_matrix", matrix_json(solver.system().a_matrix)},
               {"b_matrix", matrix_json(solver.system().b_matrix)},
               {"eigenvalues", lambda},
               {"c0", std::vector<double>(sol.c0.data(), sol.c0.data() + sol.c0.size())},
               {"g0", std::vector<double>(sol.g0.data(), sol.g0.data() + sol.g0.size())}};
        std::ofstream(a.dump) << d.dump(1) << '\n';
    }
    std::cout << out.dump(2) << '\n';
    return 0;
}

int cmd_reference(const Overrides& o) {
    const ExperimentConfig cfg = o.build();
    const MaterialModel m = with_kn_avg(build_material(cfg.material), cfg.kn.front());
    const VelocityGrid kv = cfg.kinetic.velocity();
    const PhaseSlice phi = sample(kv, m, cfg.phi);
    const std::vector<double> eta = expand_eta(cfg.eta, m.bins());
    const KineticSolution s = cfg.direct_reference
                                  ? solve_direct(phi, eta, m, cfg.kinetic)
                                  : solve_steady(phi, eta, m, cfg.kinetic, cfg.kinetic_options);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!cfg.output_dir.empty()) {
        std::filesystem::create_directories(cfg.output_dir);
        file.open(std::filesystem::path(cfg.output_dir) / "reference.csv");
        os = &file;
    }
    *os << "x,T\n";
    const auto xc = cfg.kinetic.centers();
    char buf[64];
    for (std::size_t i = 0; i < xc.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", xc[i], s.temperature[i]);
        *os << buf;
    }
    std::cerr << json{{"iterations", s.iterations}, {"residual", s.residual},
                      {"within_bounds", s.within_bounds}}.dump()
              << '\n';
    return 0;
}

void report(const char* kind, const std::string& msg) {
    std::cerr << json{{"error", kind}, {"message", msg}}.dump() << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robin boundary conditions for the phonon transport diffusion limit"};
    app.require_subcommand(1);

    Overrides run_o, robin_o, layer_o, ref_o;
    LayerArgs layer_a;
    auto* run = app.add_subcommand("run", "Convergence sweep from a config file");
    run->add_option("config_file", run_o.config, "Experiment JSON file");
    run_o.add(run, false);
    auto* robin = app.add_subcommand("robin-coeffs", "Print b0..b4 for each Kn");
    robin_o.add(robin);
    auto* layer = app.add_subcommand("halfspace", "Single half-space solve");
    layer_o.add(layer);
    layer->add_option("--psi", layer_a.psi, "Layer data: one, v, v2, kv");
    layer->add_flag("--reflective", layer_a.reflective, "Reflective wall with --eta");
    layer->add_option("--z-max", layer_a.z_max, "Profile extent");
    layer->add_option("--points", layer_a.points, "Profile samples");
    layer->add_option("--dump", layer_a.dump, "Write A, B, eigenvalues and c0 as JSON");
    auto* ref = app.add_subcommand("reference", "Kinetic reference temperature only");
    ref_o.add(ref);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report("usage", e.what());
        return 64;
    }

    try {
        if (*run) return cmd_run(run_o);
        if (*robin) return cmd_robin(robin_o);
        if (*layer) return cmd_halfspace(layer_o, layer_a);
        if (*ref) return cmd_reference(ref_o);
    } catch (const Error& e) {
        report(e.kind(), e.what());
        return 2;
    } catch (const std::exception& e) {
        report("internal", e.what());
        return 1;
    }
    return 0;
}
