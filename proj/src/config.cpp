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

#include "phonon/config.hpp"

#include "phonon/errors.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace phonon {

using nlohmann::json;

namespace {

void only_keys(const json& j, std::initializer_list<const char*> keys, const char* where) {
    if (!j.is_object()) throw ConfigurationError(std::string(where) + " must be an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, _] : j.items())
        if (!allowed.count(k))
            throw ConfigurationError("unknown key '" + k + "' in " + where);
}

std::vector<double> numbers(const json& j, const char* key) {
    if (j.is_number()) return {j.get<double>()};
    if (!j.is_array()) throw ConfigurationError(std::string(key) + " must be a number or array");
    std::vector<double> out;
    for (const auto& x : j) {
        if (!x.is_number()) throw ConfigurationError(std::string(key) + " must hold numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

FrequencyLayout layout_from(const std::string& s) {
    if (s == "grid-points") return FrequencyLayout::GridPoints;
    if (s == "bin-centers") return FrequencyLayout::BinCenters;
    throw ConfigurationError("layout must be grid-points or bin-centers, got '" + s + "'");
}

PhaseFunction named_phi(const std::string& s) {
    if (s == "v") return [](double v, std::size_t) { return v; };
    if (s == "v2") return [](double v, std::size_t) { return v * v; };
    throw ConfigurationError("phi must be \"v\", \"v2\" or a table, got '" + s + "'");
}

} // namespace

MaterialTables material_from_json(const json& j) {
    if (j.is_string()) return material_from_json(json{{"preset", j}});
    if (j.contains("preset")) {
        only_keys(j, {"preset", "layout"}, "material");
        const std::string p = j.at("preset").get<std::string>();
        if (p == "example1") return single_frequency_tables(1.0);
        if (p == "example2")
            return multi_frequency_tables(1.0, layout_from(j.value("layout", "grid-points")));
        throw ConfigurationError("unknown material preset '" + p + "'");
    }
    only_keys(j, {"omega", "bin_width", "c_omega", "tau", "vg", "domain_length", "alpha0"},
              "material");
    MaterialTables t;
    t.omega = numbers(j.at("omega"), "omega");
    if (j.contains("bin_width")) t.bin_width = numbers(j.at("bin_width"), "bin_width");
    t.c_omega = numbers(j.at("c_omega"), "c_omega");
    t.tau = numbers(j.at("tau"), "tau");
    t.vg = numbers(j.at("vg"), "vg");
    t.domain_length = j.value("domain_length", 1.0);
    if (j.contains("alpha0")) t.alpha0 = numbers(j.at("alpha0"), "alpha0");
    build_material(t);
    return t;
}

PhaseFunction phi_from_json(const json& j, std::string& name) {
    if (j.is_string()) {
        name = j.get<std::string>();
        return named_phi(name);
    }
    only_keys(j, {"table", "name"}, "phi");
    const json& t = j.at("table");
    only_keys(t, {"v", "value"}, "phi.table");
    const std::vector<double> v = numbers(t.at("v"), "phi.table.v");
    const std::vector<double> f = numbers(t.at("value"), "phi.table.value");
    if (v.size() != f.size() || v.size() < 2)
        throw ConfigurationError("phi table needs matching v/value arrays of length >= 2");
    if (!std::is_sorted(v.begin(), v.end()) || std::adjacent_find(v.begin(), v.end()) != v.end())
        throw ConfigurationError("phi table v must be strictly increasing");
    name = j.value("name", "table");
    return [v, f](double x, std::size_t) {
        if (x <= v.front()) return f.front();
        if (x >= v.back()) return f.back();
        const auto it = std::upper_bound(v.begin(), v.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - v.begin());
        const double s = (x - v[i - 1]) / (v[i] - v[i - 1]);
        return (1.0 - s) * f[i - 1] + s * f[i];
    };
}

std::vector<double> eta_from_json(const json& j, const MaterialTables& material) {
    if (j.is_string()) {
        if (j.get<std::string>() != "tanh")
            throw ConfigurationError("eta must be a number, an array or \"tanh\"");
        std::vector<double> out;
        for (double w : material.omega) out.push_back(tanh_reflection(w));
        return out;
    }
    return numbers(j, "eta");
}

ExperimentConfig experiment_from_json(const json& j) {
    only_keys(j,
              {"example", "material", "phi", "eta", "kn", "n_poly", "damping", "velocity_nodes",
               "kinetic", "modes", "output_dir", "workers"},
              "experiment");
    ExperimentConfig c;
    try {
        c.example = j.value("example", c.example);
        if (j.contains("material")) c.material = material_from_json(j.at("material"));
        if (j.contains("phi")) c.phi = phi_from_json(j.at("phi"), c.phi_name);
        if (j.contains("eta")) c.eta = eta_from_json(j.at("eta"), c.material);
        if (j.contains("kn")) c.kn = numbers(j.at("kn"), "kn");
        c.n_poly = j.value("n_poly", c.n_poly);
        c.damping = j.value("damping", c.damping);
        c.velocity_nodes = j.value("velocity_nodes", c.velocity_nodes);
        if (j.contains("kinetic")) {
            const json& k = j.at("kinetic");
            only_keys(k, {"nx", "nv", "level", "tol", "max_iter", "direct"}, "kinetic");
            if (k.contains("level")) c.kinetic = uniform_kinetic_grid(k.at("level").get<unsigned>());
            c.kinetic.nx = k.value("nx", c.kinetic.nx);
            c.kinetic.nv = k.value("nv", c.kinetic.nv);
            c.kinetic_options.tol = k.value("tol", c.kinetic_options.tol);
            c.kinetic_options.max_iter = k.value("max_iter", c.kinetic_options.max_iter);
            c.direct_reference = k.value("direct", c.direct_reference);
        }
        if (j.contains("modes")) {
            c.modes.clear();
            for (const auto& m : j.at("modes")) c.modes.push_back(parse_limit_mode(m.get<std::string>()));
        }
        c.output_dir = j.value("output_dir", c.output_dir);
        c.workers = j.value("workers", c.workers);
    } catch (const json::exception& e) {
        throw ConfigurationError(std::string("malformed experiment config: ") + e.what());
    }
    validate(c);
    return c;
}

ExperimentConfig load_experiment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigurationError("cannot open config file '" + path + "'");
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::exception& e) {
        throw ConfigurationError("cannot parse '" + path + "': " + e.what());
    }
    return experiment_from_json(j);
}

ExperimentConfig example1_config(const std::string& phi) {
    ExperimentConfig c;
    c.example = "example1";
    c.material = single_frequency_tables(1.0);
    c.phi_name = phi;
    c.phi = named_phi(phi);
    c.eta = {0.5};
    return c;
}

ExperimentConfig example2_config(const std::string& phi, FrequencyLayout layout) {
    ExperimentConfig c;
    c.example = "example2";
    c.material = multi_frequency_tables(1.0, layout);
    c.phi_name = phi;
    c.phi = named_phi(phi);
    c.eta = eta_from_json("tanh", c.material);
    return c;
}

} // namespace phonon
