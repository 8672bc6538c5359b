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

#pragma once

/// @file
/// Exception types shared by every module. Each carries a short machine
/// readable kind string that the CLI forwards in its error JSON.

#include <stdexcept>
#include <string>

namespace phonon {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

/// Non-positive or inconsistent material tables.
class InvalidMaterial : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "invalid_material"; }
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "shape_mismatch"; }
};

/// Singular systems that point at a bad configuration (grid, order, BC data).
class ConfigurationError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "configuration"; }
};

/// The layer spectrum violated a structural assumption (complex eigenvalue,
/// wrong number of non-decaying modes, failed eigen-residual).
class NumericalStructureError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "numerical_structure"; }
};

/// θ∞ recovery with a vanishing denominator (pure reflection η ≡ 1).
class DegenerateRecovery : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "degenerate_recovery"; }
};

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double last_residual)
        : Error(what), last_residual_(last_residual) {}
    const char* kind() const noexcept override { return "convergence"; }
    double last_residual() const noexcept { return last_residual_; }

private:
    double last_residual_;
};

} // namespace phonon
