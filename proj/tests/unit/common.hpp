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

#include "phonon/phase_space.hpp"

#include <random>

namespace testing_util {

inline phonon::PhaseSlice random_slice(const phonon::VelocityGrid& g, const phonon::MaterialModel& m,
                                       std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    phonon::PhaseSlice s(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(m.bins()));
    for (Eigen::Index k = 0; k < s.values.cols(); ++k)
        for (Eigen::Index j = 0; j < s.values.rows(); ++j) s(j, k) = u(rng);
    return s;
}

inline phonon::MaterialModel example1(double kn = 1.0) {
    return phonon::build_material(phonon::single_frequency_tables(kn));
}

inline phonon::MaterialModel example2(double kn = 1.0,
                                      phonon::FrequencyLayout l = phonon::FrequencyLayout::GridPoints) {
    return phonon::build_material(phonon::multi_frequency_tables(kn, l));
}

inline double max_abs(const Eigen::MatrixXd& a) { return a.cwiseAbs().maxCoeff(); }

} // namespace testing_util
