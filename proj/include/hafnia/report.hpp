/*
 * Copyright 2026 hafnia contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hafnia/rng.hpp"
#include "hafnia/scalar.hpp"

namespace hafnia {

/// Evidence backing an equality-condition diagnosis: which structural facts
/// of the relevant matrix were found.
struct EqualityDiagnosis {
    std::vector<int> zero_rows;  // 1-based
    bool diagonal = false;
    int rank = -1;
    std::string condition;  // the predicted-equality rule, human readable
};

/// One verified theorem instance. Oriented so the asserted relation is
/// lhs >= rhs; slack = lhs - rhs, so holds <=> slack >= 0. In exact mode the
/// comparisons are exact; equality_predicted is only meaningful when
/// equality_applicable (the characterization's hypothesis) is true.
template <typename T>
struct InequalityReport {
    std::string name;
    T lhs{};
    T rhs{};
    bool holds = false;
    T slack{};
    bool equality_observed = false;
    bool equality_applicable = false;
    bool equality_predicted = false;
    EqualityDiagnosis diagnosis;
    std::string detail;
    Seed instance_seed = 0;
    // Monte Carlo extras; zero for exact-mode reports.
    double mc_std_error = 0;
    std::uint64_t mc_samples = 0;

    /// A report is clean when the inequality holds and, where an equality
    /// characterization applies, observation matches prediction.
    bool clean() const {
        return holds && (!equality_applicable || equality_observed == equality_predicted);
    }
};

/// Fills the comparison fields from lhs/rhs (exact comparison semantics).
template <typename T>
InequalityReport<T> make_report(std::string name, T lhs, T rhs) {
    InequalityReport<T> r;
    r.name = std::move(name);
    r.slack = T(lhs - rhs);
    r.holds = !(r.slack < T(0));
    r.equality_observed = r.slack == T(0);
    r.lhs = std::move(lhs);
    r.rhs = std::move(rhs);
    return r;
}

}  // namespace hafnia
