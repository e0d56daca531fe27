// Copyright 2025 The lyapsim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

namespace lyapsim {

// Bernoulli stopping probabilities r₀..r_T and survival products
// R_k = Π_{j<k}(1 − r_j).  The products r_k·R_k recover the coefficient
// vector, which sums to 1.  r_T is pinned to exactly 1 so a trajectory can
// never overrun the horizon.  Immutable value type.
struct ProbabilitySchedule {
    std::vector<double> r;
    std::vector<double> R;

    int horizon() const { return static_cast<int>(r.size()) - 1; }
};

// Builds the schedule realizing the coefficients c₀..c_T via
// r_k = c_k / (1 − Σ_{j<k} c_j).  Coefficients must be strictly positive and
// sum to 1; sums within 1e-10 of 1 are renormalized, anything worse throws
// InvalidScheduleError.
ProbabilitySchedule from_coefficients(std::vector<double> c);

// The constant-coefficient schedule r_k = 1/(T+1−k), R_k = (T+1−k)/(T+1),
// so that every stopping index is equally likely: r_k·R_k = 1/(T+1).
ProbabilitySchedule uniform(int T);

// Recovers the coefficients c_k = r_k·R_k.
std::vector<double> recover_coefficients(const ProbabilitySchedule& s);

} // namespace lyapsim
