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

#include "lyapsim/schedule.hpp"

#include <cmath>
#include <sstream>

#include "lyapsim/errors.hpp"
#include "lyapsim/linalg.hpp"

namespace lyapsim {

ProbabilitySchedule from_coefficients(std::vector<double> c) {
    if (c.empty()) throw InvalidScheduleError("from_coefficients: coefficient vector is empty");

    double sum = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        if (!(c[k] > 0.0) || !std::isfinite(c[k])) {
            std::ostringstream msg;
            msg << "from_coefficients: coefficient c_" << k << " = " << c[k]
                << " is not strictly positive";
            throw InvalidScheduleError(msg.str());
        }
        sum += c[k];
    }
    if (std::abs(sum - 1.0) > default_tolerance()) {
        std::ostringstream msg;
        msg << "from_coefficients: coefficients sum to " << sum << ", not 1";
        throw InvalidScheduleError(msg.str());
    }
    // Absorb serialization rounding.
    for (double& ck : c) ck /= sum;

    const std::size_t len = c.size();
    ProbabilitySchedule s;
    s.r.resize(len);
    s.R.resize(len);
    double remaining = 1.0; // 1 − Σ_{j<k} c_j, which also equals R_k
    for (std::size_t k = 0; k < len; ++k) {
        s.R[k] = remaining;
        s.r[k] = c[k] / remaining;
        remaining -= c[k];
    }
    // Deterministic stop at the horizon, immune to rounding in the sum.
    s.r[len - 1] = 1.0;
    return s;
}

ProbabilitySchedule uniform(int T) {
    if (T < 0) throw InvalidScheduleError("uniform: horizon must be non-negative");
    const std::size_t len = static_cast<std::size_t>(T) + 1;
    ProbabilitySchedule s;
    s.r.resize(len);
    s.R.resize(len);
    for (std::size_t k = 0; k < len; ++k) {
        s.r[k] = 1.0 / static_cast<double>(len - k);
        s.R[k] = static_cast<double>(len - k) / static_cast<double>(len);
    }
    s.r[len - 1] = 1.0;
    return s;
}

std::vector<double> recover_coefficients(const ProbabilitySchedule& s) {
    if (s.r.empty() || s.r.size() != s.R.size())
        throw InvalidScheduleError("recover_coefficients: malformed schedule");
    std::vector<double> c(s.r.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = s.r[k] * s.R[k];
    return c;
}

} // namespace lyapsim
