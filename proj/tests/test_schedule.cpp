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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "lyapsim/errors.hpp"
#include "lyapsim/rng.hpp"
#include "lyapsim/schedule.hpp"
#include "test_support.hpp"

using namespace lyapsim;
using namespace lyapsim::testing;

namespace {

void check_schedule_invariants(const ProbabilitySchedule& s) {
    const int T = s.horizon();
    REQUIRE(T >= 0);
    REQUIRE(s.R.size() == s.r.size());
    CHECK(s.r.back() == 1.0); // pinned exactly, not within tolerance
    CHECK(s.R.front() == doctest::Approx(1.0).epsilon(1e-15));
    double product = 1.0;
    double mass = 0.0;
    for (int k = 0; k <= T; ++k) {
        const double rk = s.r[static_cast<std::size_t>(k)];
        CHECK(rk >= 0.0);
        if (k < T) CHECK(rk < 1.0);
        CHECK(std::abs(s.R[static_cast<std::size_t>(k)] - product) <= 1e-12);
        mass += rk * s.R[static_cast<std::size_t>(k)];
        product *= 1.0 - rk;
    }
    CHECK(std::abs(mass - 1.0) <= 1e-10);
}

} // namespace

TEST_SUITE("schedule") {

TEST_CASE("from_coefficients reproduces hand-computed probabilities") {
    const ProbabilitySchedule trivial = from_coefficients({1.0});
    CHECK(trivial.horizon() == 0);
    CHECK(trivial.r[0] == 1.0);
    check_schedule_invariants(trivial);

    // c = (¼,¼,¼,¼): r_k = c_k/(1 − Σ_{j<k} c_j) = ¼, ⅓, ½, 1.
    const ProbabilitySchedule quarters = from_coefficients({0.25, 0.25, 0.25, 0.25});
    CHECK(quarters.r[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(quarters.r[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(quarters.r[2] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(quarters.r[3] == 1.0);
    check_schedule_invariants(quarters);

    // c = (½,¼,¼): running remainders 1, ½, ¼ give r = (½, ½, 1).
    const ProbabilitySchedule halves = from_coefficients({0.5, 0.25, 0.25});
    CHECK(halves.r[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(halves.r[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(halves.r[2] == 1.0);
    check_schedule_invariants(halves);
}

TEST_CASE("from_coefficients rejects invalid vectors, renormalizes tiny drift") {
    CHECK_THROWS_AS(from_coefficients({}), InvalidScheduleError);
    CHECK_THROWS_AS(from_coefficients({0.5, 0.0, 0.5}), InvalidScheduleError);
    CHECK_THROWS_AS(from_coefficients({0.5, -0.1, 0.6}), InvalidScheduleError);
    CHECK_THROWS_AS(from_coefficients({0.3, 0.3}), InvalidScheduleError);

    // Serialization-sized drift of the sum is renormalized.
    const ProbabilitySchedule drifted = from_coefficients({0.5 + 2e-11, 0.5 + 2e-11});
    check_schedule_invariants(drifted);
}

TEST_CASE("uniform schedule closed forms") {
    const ProbabilitySchedule t0 = uniform(0);
    CHECK(t0.horizon() == 0);
    CHECK(t0.r[0] == 1.0);

    const ProbabilitySchedule t3 = uniform(3);
    CHECK(t3.r[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(t3.r[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(t3.r[2] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(t3.r[3] == 1.0);
    CHECK(t3.R[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t3.R[1] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(t3.R[2] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(t3.R[3] == doctest::Approx(0.25).epsilon(1e-15));
    check_schedule_invariants(t3);

    for (int T : {0, 1, 4, 17, 50}) {
        const ProbabilitySchedule s = uniform(T);
        check_schedule_invariants(s);
        for (int k = 0; k <= T; ++k)
            CHECK(std::abs(s.r[static_cast<std::size_t>(k)] * s.R[static_cast<std::size_t>(k)] -
                           1.0 / (T + 1)) <= 1e-14);
    }

    CHECK_THROWS_AS(uniform(-1), InvalidScheduleError);
}

TEST_CASE("uniform equals the constant-coefficient construction") {
    for (int T : {0, 2, 7, 23}) {
        const ProbabilitySchedule direct = uniform(T);
        const ProbabilitySchedule via_coeffs =
            from_coefficients(std::vector<double>(static_cast<std::size_t>(T) + 1,
                                                  1.0 / (T + 1)));
        REQUIRE(direct.r.size() == via_coeffs.r.size());
        for (std::size_t k = 0; k < direct.r.size(); ++k) {
            CHECK(std::abs(direct.r[k] - via_coeffs.r[k]) <= 1e-12);
            CHECK(std::abs(direct.R[k] - via_coeffs.R[k]) <= 1e-12);
        }
    }
}

TEST_CASE("recover_coefficients inverts the construction") {
    const std::vector<double> uniform4 = recover_coefficients(uniform(3));
    for (double c : uniform4) CHECK(c == doctest::Approx(0.25).epsilon(1e-14));

    CHECK(recover_coefficients(from_coefficients({1.0})) ==
          std::vector<double>{1.0});

    SplitMix64 rng(301);
    for (int i = 0; i < 100; ++i) {
        const int length = 1 + static_cast<int>(rng.next() % 50);
        const std::vector<double> c = random_prob_vector(length, rng);
        const std::vector<double> roundtrip = recover_coefficients(from_coefficients(c));
        REQUIRE(roundtrip.size() == c.size());
        for (std::size_t k = 0; k < c.size(); ++k)
            CHECK(std::abs(roundtrip[k] - c[k]) <= 1e-10);
    }
}

TEST_CASE("survival products decrease strictly while stopping is possible") {
    SplitMix64 rng(302);
    for (int i = 0; i < 100; ++i) {
        const int length = 2 + static_cast<int>(rng.next() % 20);
        const ProbabilitySchedule s = from_coefficients(random_prob_vector(length, rng));
        for (std::size_t k = 0; k + 1 < s.R.size(); ++k) CHECK(s.R[k + 1] < s.R[k]);
    }
}

} // TEST_SUITE("schedule")
