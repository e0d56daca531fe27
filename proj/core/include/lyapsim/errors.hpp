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

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lyapsim {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or out-of-domain argument (dimension mismatch, non-finite
// entries, matrix not PSD/PD where required, unnormalized vector, ...).
class InvalidInputError : public Error {
  public:
    using Error::Error;
};

// Input file or JSON document could not be parsed.
class ParseError : public Error {
  public:
    using Error::Error;
};

// Matrix fails the normality requirement [A, A+] = 0.
class NotNormalError : public Error {
  public:
    using Error::Error;
};

// Operator norm / spectral radius at or above 1 where stability is required.
class UnstableMatrixError : public Error {
  public:
    using Error::Error;
};

// Matrix has an eigenvalue with non-negative real part where Hurwitz
// stability is required.
class NotHurwitzError : public Error {
  public:
    using Error::Error;
};

// Density-matrix invariants violated (not Hermitian / not PSD / trace != 1).
class InvalidStateError : public Error {
  public:
    using Error::Error;
};

// Coefficients do not form a valid probability schedule.
class InvalidScheduleError : public Error {
  public:
    using Error::Error;
};

// Requested horizon is below the minimal T* required by the error target.
class InsufficientHorizonError : public Error {
  public:
    using Error::Error;
};

// The Lyapunov operator is singular (eigenvalue pairing lambda_i +
// conj(lambda_j) = 0), so no unique solution exists.
class SingularLyapunovError : public Error {
  public:
    using Error::Error;
};

// A state with (numerically) vanishing trace was requested; the stochastic
// process reaches such states with probability zero.
class DegenerateStateError : public Error {
  public:
    using Error::Error;
};

// A simulated trajectory exceeded its step budget.
class RunawayTrajectoryError : public Error {
  public:
    RunawayTrajectoryError(const std::string& what, std::uint64_t restarts_so_far)
        : Error(what), restarts_so_far(restarts_so_far) {}

    std::uint64_t restarts_so_far;
};

} // namespace lyapsim
