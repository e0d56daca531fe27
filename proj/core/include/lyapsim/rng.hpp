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

namespace lyapsim {

namespace detail {

// Finalizer from the SplitMix64 generator (Steele, Lea & Flood 2014).
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

} // namespace detail

// SplitMix64: a tiny counter-based PRNG.  The state advances by a fixed
// increment and the output is a bijective mix of the state, so any number of
// independent streams can be derived from a master seed without coordination.
// Reproducibility does not depend on how work is split across threads.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ull;
        return detail::mix64(state_);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Bernoulli trial; p >= 1 always succeeds, p <= 0 never does.
    bool bernoulli(double p) { return next_double() < p; }

  private:
    std::uint64_t state_;
};

// Derives the seed of the index-th child stream from a master seed.  Distinct
// (master, index) pairs map to distinct, statistically independent streams.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) {
    return detail::mix64(master ^ detail::mix64(index + 0x9e3779b97f4a7c15ull));
}

} // namespace lyapsim
