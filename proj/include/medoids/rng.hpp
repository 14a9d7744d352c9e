// Copyright 2026-present the medoids project
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

#include <algorithm>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace medoids {

/// Identifier of the generator scheme, echoed into run metadata so results
/// can be reproduced elsewhere. Draws use mt19937_64 (bit-exact across
/// platforms per the C++ standard); bounded draws and unit doubles avoid
/// std::uniform_*_distribution, whose output is implementation-defined.
inline constexpr std::string_view kRngId = "mt19937_64+splitmix64";

struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

/// Deterministic child-stream seed: stream `stream` of a run seeded with
/// `base`. Used to keep restarts (CLARA, CLARANS numlocal, bench repeats)
/// independently seeded yet reproducible.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    SplitMix64 sm{base ^ (0xA0761D6478BD642Full * (stream + 1))};
    sm.next();
    return sm.next();
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Unbiased draw from [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) {
                return r % bound;
            }
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    /// Standard normal via Box-Muller (polar form avoided to keep the draw
    /// count per call fixed).
    double normal() {
        const double u1 = 1.0 - unit();  // (0,1], keeps log finite
        const double u2 = unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// `count` distinct values from `population`, by partial Fisher-Yates.
    /// The result order is the shuffle order; callers needing index order
    /// sort afterwards.
    std::vector<std::size_t> sample_without_replacement(std::vector<std::size_t> population,
                                                        std::size_t count) {
        count = std::min(count, population.size());
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(below(population.size() - i));
            std::swap(population[i], population[j]);
        }
        population.resize(count);
        return population;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace medoids
