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

#include <cstddef>
#include <span>
#include <string_view>

namespace medoids::kernels {

/// Instruction-set variants for the distance kernels. `scalar` is the
/// reference implementation; wider variants must agree with it within a
/// couple of ulps (exactly, for integer-valued inputs).
enum class Isa {
    scalar,
    avx2,
};

/// Best ISA supported by the running CPU.
Isa detect_isa();

/// Currently selected ISA.
Isa active_isa();

/// Select a kernel variant at runtime. Falls back to the best supported
/// variant if `isa` is not available on this CPU; returns the variant
/// actually installed.
Isa select_isa(Isa isa);

std::string_view isa_name(Isa isa);

double squared_euclidean(std::span<const double> a, std::span<const double> b);
double euclidean(std::span<const double> a, std::span<const double> b);
double manhattan(std::span<const double> a, std::span<const double> b);

namespace detail {
double squared_euclidean_scalar(std::span<const double> a, std::span<const double> b);
double manhattan_scalar(std::span<const double> a, std::span<const double> b);
#if defined(MEDOIDS_HAVE_AVX2)
double squared_euclidean_avx2(std::span<const double> a, std::span<const double> b);
double manhattan_avx2(std::span<const double> a, std::span<const double> b);
#endif
}  // namespace detail

}  // namespace medoids::kernels
