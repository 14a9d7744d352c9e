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

#include <atomic>
#include <cmath>

#include "medoids/kernels.hpp"

namespace medoids::kernels {

namespace {

using KernelFn = double (*)(std::span<const double>, std::span<const double>);

struct Dispatch {
    Isa isa;
    KernelFn squared_euclidean;
    KernelFn manhattan;
};

Dispatch make_dispatch(Isa isa) {
#if defined(MEDOIDS_HAVE_AVX2)
    if (isa == Isa::avx2) {
        return {Isa::avx2, detail::squared_euclidean_avx2, detail::manhattan_avx2};
    }
#endif
    return {Isa::scalar, detail::squared_euclidean_scalar, detail::manhattan_scalar};
}

std::atomic<const Dispatch*> g_dispatch{nullptr};

const Dispatch* current() {
    const Dispatch* d = g_dispatch.load(std::memory_order_acquire);
    if (d == nullptr) {
        static Dispatch best = make_dispatch(detect_isa());
        g_dispatch.store(&best, std::memory_order_release);
        return &best;
    }
    return d;
}

}  // namespace

Isa detect_isa() {
#if defined(MEDOIDS_HAVE_AVX2)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return Isa::avx2;
    }
#endif
    return Isa::scalar;
}

Isa active_isa() {
    return current()->isa;
}

Isa select_isa(Isa isa) {
    if (isa == Isa::avx2 && detect_isa() != Isa::avx2) {
        isa = Isa::scalar;
    }
    static Dispatch slots[2] = {make_dispatch(Isa::scalar), make_dispatch(Isa::avx2)};
    g_dispatch.store(&slots[isa == Isa::avx2 ? 1 : 0], std::memory_order_release);
    return active_isa();
}

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::avx2:
            return "avx2";
        case Isa::scalar:
            break;
    }
    return "scalar";
}

double squared_euclidean(std::span<const double> a, std::span<const double> b) {
    return current()->squared_euclidean(a, b);
}

double euclidean(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(current()->squared_euclidean(a, b));
}

double manhattan(std::span<const double> a, std::span<const double> b) {
    return current()->manhattan(a, b);
}

}  // namespace medoids::kernels
