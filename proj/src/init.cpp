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

#include "medoids/init.hpp"

namespace medoids {

InitMethod parse_init_method(const std::string& name) {
    if (name == "build") return InitMethod::build;
    if (name == "lab") return InitMethod::lab;
    if (name == "kmeanspp") return InitMethod::kmeanspp;
    if (name == "random") return InitMethod::random_uniform;
    if (name == "parkjun") return InitMethod::parkjun;
    throw std::invalid_argument("unknown init method: " + name);
}

std::string_view init_method_name(InitMethod method) {
    switch (method) {
        case InitMethod::build: return "build";
        case InitMethod::lab: return "lab";
        case InitMethod::kmeanspp: return "kmeanspp";
        case InitMethod::random_uniform: return "random";
        case InitMethod::parkjun: return "parkjun";
    }
    return "?";
}

std::vector<std::size_t> random_medoids(std::size_t n, std::size_t k, std::uint64_t seed) {
    detail::check_k(k, n);
    Rng rng(seed);
    std::vector<std::size_t> population(n);
    std::iota(population.begin(), population.end(), 0);
    return rng.sample_without_replacement(std::move(population), k);
}

}  // namespace medoids
