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

#include "medoids/swap.hpp"

namespace medoids {

SwapEngine parse_swap_engine(const std::string& name) {
    if (name == "pam") return SwapEngine::pam;
    if (name == "reynolds") return SwapEngine::reynolds;
    if (name == "fastpam1") return SwapEngine::fastpam1;
    if (name == "fastpam2") return SwapEngine::fastpam2;
    throw std::invalid_argument("unknown swap engine: " + name);
}

std::string_view swap_engine_name(SwapEngine engine) {
    switch (engine) {
        case SwapEngine::pam: return "pam";
        case SwapEngine::reynolds: return "reynolds";
        case SwapEngine::fastpam1: return "fastpam1";
        case SwapEngine::fastpam2: return "fastpam2";
    }
    return "?";
}

}  // namespace medoids
