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

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>

#include "medoids/model.hpp"
#include "medoids/rng.hpp"

namespace medoids {

enum class InitMethod {
    build,
    lab,
    kmeanspp,
    random_uniform,
    parkjun,
};

InitMethod parse_init_method(const std::string& name);
std::string_view init_method_name(InitMethod method);

struct InitConfig {
    InitMethod method = InitMethod::build;
    std::uint64_t seed = 0;
    std::optional<std::size_t> lab_sample_size;  // default 10 + ceil(sqrt(n))
};

namespace detail {

inline void check_k(std::size_t k, std::size_t n) {
    if (k < 1 || k >= n) {
        throw std::invalid_argument("k must satisfy 1 <= k < n (k=" + std::to_string(k) +
                                    ", n=" + std::to_string(n) + ")");
    }
}

}  // namespace detail

/// Greedy initialization: the first medoid minimizes the total distance to
/// all objects; each further medoid is the non-medoid whose addition reduces
/// TD the most, using the cached nearest distances. O(n^2 k). Ties prefer
/// the lower object index.
template <DissimilaritySource D>
MedoidState build_init(const D& dissim, std::size_t k) {
    const std::size_t n = dissim.size();
    detail::check_k(k, n);

    MedoidState state;
    std::vector<double> d_nearest(n);

    std::size_t first = npos;
    double first_sum = kInfinity;
    for (std::size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (std::size_t o = 0; o < n; ++o) {
            sum += dissim.at(o, j);
        }
        if (sum < first_sum) {
            first_sum = sum;
            first = j;
        }
    }
    state.medoids.push_back(first);
    state.td = first_sum;
    std::vector<bool> is_medoid(n, false);
    is_medoid[first] = true;
    for (std::size_t o = 0; o < n; ++o) {
        d_nearest[o] = dissim.at(o, first);
    }

    for (std::size_t step = 1; step < k; ++step) {
        std::size_t best = npos;
        double best_delta = kInfinity;
        for (std::size_t j = 0; j < n; ++j) {
            if (is_medoid[j]) {
                continue;
            }
            // the candidate's own contribution drops to zero
            double delta = -d_nearest[j];
            for (std::size_t o = 0; o < n; ++o) {
                if (o == j || is_medoid[o]) {
                    continue;
                }
                const double gain = dissim.at(o, j) - d_nearest[o];
                if (gain < 0.0) {
                    delta += gain;
                }
            }
            if (delta < best_delta) {
                best_delta = delta;
                best = j;
            }
        }
        state.medoids.push_back(best);
        state.td += best_delta;
        is_medoid[best] = true;
        for (std::size_t o = 0; o < n; ++o) {
            const double d = dissim.at(o, best);
            if (d < d_nearest[o]) {
                d_nearest[o] = d;
            }
        }
    }
    return state;
}

/// Linear approximate BUILD: the greedy choice of build_init restricted, per
/// medoid, to a fresh uniform subsample of 10+ceil(sqrt(n)) non-medoids,
/// with the TD change evaluated against the subsample only. O(nk).
template <DissimilaritySource D>
MedoidState lab_init(const D& dissim, std::size_t k, const InitConfig& config) {
    const std::size_t n = dissim.size();
    detail::check_k(k, n);
    const std::size_t sample_target = config.lab_sample_size
        ? *config.lab_sample_size
        : 10 + static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    if (sample_target < 1) {
        throw std::invalid_argument("lab sample size must be positive");
    }
    Rng rng(config.seed);

    MedoidState state;
    std::vector<bool> is_medoid(n, false);
    std::vector<double> d_nearest(n, kInfinity);

    auto draw_sample = [&]() {
        std::vector<std::size_t> pool;
        pool.reserve(n - state.k());
        for (std::size_t o = 0; o < n; ++o) {
            if (!is_medoid[o]) {
                pool.push_back(o);
            }
        }
        auto sample = rng.sample_without_replacement(std::move(pool), sample_target);
        // ascending order so that ties fall to the lowest object index,
        // exactly as in build_init
        std::sort(sample.begin(), sample.end());
        return sample;
    };

    {
        const auto sample = draw_sample();
        std::size_t first = npos;
        double first_sum = kInfinity;
        for (const std::size_t j : sample) {
            double sum = 0.0;
            for (const std::size_t o : sample) {
                if (o != j) {
                    sum += dissim.at(o, j);
                }
            }
            if (sum < first_sum) {
                first_sum = sum;
                first = j;
            }
        }
        state.medoids.push_back(first);
        is_medoid[first] = true;
        state.td = 0.0;
        for (std::size_t o = 0; o < n; ++o) {
            d_nearest[o] = dissim.at(o, first);
            state.td += d_nearest[o];
        }
    }

    for (std::size_t step = 1; step < k; ++step) {
        const auto sample = draw_sample();
        std::size_t best = npos;
        double best_delta = kInfinity;
        for (const std::size_t j : sample) {
            double delta = -d_nearest[j];
            for (const std::size_t o : sample) {
                if (o == j) {
                    continue;
                }
                const double gain = dissim.at(o, j) - d_nearest[o];
                if (gain < 0.0) {
                    delta += gain;
                }
            }
            if (delta < best_delta) {
                best_delta = delta;
                best = j;
            }
        }
        state.medoids.push_back(best);
        is_medoid[best] = true;
        for (std::size_t o = 0; o < n; ++o) {
            const double d = dissim.at(o, best);
            if (d < d_nearest[o]) {
                state.td += d - d_nearest[o];
                d_nearest[o] = d;
            }
        }
    }
    return state;
}

/// Sampling-based seeding: first medoid uniform, every further medoid drawn
/// with probability proportional to its distance to the nearest chosen one.
/// Falls back to a uniform draw among non-medoids when all remaining
/// distances are zero.
template <DissimilaritySource D>
MedoidState kmeanspp_init(const D& dissim, std::size_t k, std::uint64_t seed) {
    const std::size_t n = dissim.size();
    detail::check_k(k, n);
    Rng rng(seed);

    MedoidState state;
    std::vector<bool> is_medoid(n, false);
    std::vector<double> d_nearest(n, kInfinity);

    const std::size_t first = static_cast<std::size_t>(rng.below(n));
    state.medoids.push_back(first);
    is_medoid[first] = true;
    for (std::size_t o = 0; o < n; ++o) {
        d_nearest[o] = dissim.at(o, first);
    }

    for (std::size_t step = 1; step < k; ++step) {
        double total = 0.0;
        for (std::size_t o = 0; o < n; ++o) {
            total += d_nearest[o];
        }
        std::size_t pick = npos;
        if (total > 0.0) {
            const double r = rng.unit() * total;
            double cum = 0.0;
            for (std::size_t o = 0; o < n; ++o) {
                cum += d_nearest[o];
                if (r < cum) {
                    pick = o;
                    break;
                }
            }
            if (pick == npos) {  // numeric edge: r landed on the last weight
                for (std::size_t o = n; o-- > 0;) {
                    if (d_nearest[o] > 0.0) {
                        pick = o;
                        break;
                    }
                }
            }
        } else {
            // duplicate-only remainder
            std::vector<std::size_t> pool;
            for (std::size_t o = 0; o < n; ++o) {
                if (!is_medoid[o]) {
                    pool.push_back(o);
                }
            }
            pick = pool[static_cast<std::size_t>(rng.below(pool.size()))];
        }
        state.medoids.push_back(pick);
        is_medoid[pick] = true;
        for (std::size_t o = 0; o < n; ++o) {
            const double d = dissim.at(o, pick);
            if (d < d_nearest[o]) {
                d_nearest[o] = d;
            }
        }
    }
    state.td = 0.0;
    for (std::size_t o = 0; o < n; ++o) {
        state.td += d_nearest[o];
    }
    return state;
}

/// Centrality ranking: v_j sums d(i,j) normalized by the i-th row sum; the
/// k objects with the smallest v_j are chosen. Rows summing to zero
/// contribute nothing. Deterministic; ties prefer the lower index.
template <DissimilaritySource D>
MedoidState parkjun_init(const D& dissim, std::size_t k) {
    const std::size_t n = dissim.size();
    detail::check_k(k, n);

    std::vector<double> row_sum(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < n; ++l) {
            row_sum[i] += dissim.at(i, l);
        }
    }
    std::vector<double> v(n, 0.0);
    std::vector<double> terms;
    terms.reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
        terms.clear();
        for (std::size_t i = 0; i < n; ++i) {
            if (row_sum[i] > 0.0) {
                terms.push_back(dissim.at(i, j) / row_sum[i]);
            }
        }
        // value-sorted summation: objects whose term multisets coincide (as
        // on symmetric data) get bitwise-equal scores, so the index tie rule
        // below actually sees the tie
        std::sort(terms.begin(), terms.end());
        for (const double t : terms) {
            v[j] += t;
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return v[a] != v[b] ? v[a] < v[b] : a < b;
    });
    MedoidState state;
    state.medoids.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    state.td = compute_td(dissim, state.medoids);
    return state;
}

/// k distinct uniform indices. No dissimilarity source, hence no td.
std::vector<std::size_t> random_medoids(std::size_t n, std::size_t k, std::uint64_t seed);

template <DissimilaritySource D>
MedoidState random_init(const D& dissim, std::size_t k, std::uint64_t seed) {
    MedoidState state;
    state.medoids = random_medoids(dissim.size(), k, seed);
    state.td = compute_td(dissim, state.medoids);
    return state;
}

template <DissimilaritySource D>
MedoidState initialize(const D& dissim, std::size_t k, const InitConfig& config) {
    switch (config.method) {
        case InitMethod::build:
            return build_init(dissim, k);
        case InitMethod::lab:
            return lab_init(dissim, k, config);
        case InitMethod::kmeanspp:
            return kmeanspp_init(dissim, k, config.seed);
        case InitMethod::random_uniform:
            return random_init(dissim, k, config.seed);
        case InitMethod::parkjun:
            return parkjun_init(dissim, k);
    }
    throw std::invalid_argument("unknown init method");
}

}  // namespace medoids
