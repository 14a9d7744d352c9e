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

#include <doctest.h>

#include <numeric>

#include "medoids/model.hpp"
#include "oracle.hpp"

using namespace medoids;

namespace {

// a random non-medoid index
std::size_t pick_candidate(Rng& rng, const MedoidState& state, std::size_t n) {
    for (;;) {
        const std::size_t x = static_cast<std::size_t>(rng.below(n));
        if (!state.is_medoid(x)) {
            return x;
        }
    }
}

}  // namespace

TEST_CASE("compute_td on the 6-point fixture") {
    const auto m = oracle::six_point_matrix();
    CHECK(compute_td(m, {1, 4}) == 4.0);  // medoids at values {1,7}
    CHECK(compute_td(m, {2, 4}) == 5.0);  // medoids at values {2,7}
    std::vector<std::size_t> all(6);
    std::iota(all.begin(), all.end(), 0);
    CHECK(compute_td(m, all) == 0.0);  // k = n
}

TEST_CASE("compute_td validates its arguments") {
    const auto m = oracle::six_point_matrix();
    CHECK_THROWS_AS(compute_td(m, {}), std::invalid_argument);
    CHECK_THROWS_AS(compute_td(m, {0, 99}), std::out_of_range);
}

TEST_CASE("rebuild_cache on the 6-point fixture") {
    const auto m = oracle::six_point_matrix();
    MedoidState state{{1, 4}, 4.0};  // values {1,7}
    const auto cache = rebuild_cache(m, state);
    const std::vector<std::size_t> expect_nearest{0, 0, 0, 1, 1, 1};
    const std::vector<double> expect_dn{1, 0, 1, 1, 0, 1};
    CHECK(cache.nearest == expect_nearest);
    CHECK(cache.d_nearest == expect_dn);
    // a medoid is its own nearest at distance zero
    CHECK(cache.nearest[1] == 0);
    CHECK(cache.d_nearest[1] == 0.0);
    CHECK(cache.nearest[4] == 1);
    CHECK(cache.d_nearest[4] == 0.0);
}

TEST_CASE("rebuild_cache breaks distance ties toward the lower slot") {
    DataSet data(3, 1);
    data.at(0, 0) = 0;
    data.at(1, 0) = 2;   // equidistant to 0 and 4
    data.at(2, 0) = 4;
    const auto m = build_matrix(data, Metric::manhattan);
    MedoidState state{{0, 2}, 0.0};
    const auto cache = rebuild_cache(m, state);
    CHECK(cache.nearest[1] == 0);
    CHECK(cache.d_nearest[1] == 2.0);
    CHECK(cache.d_second[1] == 2.0);
}

TEST_CASE("d_second is the infinity sentinel for k=1") {
    const auto m = oracle::six_point_matrix();
    MedoidState state{{2}, 0.0};
    const auto cache = rebuild_cache(m, state);
    for (std::size_t o = 0; o < 6; ++o) {
        CHECK(cache.d_second[o] == kInfinity);
        CHECK(cache.nearest[o] == 0);
    }
}

TEST_CASE("change function cases") {
    const auto m = oracle::six_point_matrix();
    MedoidState state{{2, 4}, 5.0};  // values {2,7}
    const auto cache = rebuild_cache(m, state);

    // o=0 assigned to slot 0; candidate value 1: min{1, 7} - 2 = -1
    CHECK(change(m, cache, 0, 0, 1) == -1.0);
    // candidate farther than second-nearest: d_s - d_n >= 0
    CHECK(change(m, cache, 0, 0, 5) == cache.d_second[0] - cache.d_nearest[0]);
    CHECK(change(m, cache, 0, 0, 5) >= 0.0);
    // other slot, candidate no closer than the current medoid: exactly 0
    CHECK(change(m, cache, 0, 1, 5) == 0.0);
}

TEST_CASE("apply_swap matches full recomputation on the fixture") {
    const auto m = oracle::six_point_matrix();
    MedoidState state{{2, 4}, compute_td(m, {2, 4})};
    auto cache = rebuild_cache(m, state);

    apply_swap(m, state, cache, {0, 1, -1.0});
    CHECK(state.medoids == std::vector<std::size_t>{1, 4});
    CHECK(state.td == 4.0);
    CHECK(oracle::brute_td(m, state.medoids) == 4.0);

    const auto fresh = rebuild_cache(m, state);
    CHECK(cache.nearest == fresh.nearest);
    CHECK(cache.d_nearest == fresh.d_nearest);
    CHECK(cache.d_second == fresh.d_second);
}

TEST_CASE("apply_swap rejects a candidate that is already a medoid") {
    const auto m = oracle::six_point_matrix();
    MedoidState state{{2, 4}, compute_td(m, {2, 4})};
    auto cache = rebuild_cache(m, state);
    CHECK_THROWS_AS(apply_swap(m, state, cache, {0, 4, 0.0}), std::invalid_argument);
}

TEST_CASE("swap then inverse swap restores TD") {
    Rng rng(21);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 8 + rng.below(30);
        const std::size_t k = 2 + rng.below(4);
        const auto data = oracle::uniform_points(n, 2, 3000 + rep);
        const auto m = build_matrix(data, Metric::euclidean);

        MedoidState state;
        state.medoids = random_medoids(n, k, 17 + rep);
        state.td = compute_td(m, state.medoids);
        const double td0 = state.td;
        auto cache = rebuild_cache(m, state);

        const std::size_t slot = static_cast<std::size_t>(rng.below(k));
        const std::size_t out = state.medoids[slot];
        const std::size_t in = pick_candidate(rng, state, n);

        std::uint64_t sink = 0;
        const double delta = detail::swap_delta(m, cache, slot, in, sink);
        apply_swap(m, state, cache, {slot, in, delta});
        const double back = detail::swap_delta(m, cache, slot, out, sink);
        apply_swap(m, state, cache, {slot, out, back});

        CHECK(oracle::close_rel(state.td, td0));
    }
}

TEST_CASE("random swap chains keep cache and TD consistent") {
    // randomized property: after any sequence of swaps, the incremental
    // cache equals a fresh rebuild and the incremental TD matches a full
    // recomputation
    Rng rng(31);
    for (int rep = 0; rep < 30; ++rep) {
        const std::size_t n = 10 + rng.below(40);
        const std::size_t k = 2 + rng.below(5);
        const bool integral = rep % 2 == 0;
        DataSet data(n, 2);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t d = 0; d < 2; ++d) {
                // integer-valued coordinates provoke exact distance ties
                data.at(i, d) =
                    integral ? static_cast<double>(rng.below(6)) : rng.uniform(0.0, 10.0);
            }
        }
        const auto m = build_matrix(data, Metric::manhattan);

        MedoidState state;
        state.medoids = random_medoids(n, k, 500 + rep);
        state.td = compute_td(m, state.medoids);
        auto cache = rebuild_cache(m, state);

        for (int step = 0; step < 12; ++step) {
            const std::size_t slot = static_cast<std::size_t>(rng.below(k));
            const std::size_t in = pick_candidate(rng, state, n);
            std::uint64_t sink = 0;
            const double delta = detail::swap_delta(m, cache, slot, in, sink);
            apply_swap(m, state, cache, {slot, in, delta});

            const auto fresh = rebuild_cache(m, state);
            REQUIRE(cache.nearest == fresh.nearest);
            REQUIRE(cache.d_nearest == fresh.d_nearest);
            REQUIRE(cache.d_second == fresh.d_second);
            REQUIRE(oracle::close_rel(state.td, compute_td(m, state.medoids)));
        }
    }
}

TEST_CASE("per-object changes sum to the brute-force TD delta") {
    Rng rng(41);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 6 + rng.below(25);
        const std::size_t k = 1 + rng.below(std::min<std::size_t>(5, n - 1));
        const auto data = oracle::uniform_points(n, 3, 7000 + rep);
        const auto m = build_matrix(data, Metric::euclidean);

        MedoidState state;
        state.medoids = random_medoids(n, k, 900 + rep);
        state.td = compute_td(m, state.medoids);
        const auto cache = rebuild_cache(m, state);

        const std::size_t slot = static_cast<std::size_t>(rng.below(state.k()));
        const std::size_t in = pick_candidate(rng, state, n);
        std::uint64_t sink = 0;
        const double delta = detail::swap_delta(m, cache, slot, in, sink);
        const double brute = oracle::brute_swap_delta(m, state.medoids, slot, in);
        CHECK(oracle::close_rel(delta, brute));
    }
}

TEST_CASE("medoids never strand an empty cluster") {
    // duplicates force zero distances between a medoid and other objects
    DataSet data(5, 1);
    data.at(0, 0) = 1;
    data.at(1, 0) = 1;
    data.at(2, 0) = 1;
    data.at(3, 0) = 5;
    data.at(4, 0) = 5;
    const auto m = build_matrix(data, Metric::manhattan);
    MedoidState state{{0, 1}, 0.0};  // two identical medoids
    const auto cache = rebuild_cache(m, state);
    CHECK(cache.nearest[0] == 0);
    CHECK(cache.nearest[1] == 1);  // pinned to its own slot despite the tie
    CHECK(cache.d_nearest[1] == 0.0);
}
