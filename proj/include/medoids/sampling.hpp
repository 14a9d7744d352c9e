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
#include <functional>

#include "medoids/init.hpp"
#include "medoids/swap.hpp"

namespace medoids {

/// Subsample-and-refine configuration. Defaults follow the classic
/// parameterization (sample 40+2k, 5 restarts); the x2 preset doubles both.
struct ClaraConfig {
    std::size_t sample_size = 0;  // 0 = 40 + 2k
    std::size_t restarts = 5;
    SwapConfig engine;
    InitConfig init;
    std::uint64_t seed = 0;
    /// After the first restart, later subsamples always contain the best
    /// medoids found so far.
    bool include_previous = true;
};

struct ClaraResult {
    MedoidState state;  // medoid indices into the full data set
    RunStats stats;
    bool full_data_fallback = false;
};

/// Randomized-descent configuration. The attempt budget p is the number of
/// consecutive non-improving draws before a local search stops; in fast mode
/// every draw inspects all k slots of one sampled non-medoid, and the budget
/// shrinks by a factor of k to keep the number of considered edges level.
struct ClaransConfig {
    std::uint64_t attempts = 0;      // 0 = ceil(1.25% * k*(n-k)), floored below
    std::uint64_t min_attempts = 250;
    std::uint64_t numlocal = 2;
    std::uint64_t seed = 0;
};

struct ClaransResult {
    MedoidState state;
    RunStats stats;
    std::uint64_t attempt_budget = 0;  // per-local consecutive-failure budget
};

namespace detail {

struct ClaraHooks {
    std::function<DissimilarityMatrix(const std::vector<std::size_t>&)> build_sub;
    std::function<double(std::size_t, std::size_t)> full_distance;
    std::function<std::uint64_t()> distance_evals;  // cumulative, data-backed only
};

template <DissimilaritySource D>
ClaraResult clara_fallback(const D& dissim, std::size_t k, const ClaraConfig& config) {
    ClaraResult result;
    result.full_data_fallback = true;
    InitConfig init = config.init;
    init.seed = derive_seed(config.seed, 1);
    result.state = initialize(dissim, k, init);
    auto cache = rebuild_cache(dissim, result.state);
    result.stats = run_swap(dissim, result.state, cache, config.engine);
    result.state.td = compute_td(dissim, result.state.medoids);
    result.stats.final_td = result.state.td;
    return result;
}

ClaraResult clara_impl(std::size_t n, std::size_t k, const ClaraConfig& config,
                       const ClaraHooks& hooks);

}  // namespace detail

/// Repeated refinement on random subsamples; every restart's medoids are
/// scored by the TD over the entire data set (recomputed from scratch) and
/// the best scoring set wins. With a sample at least as large as the data it
/// degenerates to one direct run on the full data, flagged in the result.
ClaraResult clara(const DataSet& data, Metric metric, std::size_t k, const ClaraConfig& config);
ClaraResult clara(const DissimilarityMatrix& matrix, std::size_t k, const ClaraConfig& config);

/// Randomized greedy descent over the swap graph: draw a (slot, non-medoid)
/// pair, follow the first improving edge, stop a local search after
/// `attempts` consecutive non-improving draws; best of numlocal starts wins.
template <DissimilaritySource D>
ClaransResult clarans(const D& dissim, std::size_t k, const ClaransConfig& config);

/// Same search, but each draw samples only the non-medoid and evaluates all
/// k slots at once, taking the best improving slot; the attempt budget is
/// divided by k so the number of considered edges matches clarans.
template <DissimilaritySource D>
ClaransResult fastclarans(const D& dissim, std::size_t k, const ClaransConfig& config);

namespace detail {

/// One draw's view of the dissimilarities: the column of the drawn candidate
/// is computed once up front and served from memory, everything else passes
/// through. Discarded after the draw, so nothing is memoized across draws.
template <DissimilaritySource D>
class CandidateColumn {
  public:
    CandidateColumn(const D& dissim, std::size_t candidate)
        : dissim_(&dissim), candidate_(candidate), column_(dissim.size()) {
        for (std::size_t o = 0; o < dissim.size(); ++o) {
            column_[o] = dissim.at(o, candidate);
        }
    }

    std::size_t size() const { return dissim_->size(); }
    double at(std::size_t i, std::size_t j) const {
        if (j == candidate_) {
            return column_[i];
        }
        if (i == candidate_) {
            return column_[j];
        }
        return dissim_->at(i, j);
    }

  private:
    const D* dissim_;
    std::size_t candidate_;
    std::vector<double> column_;
};

template <DissimilaritySource D>
ClaransResult clarans_impl(const D& dissim, std::size_t k, const ClaransConfig& config,
                           bool fast_mode) {
    const std::size_t n = dissim.size();
    check_k(k, n);
    if (config.numlocal < 1) {
        throw std::invalid_argument("numlocal must be >= 1");
    }
    std::uint64_t p = config.attempts;
    if (p == 0) {
        p = static_cast<std::uint64_t>(
            std::ceil(0.0125 * static_cast<double>(k) * static_cast<double>(n - k)));
        p = std::max(p, config.min_attempts);
    }
    p = std::max<std::uint64_t>(p, 1);
    const std::uint64_t budget = fast_mode ? std::max<std::uint64_t>(1, p / k) : p;

    ClaransResult result;
    result.attempt_budget = budget;
    RunStats& stats = result.stats;
    double best_td = kInfinity;

    std::vector<double> dtd(k);
    for (std::uint64_t local = 0; local < config.numlocal; ++local) {
        Rng rng(derive_seed(config.seed, local));

        MedoidState state;
        {
            std::vector<std::size_t> population(n);
            std::iota(population.begin(), population.end(), 0);
            state.medoids = rng.sample_without_replacement(std::move(population), k);
        }
        auto cache = rebuild_cache(dissim, state);
        state.td = 0.0;
        for (std::size_t o = 0; o < n; ++o) {
            state.td += cache.d_nearest[o];
        }
        auto is_medoid = medoid_flags(state, n);

        auto draw_non_medoid = [&]() {
            for (;;) {
                const std::size_t x = static_cast<std::size_t>(rng.below(n));
                if (!is_medoid[x]) {
                    return x;
                }
            }
        };

        std::uint64_t fails = 0;
        while (fails < budget) {
            ++stats.iterations;
            if (!fast_mode) {
                const std::size_t slot = static_cast<std::size_t>(rng.below(k));
                const std::size_t x = draw_non_medoid();
                const CandidateColumn<D> column(dissim, x);
                ++stats.candidate_evaluations;
                const double delta = swap_delta(column, cache, slot, x, stats.change_evals);
                if (delta < 0.0) {
                    const std::size_t out = state.medoids[slot];
                    apply_swap(column, state, cache, {slot, x, delta});
                    is_medoid[out] = false;
                    is_medoid[x] = true;
                    ++stats.swaps_executed;
                    fails = 0;
                } else {
                    ++fails;
                }
            } else {
                const std::size_t x = draw_non_medoid();
                const CandidateColumn<D> column(dissim, x);
                stats.candidate_evaluations += k;
                slot_deltas(column, cache, x, dtd, stats.change_evals);
                std::size_t slot = 0;
                for (std::size_t s = 1; s < k; ++s) {
                    if (dtd[s] < dtd[slot]) {
                        slot = s;
                    }
                }
                if (dtd[slot] < 0.0) {
                    const std::size_t out = state.medoids[slot];
                    apply_swap(column, state, cache, {slot, x, dtd[slot]});
                    is_medoid[out] = false;
                    is_medoid[x] = true;
                    ++stats.swaps_executed;
                    fails = 0;
                } else {
                    ++fails;
                }
            }
        }
        if (state.td < best_td) {
            best_td = state.td;
            result.state = state;
        }
    }
    stats.final_td = result.state.td;
    return result;
}

}  // namespace detail

template <DissimilaritySource D>
ClaransResult clarans(const D& dissim, std::size_t k, const ClaransConfig& config) {
    return detail::clarans_impl(dissim, k, config, false);
}

template <DissimilaritySource D>
ClaransResult fastclarans(const D& dissim, std::size_t k, const ClaransConfig& config) {
    return detail::clarans_impl(dissim, k, config, true);
}

}  // namespace medoids
