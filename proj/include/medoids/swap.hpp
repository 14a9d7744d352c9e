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
#include <string>

#include "medoids/model.hpp"

namespace medoids {

enum class SwapEngine {
    pam,
    reynolds,
    fastpam1,
    fastpam2,
};

SwapEngine parse_swap_engine(const std::string& name);
std::string_view swap_engine_name(SwapEngine engine);

struct SwapConfig {
    SwapEngine engine = SwapEngine::pam;
    /// Recheck tolerance for multi-candidate execution: a pending swap is
    /// executed only if its recomputed delta is <= tau * stored delta.
    /// tau=1 keeps only swaps unaffected by earlier ones, tau=0 keeps any
    /// swap that still improves.
    double tau = 0.0;
    std::uint64_t max_iter = 0;  // 0 = run to convergence
    bool record_trace = false;
};

struct SwapTraceRow {
    std::uint64_t iteration;
    std::size_t slot;
    std::size_t out_index;
    std::size_t in_index;
    double delta_td;
};

struct RunStats {
    std::uint64_t iterations = 0;
    std::uint64_t swaps_executed = 0;
    /// (slot, candidate) pairs considered.
    std::uint64_t candidate_evaluations = 0;
    /// Elementary loss-change accumulations (change-function terms and
    /// per-slot updates); the unit in which the evaluation-count speedups
    /// are measured.
    std::uint64_t change_evals = 0;
    /// On-demand metric evaluations (matrix-free runs only).
    std::uint64_t distance_evals = 0;
    /// Matrix reads, when the matrix had lookup counting enabled.
    std::uint64_t lookups = 0;
    double final_td = 0.0;
    bool truncated = false;
    std::vector<SwapTraceRow> trace;
};

namespace detail {

inline std::vector<bool> medoid_flags(const MedoidState& state, std::size_t n) {
    std::vector<bool> flags(n, false);
    for (const std::size_t m : state.medoids) {
        flags[m] = true;
    }
    return flags;
}

/// Delta TD of swapping `slot` with non-medoid `candidate`, evaluated the
/// way the classic scan does: the candidate's own gain plus one change term
/// per other object, ascending.
template <DissimilaritySource D>
double swap_delta(const D& dissim, const AssignmentCache& cache, std::size_t slot,
                  std::size_t candidate, std::uint64_t& change_evals) {
    double delta = -cache.d_nearest[candidate];
    for (std::size_t o = 0; o < dissim.size(); ++o) {
        if (o == candidate) {
            continue;
        }
        delta += change(dissim, cache, o, slot, candidate);
        ++change_evals;
    }
    return delta;
}

}  // namespace detail

/// Best single swap over all k(n-k) pairs, ties to the lexicographically
/// lowest (slot, candidate). candidate == npos if nothing improves. This is
/// also the local-optimality certificate used by the tests.
template <DissimilaritySource D>
SwapCandidate best_single_swap(const D& dissim, const MedoidState& state,
                               const AssignmentCache& cache) {
    const auto is_medoid = detail::medoid_flags(state, dissim.size());
    SwapCandidate best;
    best.delta_td = 0.0;
    std::uint64_t sink = 0;
    for (std::size_t slot = 0; slot < state.k(); ++slot) {
        for (std::size_t j = 0; j < dissim.size(); ++j) {
            if (is_medoid[j]) {
                continue;
            }
            const double delta = detail::swap_delta(dissim, cache, slot, j, sink);
            if (delta < best.delta_td) {
                best = {slot, j, delta};
            }
        }
    }
    return best;
}

/// Classic steepest-descent refinement: every iteration scans all k(n-k)
/// swaps and executes the single best strictly improving one.
template <DissimilaritySource D>
RunStats pam_swap(const D& dissim, MedoidState& state, AssignmentCache& cache,
                  const SwapConfig& config) {
    const std::size_t n = dissim.size();
    RunStats stats;
    for (;;) {
        if (config.max_iter != 0 && stats.iterations == config.max_iter) {
            stats.truncated = true;
            break;
        }
        ++stats.iterations;
        const auto is_medoid = detail::medoid_flags(state, n);
        SwapCandidate best;
        best.delta_td = 0.0;
        for (std::size_t slot = 0; slot < state.k(); ++slot) {
            for (std::size_t j = 0; j < n; ++j) {
                if (is_medoid[j]) {
                    continue;
                }
                ++stats.candidate_evaluations;
                const double delta =
                    detail::swap_delta(dissim, cache, slot, j, stats.change_evals);
                if (delta < best.delta_td) {
                    best = {slot, j, delta};
                }
            }
        }
        if (best.candidate == npos) {
            break;
        }
        const std::size_t out = state.medoids[best.slot];
        apply_swap(dissim, state, cache, best);
        ++stats.swaps_executed;
        if (config.record_trace) {
            stats.trace.push_back(
                {stats.iterations, best.slot, out, best.candidate, best.delta_td});
        }
    }
    stats.final_td = state.td;
    return stats;
}

/// Same steepest descent as pam_swap with the removal loss of each medoid
/// precomputed per iteration, so each candidate evaluation only accumulates
/// addition gains. Chooses exactly the same swaps as pam_swap. Requires
/// k >= 2 (the removal loss of a sole medoid is unbounded).
///
/// The decomposed scan value can differ from the change-form value by a few
/// ulps, which matters twice: swaps whose true delta is exactly zero (two
/// objects that only serve each other trading the medoid role) read as tiny
/// improvements in both directions and would be swapped forever, and two
/// near-tied candidates can have their order flipped. The scan therefore
/// only shortlists every pair within a noise window of its running best;
/// the shortlist is re-evaluated in change form and the winner is chosen
/// with the same strict comparison pam_swap uses, so the executed swap and
/// its recorded delta match pam_swap bit for bit.
template <DissimilaritySource D>
RunStats reynolds_swap(const D& dissim, MedoidState& state, AssignmentCache& cache,
                       const SwapConfig& config) {
    const std::size_t n = dissim.size();
    if (state.k() < 2) {
        throw std::invalid_argument("reynolds_swap requires k >= 2");
    }
    RunStats stats;
    std::vector<double> removal(state.k());
    struct ScanEntry {
        std::size_t slot;
        std::size_t candidate;
        double scan;
    };
    std::vector<ScanEntry> shortlist;
    const auto window = [](double best_scan) {
        return 1e-8 * std::max(1.0, std::fabs(best_scan));
    };
    for (;;) {
        if (config.max_iter != 0 && stats.iterations == config.max_iter) {
            stats.truncated = true;
            break;
        }
        ++stats.iterations;
        const auto is_medoid = detail::medoid_flags(state, n);

        std::fill(removal.begin(), removal.end(), 0.0);
        for (std::size_t o = 0; o < n; ++o) {
            removal[cache.nearest[o]] += cache.d_second[o] - cache.d_nearest[o];
        }

        shortlist.clear();
        double best_scan = 0.0;
        for (std::size_t slot = 0; slot < state.k(); ++slot) {
            for (std::size_t j = 0; j < n; ++j) {
                if (is_medoid[j]) {
                    continue;
                }
                ++stats.candidate_evaluations;
                // after virtually removing the medoid, each object is served
                // at d_second within the cluster and d_nearest outside it
                double delta = removal[slot] -
                               (cache.nearest[j] == slot ? cache.d_second[j]
                                                         : cache.d_nearest[j]);
                for (std::size_t o = 0; o < n; ++o) {
                    if (o == j) {
                        continue;
                    }
                    const double served = cache.nearest[o] == slot ? cache.d_second[o]
                                                                   : cache.d_nearest[o];
                    const double gain = dissim.at(o, j) - served;
                    if (gain < 0.0) {
                        delta += gain;
                    }
                    ++stats.change_evals;
                }
                if (delta < best_scan) {
                    best_scan = delta;
                    std::erase_if(shortlist, [&](const ScanEntry& e) {
                        return e.scan > best_scan + window(best_scan);
                    });
                }
                if (delta <= best_scan + window(best_scan)) {
                    shortlist.push_back({slot, j, delta});
                }
            }
        }

        // shortlist is in (slot, candidate) scan order; the strict < keeps
        // the first of bitwise-equal change-form values, as pam does
        SwapCandidate best;
        best.delta_td = 0.0;
        for (const ScanEntry& entry : shortlist) {
            const double canonical = detail::swap_delta(dissim, cache, entry.slot,
                                                        entry.candidate, stats.change_evals);
            if (canonical < best.delta_td) {
                best = {entry.slot, entry.candidate, canonical};
            }
        }
        if (best.candidate == npos) {
            break;
        }
        const std::size_t out = state.medoids[best.slot];
        apply_swap(dissim, state, cache, best);
        ++stats.swaps_executed;
        if (config.record_trace) {
            stats.trace.push_back(
                {stats.iterations, best.slot, out, best.candidate, best.delta_td});
        }
    }
    stats.final_td = state.td;
    return stats;
}

namespace detail {

/// One candidate's loss-change array over all slots: dtd[s] is the delta of
/// swapping slot s with `candidate`. The per-object work is O(1) except when
/// the candidate is closer than the object's current medoid, which reassigns
/// the object no matter which medoid leaves.
template <DissimilaritySource D>
void slot_deltas(const D& dissim, const AssignmentCache& cache, std::size_t candidate,
                 std::vector<double>& dtd, std::uint64_t& change_evals) {
    const std::size_t k = dtd.size();
    std::fill(dtd.begin(), dtd.end(), -cache.d_nearest[candidate]);
    for (std::size_t o = 0; o < dissim.size(); ++o) {
        if (o == candidate) {
            continue;
        }
        const double d_oj = dissim.at(o, candidate);
        const std::size_t nearest_o = cache.nearest[o];
        const double dn = cache.d_nearest[o];
        dtd[nearest_o] += std::min(d_oj, cache.d_second[o]) - dn;
        ++change_evals;
        if (d_oj < dn) {  // reassignment check
            const double gain = d_oj - dn;
            for (std::size_t s = 0; s < k; ++s) {
                if (s != nearest_o) {
                    dtd[s] += gain;
                    ++change_evals;
                }
            }
        }
    }
}

}  // namespace detail

/// Loop-reordered steepest descent: iterates candidates outermost and keeps
/// one loss-change accumulator per slot, skipping the per-slot loop whenever
/// the candidate cannot win the object over. Produces the identical swap
/// trace, iteration count, and final TD as pam_swap.
template <DissimilaritySource D>
RunStats fastpam1_swap(const D& dissim, MedoidState& state, AssignmentCache& cache,
                       const SwapConfig& config) {
    const std::size_t n = dissim.size();
    RunStats stats;
    std::vector<double> dtd(state.k());
    for (;;) {
        if (config.max_iter != 0 && stats.iterations == config.max_iter) {
            stats.truncated = true;
            break;
        }
        ++stats.iterations;
        const auto is_medoid = detail::medoid_flags(state, n);
        SwapCandidate best;
        best.delta_td = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (is_medoid[j]) {
                continue;
            }
            stats.candidate_evaluations += state.k();
            detail::slot_deltas(dissim, cache, j, dtd, stats.change_evals);
            std::size_t slot = 0;
            for (std::size_t s = 1; s < state.k(); ++s) {
                if (dtd[s] < dtd[slot]) {
                    slot = s;
                }
            }
            // scanning candidates outermost, ties must fall to the lower
            // slot to match the (slot, candidate) order of the classic scan
            if (dtd[slot] < best.delta_td ||
                (best.candidate != npos && dtd[slot] == best.delta_td && slot < best.slot)) {
                best = {slot, j, dtd[slot]};
            }
        }
        if (best.candidate == npos) {
            break;
        }
        const std::size_t out = state.medoids[best.slot];
        apply_swap(dissim, state, cache, best);
        ++stats.swaps_executed;
        if (config.record_trace) {
            stats.trace.push_back(
                {stats.iterations, best.slot, out, best.candidate, best.delta_td});
        }
    }
    stats.final_td = state.td;
    return stats;
}

/// Multi-candidate variant: each scan remembers the best candidate per slot,
/// then executes them best-first, recomputing every pending delta after each
/// executed swap and keeping it only if it passes the tau tolerance against
/// the stored value. Converges when a full scan finds no improving swap, so
/// the final state is single-swap locally optimal.
template <DissimilaritySource D>
RunStats fastpam2_swap(const D& dissim, MedoidState& state, AssignmentCache& cache,
                       const SwapConfig& config) {
    const std::size_t n = dissim.size();
    if (config.tau < 0.0 || config.tau > 1.0) {
        throw std::invalid_argument("tau must be within [0,1]");
    }
    RunStats stats;
    const std::size_t k = state.k();
    std::vector<double> dtd(k);
    std::vector<double> best_delta(k);
    std::vector<std::size_t> best_x(k);
    for (;;) {
        if (config.max_iter != 0 && stats.iterations == config.max_iter) {
            stats.truncated = true;
            break;
        }
        ++stats.iterations;
        const auto is_medoid = detail::medoid_flags(state, n);
        std::fill(best_delta.begin(), best_delta.end(), 0.0);
        std::fill(best_x.begin(), best_x.end(), npos);
        for (std::size_t j = 0; j < n; ++j) {
            if (is_medoid[j]) {
                continue;
            }
            stats.candidate_evaluations += k;
            detail::slot_deltas(dissim, cache, j, dtd, stats.change_evals);
            for (std::size_t s = 0; s < k; ++s) {
                if (dtd[s] < best_delta[s]) {
                    best_delta[s] = dtd[s];
                    best_x[s] = j;
                }
            }
        }

        bool any = false;
        for (std::size_t s = 0; s < k; ++s) {
            any = any || best_delta[s] < 0.0;
        }
        if (!any) {
            break;
        }

        for (;;) {
            std::size_t slot = 0;
            for (std::size_t s = 1; s < k; ++s) {
                if (best_delta[s] < best_delta[slot]) {
                    slot = s;
                }
            }
            if (best_delta[slot] >= 0.0) {
                break;
            }
            const std::size_t in = best_x[slot];
            if (state.is_medoid(in)) {
                // an earlier swap of this round already promoted the object
                best_delta[slot] = 0.0;
                continue;
            }
            const std::size_t out = state.medoids[slot];
            const SwapCandidate swap{slot, in, best_delta[slot]};
            apply_swap(dissim, state, cache, swap);
            ++stats.swaps_executed;
            if (config.record_trace) {
                stats.trace.push_back({stats.iterations, slot, out, in, swap.delta_td});
            }
            best_delta[slot] = 0.0;

            for (std::size_t s = 0; s < k; ++s) {
                if (best_delta[s] >= 0.0) {
                    continue;
                }
                if (state.is_medoid(best_x[s])) {
                    best_delta[s] = 0.0;
                    continue;
                }
                ++stats.candidate_evaluations;
                const double fresh =
                    detail::swap_delta(dissim, cache, s, best_x[s], stats.change_evals);
                best_delta[s] = fresh <= config.tau * best_delta[s] ? fresh : 0.0;
            }
        }
    }
    stats.final_td = state.td;
    return stats;
}

/// Alternating refinement: recompute each cluster's medoid among its current
/// members, then reassign every object to its nearest medoid; stops when TD
/// no longer decreases. Misses improvements that require reassigning members
/// across clusters, so it generally converges to worse solutions than the
/// swap engines.
template <DissimilaritySource D>
RunStats parkjun_refine(const D& dissim, MedoidState& state, AssignmentCache& cache,
                        const SwapConfig& config = {}) {
    const std::size_t n = dissim.size();
    RunStats stats;
    double prev_td = state.td;
    for (;;) {
        if (config.max_iter != 0 && stats.iterations == config.max_iter) {
            stats.truncated = true;
            break;
        }
        ++stats.iterations;
        bool changed = false;
        std::vector<std::size_t> members;
        for (std::size_t slot = 0; slot < state.k(); ++slot) {
            members.clear();
            for (std::size_t o = 0; o < n; ++o) {
                if (cache.nearest[o] == slot) {
                    members.push_back(o);
                }
            }
            const std::size_t incumbent = state.medoids[slot];
            std::size_t best = incumbent;
            double best_sum = 0.0;
            for (const std::size_t o : members) {
                best_sum += dissim.at(o, incumbent);
            }
            for (const std::size_t cand : members) {
                if (cand == incumbent) {
                    continue;
                }
                ++stats.candidate_evaluations;
                double sum = 0.0;
                for (const std::size_t o : members) {
                    sum += dissim.at(o, cand);
                    ++stats.change_evals;
                }
                // strict improvement only: the incumbent survives ties
                if (sum < best_sum) {
                    best_sum = sum;
                    best = cand;
                }
            }
            if (best != incumbent) {
                state.medoids[slot] = best;
                ++stats.swaps_executed;
                changed = true;
            }
        }
        cache = rebuild_cache(dissim, state);
        double td = 0.0;
        for (std::size_t o = 0; o < n; ++o) {
            td += cache.d_nearest[o];
        }
        state.td = td;
        if (!changed || td >= prev_td) {
            break;
        }
        prev_td = td;
    }
    stats.final_td = state.td;
    return stats;
}

template <DissimilaritySource D>
RunStats run_swap(const D& dissim, MedoidState& state, AssignmentCache& cache,
                  const SwapConfig& config) {
    switch (config.engine) {
        case SwapEngine::pam:
            return pam_swap(dissim, state, cache, config);
        case SwapEngine::reynolds:
            return reynolds_swap(dissim, state, cache, config);
        case SwapEngine::fastpam1:
            return fastpam1_swap(dissim, state, cache, config);
        case SwapEngine::fastpam2:
            return fastpam2_swap(dissim, state, cache, config);
    }
    throw std::invalid_argument("unknown swap engine");
}

}  // namespace medoids
