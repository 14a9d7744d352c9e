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
#include <limits>
#include <stdexcept>
#include <vector>

#include "medoids/matrix.hpp"

namespace medoids {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// k distinct medoid object indices plus the loss they achieve. Slot order
/// is meaningful: swaps replace one slot, and ties everywhere prefer the
/// lower slot. Single-writer.
struct MedoidState {
    std::vector<std::size_t> medoids;  // slot -> object index
    double td = 0.0;

    std::size_t k() const { return medoids.size(); }

    std::size_t slot_of(std::size_t object) const {
        for (std::size_t s = 0; s < medoids.size(); ++s) {
            if (medoids[s] == object) {
                return s;
            }
        }
        return npos;
    }
    bool is_medoid(std::size_t object) const { return slot_of(object) != npos; }
};

/// Per-object nearest / second-nearest bookkeeping:
///   nearest[o]   slot of the closest medoid (lowest slot on ties)
///   d_nearest[o] distance to that medoid
///   d_second[o]  distance to the second-closest medoid (+inf when k = 1)
/// A medoid is always assigned to its own slot with distance 0, so no
/// cluster can become empty.
struct AssignmentCache {
    std::vector<std::size_t> nearest;
    std::vector<double> d_nearest;
    std::vector<double> d_second;

    std::size_t size() const { return nearest.size(); }
};

/// A proposed swap: medoid slot `slot` is replaced by non-medoid object
/// `candidate`; `delta_td` is the resulting change in TD (negative improves).
struct SwapCandidate {
    std::size_t slot = npos;
    std::size_t candidate = npos;
    double delta_td = 0.0;
};

namespace detail {

template <DissimilaritySource D>
void check_medoids(const D& dissim, const std::vector<std::size_t>& medoids) {
    if (medoids.empty()) {
        throw std::invalid_argument("medoid list must be nonempty");
    }
    for (const std::size_t m : medoids) {
        if (m >= dissim.size()) {
            throw std::out_of_range("medoid index " + std::to_string(m) + " out of range");
        }
    }
}

/// Recomputes one object's cache entry by scanning all slots. The medoid
/// object itself is pinned to its own slot, which matters when duplicate
/// objects put two medoids at distance 0 of each other.
template <DissimilaritySource D>
void scan_object(const D& dissim, const std::vector<std::size_t>& medoids, std::size_t o,
                 AssignmentCache& cache) {
    std::size_t best_slot = npos;
    double best = kInfinity;
    double second = kInfinity;
    for (std::size_t s = 0; s < medoids.size(); ++s) {
        if (medoids[s] == o) {
            // own slot wins regardless of other zero distances, and nothing
            // can displace it afterwards (no distance is < 0)
            second = std::min(second, best);
            best = 0.0;
            best_slot = s;
            continue;
        }
        const double d = dissim.at(o, medoids[s]);
        if (d < best) {
            second = best;
            best = d;
            best_slot = s;
        } else if (d < second) {
            second = d;
        }
    }
    cache.nearest[o] = best_slot;
    cache.d_nearest[o] = best;
    cache.d_second[o] = second;
}

}  // namespace detail

/// Total deviation (the loss): sum over all objects of the distance to the
/// closest medoid. Left-to-right over ascending object index.
template <DissimilaritySource D>
double compute_td(const D& dissim, const std::vector<std::size_t>& medoids) {
    detail::check_medoids(dissim, medoids);
    double td = 0.0;
    for (std::size_t o = 0; o < dissim.size(); ++o) {
        double best = kInfinity;
        for (const std::size_t m : medoids) {
            best = std::min(best, dissim.at(o, m));
        }
        td += best;
    }
    return td;
}

template <DissimilaritySource D>
AssignmentCache rebuild_cache(const D& dissim, const MedoidState& state) {
    detail::check_medoids(dissim, state.medoids);
    AssignmentCache cache;
    cache.nearest.resize(dissim.size());
    cache.d_nearest.resize(dissim.size());
    cache.d_second.resize(dissim.size());
    for (std::size_t o = 0; o < dissim.size(); ++o) {
        detail::scan_object(dissim, state.medoids, o, cache);
    }
    return cache;
}

/// Per-object contribution to the TD change of swapping slot `slot` with
/// non-medoid `candidate`. Two cases: the object loses its current medoid,
/// or it may only gain by moving to the candidate.
template <DissimilaritySource D>
double change(const D& dissim, const AssignmentCache& cache, std::size_t o, std::size_t slot,
              std::size_t candidate) {
    const double d_oc = dissim.at(o, candidate);
    if (cache.nearest[o] == slot) {
        return std::min(d_oc, cache.d_second[o]) - cache.d_nearest[o];
    }
    return std::min(d_oc - cache.d_nearest[o], 0.0);
}

/// Executes a swap and updates state + cache incrementally. Objects whose
/// entry cannot be fixed up from the cached values alone (the removed medoid
/// may have been their nearest or second-nearest) are rescanned; the fast
/// paths reproduce exactly what a rescan would store.
template <DissimilaritySource D>
void apply_swap(const D& dissim, MedoidState& state, AssignmentCache& cache,
                const SwapCandidate& swap) {
    if (swap.slot >= state.k()) {
        throw std::out_of_range("swap slot out of range");
    }
    if (state.is_medoid(swap.candidate)) {
        throw std::invalid_argument("swap candidate is already a medoid");
    }
    if (swap.candidate >= dissim.size()) {
        throw std::out_of_range("swap candidate out of range");
    }

    const std::size_t slot = swap.slot;
    const std::size_t removed = state.medoids[slot];
    state.medoids[slot] = swap.candidate;
    state.td += swap.delta_td;

    for (std::size_t o = 0; o < dissim.size(); ++o) {
        if (o == swap.candidate) {
            detail::scan_object(dissim, state.medoids, o, cache);
            continue;
        }
        const double d_oc = dissim.at(o, swap.candidate);
        if (cache.nearest[o] == slot) {
            if (d_oc < cache.d_second[o]) {
                cache.d_nearest[o] = d_oc;  // stays in the same slot
            } else {
                detail::scan_object(dissim, state.medoids, o, cache);
            }
        } else {
            const std::size_t cur = cache.nearest[o];
            const bool pinned = state.medoids[cur] == o;  // o is itself a medoid
            if (!pinned && (d_oc < cache.d_nearest[o] ||
                            (d_oc == cache.d_nearest[o] && slot < cur))) {
                cache.d_second[o] = cache.d_nearest[o];
                cache.d_nearest[o] = d_oc;
                cache.nearest[o] = slot;
            } else if (d_oc <= cache.d_second[o]) {
                cache.d_second[o] = d_oc;
            } else if (dissim.at(o, removed) == cache.d_second[o]) {
                // the second-nearest really was the removed medoid (it can
                // never have been closer than d_second, so equality decides)
                detail::scan_object(dissim, state.medoids, o, cache);
            }
        }
    }
}

}  // namespace medoids
