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

#include "medoids/sampling.hpp"

namespace medoids {

namespace detail {

ClaraResult clara_impl(std::size_t n, std::size_t k, const ClaraConfig& config,
                       const ClaraHooks& hooks) {
    check_k(k, n);
    const std::size_t sample_size =
        config.sample_size != 0 ? config.sample_size : 40 + 2 * k;
    if (sample_size <= k) {
        throw std::invalid_argument("clara: sample_size must exceed k");
    }
    if (config.restarts < 1) {
        throw std::invalid_argument("clara: restarts must be >= 1");
    }

    ClaraResult result;
    RunStats& stats = result.stats;
    std::vector<std::size_t> best_medoids;
    double best_td = kInfinity;

    for (std::size_t r = 0; r < config.restarts; ++r) {
        Rng rng(derive_seed(config.seed, 2 * r));

        std::vector<std::size_t> sample;
        if (r > 0 && config.include_previous) {
            sample = best_medoids;
        }
        std::vector<bool> taken(n, false);
        for (const std::size_t m : sample) {
            taken[m] = true;
        }
        std::vector<std::size_t> pool;
        pool.reserve(n - sample.size());
        for (std::size_t o = 0; o < n; ++o) {
            if (!taken[o]) {
                pool.push_back(o);
            }
        }
        auto draws = rng.sample_without_replacement(std::move(pool),
                                                    sample_size - sample.size());
        sample.insert(sample.end(), draws.begin(), draws.end());
        std::sort(sample.begin(), sample.end());

        const DissimilarityMatrix sub = hooks.build_sub(sample);
        InitConfig init = config.init;
        init.seed = derive_seed(config.seed, 2 * r + 1);
        MedoidState sub_state = initialize(sub, k, init);
        AssignmentCache sub_cache = rebuild_cache(sub, sub_state);
        const RunStats rs = run_swap(sub, sub_state, sub_cache, config.engine);
        stats.iterations += rs.iterations;
        stats.swaps_executed += rs.swaps_executed;
        stats.candidate_evaluations += rs.candidate_evaluations;
        stats.change_evals += rs.change_evals;

        std::vector<std::size_t> medoids(k);
        for (std::size_t i = 0; i < k; ++i) {
            medoids[i] = sample[sub_state.medoids[i]];
        }
        // score on the entire data set, from scratch
        double td = 0.0;
        for (std::size_t o = 0; o < n; ++o) {
            double best = kInfinity;
            for (const std::size_t m : medoids) {
                best = std::min(best, o == m ? 0.0 : hooks.full_distance(o, m));
            }
            td += best;
        }
        if (td < best_td) {
            best_td = td;
            best_medoids = std::move(medoids);
        }
    }

    result.state.medoids = std::move(best_medoids);
    result.state.td = best_td;
    stats.final_td = best_td;
    return result;
}

}  // namespace detail

ClaraResult clara(const DissimilarityMatrix& matrix, std::size_t k, const ClaraConfig& config) {
    const std::size_t n = matrix.size();
    const std::size_t sample_size =
        config.sample_size != 0 ? config.sample_size : 40 + 2 * k;
    if (sample_size >= n) {
        return detail::clara_fallback(matrix, k, config);
    }
    detail::ClaraHooks hooks;
    hooks.build_sub = [&](const std::vector<std::size_t>& idx) {
        return submatrix(matrix, idx);
    };
    hooks.full_distance = [&](std::size_t o, std::size_t m) { return matrix.at(o, m); };
    return detail::clara_impl(n, k, config, hooks);
}

ClaraResult clara(const DataSet& data, Metric metric, std::size_t k,
                  const ClaraConfig& config) {
    const std::size_t n = data.size();
    const std::size_t sample_size =
        config.sample_size != 0 ? config.sample_size : 40 + 2 * k;
    if (sample_size >= n) {
        const DissimilarityMatrix full = build_matrix(data, metric);
        ClaraResult result = detail::clara_fallback(full, k, config);
        result.stats.distance_evals += full.evals();
        return result;
    }
    std::uint64_t evals = 0;
    detail::ClaraHooks hooks;
    hooks.build_sub = [&data, metric, &evals](const std::vector<std::size_t>& idx) {
        DissimilarityMatrix sub = submatrix(data, metric, idx);
        evals += sub.evals();
        return sub;
    };
    hooks.full_distance = [&data, metric, &evals](std::size_t o, std::size_t m) {
        ++evals;
        return metric_distance(metric, data.row(o), data.row(m));
    };
    ClaraResult result = detail::clara_impl(n, k, config, hooks);
    result.stats.distance_evals = evals;
    return result;
}

}  // namespace medoids
