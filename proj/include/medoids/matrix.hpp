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

#include <atomic>
#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "medoids/dataset.hpp"

namespace medoids {

/// Anything the algorithms can read pairwise dissimilarities from.
template <typename D>
concept DissimilaritySource = requires(const D& d, std::size_t i, std::size_t j) {
    { d.at(i, j) } -> std::convertible_to<double>;
    { d.size() } -> std::convertible_to<std::size_t>;
};

/// Symmetric nonnegative dissimilarities over n objects, stored as the strict
/// lower triangle (diagonal fixed at 0). Immutable after construction and
/// safe to share among concurrent readers.
///
/// Two counters, matching two distinct costs:
///  - evals(): primitive dissimilarity evaluations spent building the matrix
///    (0 for a matrix loaded from a file);
///  - lookups(): matrix reads by the algorithms, counted only while
///    set_count_lookups(true) is in effect.
class DissimilarityMatrix {
  public:
    DissimilarityMatrix() = default;
    DissimilarityMatrix(std::size_t n, std::vector<double> lower_triangle, std::uint64_t evals)
        : n_(n), values_(std::move(lower_triangle)), evals_(evals) {}

    DissimilarityMatrix(DissimilarityMatrix&& other) noexcept
        : n_(other.n_),
          values_(std::move(other.values_)),
          evals_(other.evals_),
          count_lookups_(other.count_lookups_),
          lookups_(other.lookups_.load(std::memory_order_relaxed)) {}
    DissimilarityMatrix& operator=(DissimilarityMatrix&& other) noexcept {
        n_ = other.n_;
        values_ = std::move(other.values_);
        evals_ = other.evals_;
        count_lookups_ = other.count_lookups_;
        lookups_.store(other.lookups_.load(std::memory_order_relaxed),
                       std::memory_order_relaxed);
        return *this;
    }

    std::size_t size() const { return n_; }

    double at(std::size_t i, std::size_t j) const {
        if (i == j) {
            return 0.0;
        }
        if (count_lookups_) {
            lookups_.fetch_add(1, std::memory_order_relaxed);
        }
        return i > j ? values_[index(i, j)] : values_[index(j, i)];
    }

    std::uint64_t evals() const { return evals_; }

    void set_count_lookups(bool on) { count_lookups_ = on; }
    bool counting_lookups() const { return count_lookups_; }
    std::uint64_t lookups() const { return lookups_.load(std::memory_order_relaxed); }
    void reset_lookups() { lookups_.store(0, std::memory_order_relaxed); }

    const std::vector<double>& lower_triangle() const { return values_; }

  private:
    static std::size_t index(std::size_t i, std::size_t j) {  // requires i > j
        return i * (i - 1) / 2 + j;
    }

    std::size_t n_ = 0;
    std::vector<double> values_;
    std::uint64_t evals_ = 0;
    bool count_lookups_ = false;
    mutable std::atomic<std::uint64_t> lookups_{0};
};

/// Matrix-free source: recomputes the metric from vector data on every read
/// and counts each computation. Deliberately memoizes nothing, so the eval
/// counter reflects the true cost of repeated distance computations.
class OnDemandDissimilarity {
  public:
    OnDemandDissimilarity(const DataSet& data, Metric metric);

    std::size_t size() const { return data_->size(); }
    double at(std::size_t i, std::size_t j) const;

    std::uint64_t evals() const { return evals_; }
    void reset_evals() { evals_ = 0; }

  private:
    const DataSet* data_;
    Metric metric_;
    mutable std::uint64_t evals_ = 0;  // single-writer; runs do not share instances
};

/// Evaluates the metric between two rows via the active kernel.
double metric_distance(Metric metric, std::span<const double> a, std::span<const double> b);

/// Full pairwise matrix from vector data; exactly n(n-1)/2 evaluations.
/// Rejects NaN/infinite input with the offending row index.
DissimilarityMatrix build_matrix(const DataSet& data, Metric metric);

/// Extracts the submatrix over `indices` (ascending). Reads go through at(),
/// so they are lookup-counted on the source; the result's eval counter is 0.
DissimilarityMatrix submatrix(const DissimilarityMatrix& full,
                              const std::vector<std::size_t>& indices);

/// Builds the submatrix over `indices` directly from vector data,
/// |indices|*(|indices|-1)/2 metric evaluations.
DissimilarityMatrix submatrix(const DataSet& data, Metric metric,
                              const std::vector<std::size_t>& indices);

/// Triangular text format: line 1 holds n, then n-1 lines where line i+1
/// holds the i dissimilarities d(i,0..i-1), whitespace-separated.
DissimilarityMatrix load_matrix(std::istream& in);
DissimilarityMatrix load_matrix_file(const std::string& path);
void save_matrix(std::ostream& out, const DissimilarityMatrix& matrix);

}  // namespace medoids
