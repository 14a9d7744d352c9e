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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace medoids {

/// Raised on malformed input files; the message carries the offending line
/// (or row) number.
class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Metric {
    euclidean,
    squared_euclidean,
    manhattan,
    precomputed,
};

Metric parse_metric(const std::string& name);
std::string_view metric_name(Metric metric);

/// Row-major n x d matrix of finite doubles.
class DataSet {
  public:
    DataSet() = default;
    DataSet(std::size_t n, std::size_t dim) : n_(n), dim_(dim), values_(n * dim, 0.0) {}

    std::size_t size() const { return n_; }
    std::size_t dim() const { return dim_; }

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(values_.data() + i * dim_, dim_);
    }
    std::span<double> row(std::size_t i) {
        return std::span<double>(values_.data() + i * dim_, dim_);
    }

    double& at(std::size_t i, std::size_t j) { return values_[i * dim_ + j]; }
    double at(std::size_t i, std::size_t j) const { return values_[i * dim_ + j]; }

  private:
    std::size_t n_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> values_;
};

/// Reads a CSV of numeric columns. Lines starting with '#' are skipped; a
/// first row whose cells do not all parse as numbers is treated as a header.
DataSet read_csv(std::istream& in);
DataSet read_csv_file(const std::string& path);

void write_csv(std::ostream& out, const DataSet& data,
               const std::vector<std::string>& comment_lines = {});

struct MixtureSpec {
    std::size_t clusters = 4;
    std::size_t dim = 2;
    double spread = 0.5;
    std::size_t n = 200;
    std::uint64_t seed = 0;
};

struct GeneratedMixture {
    DataSet data;
    std::vector<std::size_t> labels;   // true component per row
    DataSet centers;                   // clusters x dim
};

/// Balanced Gaussian mixture: component sizes differ by at most one, centers
/// drawn uniformly in [0,10]^dim with a minimum pairwise separation of
/// max(2, 8*spread) when achievable (rejection with a bounded retry count).
GeneratedMixture generate_mixture(const MixtureSpec& spec);

}  // namespace medoids
