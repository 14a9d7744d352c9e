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

#include "medoids/matrix.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "medoids/kernels.hpp"

namespace medoids {

double metric_distance(Metric metric, std::span<const double> a, std::span<const double> b) {
    switch (metric) {
        case Metric::euclidean:
            return kernels::euclidean(a, b);
        case Metric::squared_euclidean:
            return kernels::squared_euclidean(a, b);
        case Metric::manhattan:
            return kernels::manhattan(a, b);
        case Metric::precomputed:
            break;
    }
    throw std::invalid_argument("precomputed metric cannot be evaluated on vector data");
}

OnDemandDissimilarity::OnDemandDissimilarity(const DataSet& data, Metric metric)
    : data_(&data), metric_(metric) {
    if (metric == Metric::precomputed) {
        throw std::invalid_argument("matrix-free mode requires a vector metric");
    }
}

double OnDemandDissimilarity::at(std::size_t i, std::size_t j) const {
    if (i == j) {
        return 0.0;
    }
    ++evals_;
    // Evaluate with the arguments in index order so that at(i,j) and at(j,i)
    // read the rows in the same order (elementwise symmetric kernels then
    // agree bitwise).
    return i < j ? metric_distance(metric_, data_->row(i), data_->row(j))
                 : metric_distance(metric_, data_->row(j), data_->row(i));
}

DissimilarityMatrix build_matrix(const DataSet& data, Metric metric) {
    const std::size_t n = data.size();
    if (n < 2) {
        throw std::invalid_argument("build_matrix: need at least 2 objects");
    }
    if (data.dim() < 1) {
        throw std::invalid_argument("build_matrix: need at least 1 dimension");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (const double v : data.row(i)) {
            if (!std::isfinite(v)) {
                throw std::invalid_argument("build_matrix: non-finite value in row " +
                                            std::to_string(i));
            }
        }
    }
    std::vector<double> values(n * (n - 1) / 2);
    std::size_t pos = 0;
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            values[pos++] = metric_distance(metric, data.row(j), data.row(i));
        }
    }
    return DissimilarityMatrix(n, std::move(values), static_cast<std::uint64_t>(pos));
}

DissimilarityMatrix submatrix(const DissimilarityMatrix& full,
                              const std::vector<std::size_t>& indices) {
    const std::size_t m = indices.size();
    std::vector<double> values(m * (m - 1) / 2);
    std::size_t pos = 0;
    for (std::size_t i = 1; i < m; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            values[pos++] = full.at(indices[i], indices[j]);
        }
    }
    return DissimilarityMatrix(m, std::move(values), 0);
}

DissimilarityMatrix submatrix(const DataSet& data, Metric metric,
                              const std::vector<std::size_t>& indices) {
    const std::size_t m = indices.size();
    std::vector<double> values(m * (m - 1) / 2);
    std::size_t pos = 0;
    for (std::size_t i = 1; i < m; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            values[pos++] = metric_distance(metric, data.row(indices[j]), data.row(indices[i]));
        }
    }
    return DissimilarityMatrix(m, std::move(values), static_cast<std::uint64_t>(pos));
}

DissimilarityMatrix load_matrix(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    auto next_line = [&]() {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line[0] != '#') {
                return true;
            }
        }
        return false;
    };

    if (!next_line()) {
        throw ParseError("line 1: missing object count");
    }
    std::size_t n = 0;
    {
        std::istringstream ss(line);
        long long raw = 0;
        if (!(ss >> raw) || raw < 2 || !(ss >> std::ws).eof()) {
            throw ParseError("line " + std::to_string(line_no) + ": invalid object count");
        }
        n = static_cast<std::size_t>(raw);
    }

    std::vector<double> values;
    values.reserve(n * (n - 1) / 2);
    for (std::size_t i = 1; i < n; ++i) {
        if (!next_line()) {
            throw ParseError("line " + std::to_string(line_no + 1) + ": missing row " +
                             std::to_string(i));
        }
        std::istringstream ss(line);
        for (std::size_t j = 0; j < i; ++j) {
            double v = 0.0;
            if (!(ss >> v)) {
                throw ParseError("line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(i) + " entries");
            }
            if (!(v >= 0.0) || !std::isfinite(v)) {
                throw ParseError("line " + std::to_string(line_no) +
                                 ": dissimilarities must be finite and nonnegative");
            }
            values.push_back(v);
        }
        double extra;
        if (ss >> extra) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(i) + " entries, found more");
        }
    }
    return DissimilarityMatrix(n, std::move(values), 0);
}

DissimilarityMatrix load_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path);
    }
    return load_matrix(in);
}

void save_matrix(std::ostream& out, const DissimilarityMatrix& matrix) {
    const std::size_t n = matrix.size();
    out << n << "\n";
    char buf[40];
    const auto& tri = matrix.lower_triangle();
    std::size_t pos = 0;
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", tri[pos++]);
            out << (j ? " " : "") << buf;
        }
        out << "\n";
    }
}

}  // namespace medoids
