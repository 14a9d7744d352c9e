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

#include "medoids/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "medoids/kernels.hpp"
#include "medoids/rng.hpp"

namespace medoids {

namespace {

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim surrounding whitespace
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

bool parse_double(const std::string& cell, double& out) {
    if (cell.empty()) {
        return false;
    }
    char* end = nullptr;
    out = std::strtod(cell.c_str(), &end);
    return end == cell.c_str() + cell.size();
}

}  // namespace

Metric parse_metric(const std::string& name) {
    if (name == "euclidean") return Metric::euclidean;
    if (name == "sqeuclidean" || name == "squared-euclidean") return Metric::squared_euclidean;
    if (name == "manhattan") return Metric::manhattan;
    if (name == "precomputed") return Metric::precomputed;
    throw std::invalid_argument("unknown metric: " + name);
}

std::string_view metric_name(Metric metric) {
    switch (metric) {
        case Metric::euclidean: return "euclidean";
        case Metric::squared_euclidean: return "sqeuclidean";
        case Metric::manhattan: return "manhattan";
        case Metric::precomputed: return "precomputed";
    }
    return "?";
}

DataSet read_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t dim = 0;
    bool first_data_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto cells = split_cells(line);
        std::vector<double> row;
        row.reserve(cells.size());
        bool ok = true;
        for (const auto& cell : cells) {
            double v = 0.0;
            if (!parse_double(cell, v)) {
                ok = false;
                break;
            }
            row.push_back(v);
        }
        if (!ok) {
            if (first_data_row) {
                first_data_row = false;  // header row
                continue;
            }
            throw ParseError("line " + std::to_string(line_no) + ": non-numeric cell");
        }
        first_data_row = false;
        if (dim == 0) {
            dim = row.size();
        } else if (row.size() != dim) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(dim) + " columns, got " + std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw ParseError("no data rows");
    }
    DataSet data(rows.size(), dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            data.at(i, j) = rows[i][j];
        }
    }
    return data;
}

DataSet read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path);
    }
    return read_csv(in);
}

void write_csv(std::ostream& out, const DataSet& data,
               const std::vector<std::string>& comment_lines) {
    for (const auto& c : comment_lines) {
        out << "# " << c << "\n";
    }
    char buf[40];
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto row = data.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", row[j]);
            out << (j ? "," : "") << buf;
        }
        out << "\n";
    }
}

GeneratedMixture generate_mixture(const MixtureSpec& spec) {
    if (spec.n == 0 || spec.dim == 0 || spec.clusters == 0) {
        throw std::invalid_argument("mixture: n, dim, and clusters must be positive");
    }
    if (spec.spread < 0.0 || !std::isfinite(spec.spread)) {
        throw std::invalid_argument("mixture: spread must be finite and nonnegative");
    }
    Rng rng(derive_seed(spec.seed, 0));

    GeneratedMixture out;
    out.centers = DataSet(spec.clusters, spec.dim);
    const double min_sep = std::max(2.0, 8.0 * spec.spread);
    for (std::size_t c = 0; c < spec.clusters; ++c) {
        for (int attempt = 0; attempt < 200; ++attempt) {
            for (std::size_t d = 0; d < spec.dim; ++d) {
                out.centers.at(c, d) = rng.uniform(0.0, 10.0);
            }
            bool separated = true;
            for (std::size_t prev = 0; prev < c && separated; ++prev) {
                const double dist =
                    kernels::euclidean(out.centers.row(c), out.centers.row(prev));
                separated = dist >= min_sep;
            }
            if (separated) {
                break;
            }
        }
    }

    out.data = DataSet(spec.n, spec.dim);
    out.labels.resize(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        const std::size_t c = i % spec.clusters;  // balanced sizes
        out.labels[i] = c;
        for (std::size_t d = 0; d < spec.dim; ++d) {
            out.data.at(i, d) = out.centers.at(c, d) + spec.spread * rng.normal();
        }
    }
    return out;
}

}  // namespace medoids
