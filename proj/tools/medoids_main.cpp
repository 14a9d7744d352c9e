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

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "medoids/dataset.hpp"
#include "medoids/init.hpp"
#include "medoids/kernels.hpp"
#include "medoids/matrix.hpp"
#include "medoids/sampling.hpp"
#include "medoids/swap.hpp"

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
    return std::max(1e-6, static_cast<double>(ns.count()) / 1e6);
}

struct CommonOptions {
    std::string input;
    std::string metric = "euclidean";
    std::string init = "build";
    std::string engine = "pam";
    std::size_t k = 0;
    std::uint64_t seed = 0;
    double tau = 0.0;
    std::size_t sample_size = 0;
    std::size_t restarts = 0;   // 0 = preset default
    std::uint64_t attempts = 0;
    std::uint64_t numlocal = 2;
    bool count_lookups = false;
    std::string kernel = "auto";
    std::string output = "-";
    bool init_given = false;
    bool tau_given = false;
};

void apply_kernel_choice(const std::string& kernel) {
    if (kernel == "auto") {
        return;
    }
    if (kernel == "scalar") {
        medoids::kernels::select_isa(medoids::kernels::Isa::scalar);
    } else if (kernel == "avx2") {
        medoids::kernels::select_isa(medoids::kernels::Isa::avx2);
    } else {
        throw std::invalid_argument("unknown kernel: " + kernel);
    }
}

void write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << text << "\n";
}

json stats_to_json(const medoids::RunStats& stats, double wall_ms) {
    json j;
    j["iterations"] = stats.iterations;
    j["swaps_executed"] = stats.swaps_executed;
    j["candidate_evaluations"] = stats.candidate_evaluations;
    j["change_evals"] = stats.change_evals;
    j["lookups"] = stats.lookups;
    j["distance_evals"] = stats.distance_evals;
    j["truncated"] = stats.truncated;
    j["wall_time_ms"] = wall_ms;
    return j;
}

bool is_meta_engine(const std::string& engine) {
    return engine == "clara" || engine == "fastclara" || engine == "clarans" ||
           engine == "fastclarans";
}

struct ClusterOutcome {
    std::vector<std::size_t> medoids;
    std::vector<std::size_t> assignment;
    double td = 0.0;
    medoids::RunStats stats;
    double wall_ms = 0.0;
    bool full_data_fallback = false;
};

/// One seeded run of any registered algorithm. Inputs are either vector data
/// (with a metric) or a precomputed matrix. Swap engines time the refinement
/// phase only; the sampling meta-algorithms time their whole pipeline.
ClusterOutcome run_algorithm(const medoids::DataSet* data, medoids::Metric metric,
                             medoids::DissimilarityMatrix* matrix, const CommonOptions& opt) {
    using namespace medoids;
    ClusterOutcome out;

    const std::string& engine = opt.engine;
    if (engine == "clara" || engine == "fastclara") {
        ClaraConfig config;
        config.sample_size = opt.sample_size;
        config.restarts = opt.restarts != 0 ? opt.restarts : 5;
        config.seed = opt.seed;
        if (engine == "fastclara") {
            config.engine.engine = SwapEngine::fastpam2;
            config.engine.tau = opt.tau;
            config.init.method = opt.init_given ? parse_init_method(opt.init) : InitMethod::lab;
        } else {
            config.engine.engine = SwapEngine::pam;
            config.init.method = parse_init_method(opt.init);
        }
        const auto start = Clock::now();
        ClaraResult result = matrix != nullptr ? clara(*matrix, opt.k, config)
                                               : clara(*data, metric, opt.k, config);
        out.wall_ms = elapsed_ms(start);
        out.medoids = result.state.medoids;
        out.td = result.state.td;
        out.stats = result.stats;
        out.full_data_fallback = result.full_data_fallback;
        if (matrix != nullptr) {
            out.assignment = rebuild_cache(*matrix, result.state).nearest;
        } else {
            OnDemandDissimilarity source(*data, metric);
            out.assignment = rebuild_cache(source, result.state).nearest;
        }
        return out;
    }

    if (engine == "clarans" || engine == "fastclarans") {
        ClaransConfig config;
        config.attempts = opt.attempts;
        config.numlocal = opt.numlocal;
        config.seed = opt.seed;
        const bool fast = engine == "fastclarans";
        const auto start = Clock::now();
        ClaransResult result;
        if (matrix != nullptr) {
            result = fast ? fastclarans(*matrix, opt.k, config)
                          : clarans(*matrix, opt.k, config);
            out.wall_ms = elapsed_ms(start);
            out.assignment = rebuild_cache(*matrix, result.state).nearest;
        } else {
            OnDemandDissimilarity source(*data, metric);
            result = fast ? fastclarans(source, opt.k, config)
                          : clarans(source, opt.k, config);
            out.wall_ms = elapsed_ms(start);
            result.stats.distance_evals = source.evals();
            source.reset_evals();
            out.assignment = rebuild_cache(source, result.state).nearest;
        }
        out.medoids = result.state.medoids;
        out.td = result.state.td;
        out.stats = result.stats;
        return out;
    }

    // swap engines and the alternating baseline need the matrix
    std::optional<DissimilarityMatrix> local;
    if (matrix == nullptr) {
        local = build_matrix(*data, metric);
        local->set_count_lookups(opt.count_lookups);
        matrix = &*local;
    }

    InitConfig init_config;
    init_config.method = parse_init_method(opt.init);
    init_config.seed = opt.seed;
    MedoidState state = initialize(*matrix, opt.k, init_config);
    AssignmentCache cache = rebuild_cache(*matrix, state);

    const std::uint64_t lookups_before = matrix->lookups();
    const auto start = Clock::now();
    if (engine == "parkjun") {
        out.stats = parkjun_refine(*matrix, state, cache);
    } else {
        SwapConfig config;
        config.engine = parse_swap_engine(engine);
        config.tau = opt.tau;
        out.stats = run_swap(*matrix, state, cache, config);
    }
    out.wall_ms = elapsed_ms(start);
    out.stats.lookups = matrix->lookups() - lookups_before;
    out.stats.distance_evals = matrix->evals();
    out.medoids = state.medoids;
    out.td = state.td;
    out.assignment = cache.nearest;
    return out;
}

int cmd_cluster(const CommonOptions& opt) {
    using namespace medoids;
    apply_kernel_choice(opt.kernel);

    const Metric metric = parse_metric(opt.metric);
    std::optional<DataSet> data;
    std::optional<DissimilarityMatrix> matrix;
    std::size_t n = 0;
    if (metric == Metric::precomputed) {
        matrix = load_matrix_file(opt.input);
        matrix->set_count_lookups(opt.count_lookups);
        n = matrix->size();
    } else {
        data = read_csv_file(opt.input);
        n = data->size();
    }

    if (opt.k == 0 || opt.k > n) {
        throw std::invalid_argument("k must satisfy 1 <= k <= n (k=" + std::to_string(opt.k) +
                                    ", n=" + std::to_string(n) + ")");
    }

    ClusterOutcome outcome;
    if (opt.k == n) {
        // every object is its own medoid
        outcome.medoids.resize(n);
        outcome.assignment.resize(n);
        for (std::size_t o = 0; o < n; ++o) {
            outcome.medoids[o] = o;
            outcome.assignment[o] = o;
        }
        outcome.td = 0.0;
        outcome.wall_ms = 1e-6;
    } else {
        outcome = run_algorithm(data ? &*data : nullptr, metric, matrix ? &*matrix : nullptr,
                                opt);
    }

    json j;
    j["algorithm"] = opt.engine;
    j["n"] = n;
    j["k"] = opt.k;
    j["medoids"] = outcome.medoids;
    j["assignment"] = outcome.assignment;
    j["td"] = outcome.td;
    j["stats"] = stats_to_json(outcome.stats, outcome.wall_ms);
    if (outcome.full_data_fallback) {
        j["notice"] = "sample covers the data; ran a single full-data refinement";
    }
    json config;
    config["input"] = opt.input;
    config["metric"] = opt.metric;
    config["init"] = opt.init;
    config["engine"] = opt.engine;
    config["seed"] = opt.seed;
    config["tau"] = opt.tau;
    config["sample_size"] = opt.sample_size;
    config["restarts"] = opt.restarts;
    config["attempts"] = opt.attempts;
    config["numlocal"] = opt.numlocal;
    config["rng"] = std::string(kRngId);
    config["kernel"] = std::string(kernels::isa_name(kernels::active_isa()));
    j["config"] = config;
    write_output(opt.output, j.dump(2));
    return 0;
}

int cmd_generate(const medoids::MixtureSpec& spec, const std::string& output) {
    using namespace medoids;
    const GeneratedMixture mixture = generate_mixture(spec);
    std::vector<std::string> comments;
    comments.push_back("generated: gaussian-mixture clusters=" + std::to_string(spec.clusters) +
                       " dim=" + std::to_string(spec.dim) + " spread=" +
                       std::to_string(spec.spread) + " n=" + std::to_string(spec.n) +
                       " seed=" + std::to_string(spec.seed));
    comments.push_back("rng: " + std::string(kRngId));
    if (output == "-") {
        write_csv(std::cout, mixture.data, comments);
        return 0;
    }
    std::ofstream out(output);
    if (!out) {
        throw std::runtime_error("cannot write " + output);
    }
    write_csv(out, mixture.data, comments);
    return 0;
}

int cmd_convert_matrix(const std::string& input, const std::string& metric_name,
                       const std::string& output) {
    using namespace medoids;
    const Metric metric = parse_metric(metric_name);
    if (metric == Metric::precomputed) {
        throw std::invalid_argument("convert-matrix needs a vector metric");
    }
    const DataSet data = read_csv_file(input);
    const DissimilarityMatrix matrix = build_matrix(data, metric);
    if (output == "-") {
        save_matrix(std::cout, matrix);
        return 0;
    }
    std::ofstream out(output);
    if (!out) {
        throw std::runtime_error("cannot write " + output);
    }
    save_matrix(out, matrix);
    return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchCombo {
    std::string id;
    CommonOptions opt;  // input/metric/k filled per run
};

struct BenchRecord {
    std::string algorithm;
    std::uint64_t seed = 0;
    std::size_t k = 0;
    std::size_t n = 0;
    bool ok = false;
    ClusterOutcome outcome;
};

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int cmd_bench(const std::string& spec_path, const std::string& output_dir) {
    using namespace medoids;
    std::ifstream in(spec_path);
    if (!in) {
        throw std::runtime_error("cannot open " + spec_path);
    }
    json spec = json::parse(in);

    const std::uint64_t seed_base = spec.value("seed", 0ull);
    const std::uint64_t repeats = spec.value("repeats", 25ull);
    if (repeats < 1) {
        throw std::invalid_argument("bench: repeats must be >= 1");
    }
    std::vector<std::size_t> k_values = spec.at("k_values").get<std::vector<std::size_t>>();

    // dataset: a CSV path or a mixture generator block
    const json& ds = spec.at("dataset");
    DataSet data;
    Metric metric = Metric::euclidean;
    if (ds.contains("path")) {
        data = read_csv_file(ds.at("path").get<std::string>());
        metric = parse_metric(ds.value("metric", "euclidean"));
    } else {
        const json& gen = ds.at("generator");
        MixtureSpec mix;
        mix.clusters = gen.value("clusters", 4ull);
        mix.dim = gen.value("dim", 2ull);
        mix.spread = gen.value("spread", 0.5);
        mix.n = gen.value("n", 200ull);
        mix.seed = gen.value("seed", 0ull);
        data = generate_mixture(mix).data;
        metric = parse_metric(ds.value("metric", "euclidean"));
    }
    const bool count_lookups = spec.value("count_lookups", false);

    std::vector<BenchCombo> combos;
    for (const json& a : spec.at("algorithms")) {
        BenchCombo combo;
        combo.opt.engine = a.at("engine").get<std::string>();
        combo.opt.init = a.value("init", std::string("build"));
        combo.opt.init_given = a.contains("init");
        combo.opt.tau = a.value("tau", 0.0);
        combo.opt.sample_size = a.value("sample_size", 0ull);
        combo.opt.restarts = a.value("restarts", 0ull);
        combo.opt.attempts = a.value("attempts", 0ull);
        combo.opt.numlocal = a.value("numlocal", 2ull);
        combo.opt.count_lookups = count_lookups;
        combo.id = a.value("id", combo.opt.engine + "-" + combo.opt.init);
        combos.push_back(std::move(combo));
    }
    if (combos.empty()) {
        throw std::invalid_argument("bench: no algorithms given");
    }

    // the swap engines share one matrix per dataset
    DissimilarityMatrix matrix = build_matrix(data, metric);
    matrix.set_count_lookups(count_lookups);

    std::vector<BenchRecord> records;
    bool all_ok = true;
    for (const BenchCombo& combo : combos) {
        for (const std::size_t k : k_values) {
            for (std::uint64_t rep = 0; rep < repeats; ++rep) {
                BenchRecord record;
                record.algorithm = combo.id;
                record.seed = seed_base + rep;
                record.k = k;
                record.n = data.size();
                CommonOptions opt = combo.opt;
                opt.k = k;
                opt.seed = record.seed;
                try {
                    const bool meta = is_meta_engine(opt.engine);
                    const bool matrix_free =
                        opt.engine == "clarans" || opt.engine == "fastclarans";
                    record.outcome = run_algorithm(
                        &data, metric,
                        (meta && !matrix_free) || !meta ? &matrix : nullptr, opt);
                    record.ok = true;
                } catch (const std::exception& e) {
                    record.ok = false;
                    all_ok = false;
                    std::cerr << "bench: " << combo.id << " k=" << k << " rep=" << rep
                              << " failed: " << e.what() << "\n";
                }
                records.push_back(std::move(record));
            }
        }
    }

    std::filesystem::create_directories(output_dir);
    {
        std::ofstream out(std::filesystem::path(output_dir) / "records.csv");
        out << "algorithm,seed,k,n,status,final_td,iterations,swaps_executed,"
               "candidate_evaluations,change_evals,lookups,distance_evals,wall_time_ms\n";
        for (const BenchRecord& r : records) {
            out << r.algorithm << ',' << r.seed << ',' << r.k << ',' << r.n << ','
                << (r.ok ? "ok" : "failed") << ',';
            if (r.ok) {
                out << format_double(r.outcome.td) << ',' << r.outcome.stats.iterations << ','
                    << r.outcome.stats.swaps_executed << ','
                    << r.outcome.stats.candidate_evaluations << ','
                    << r.outcome.stats.change_evals << ',' << r.outcome.stats.lookups << ','
                    << r.outcome.stats.distance_evals << ','
                    << format_double(r.outcome.wall_ms);
            } else {
                out << ",,,,,,,";
            }
            out << "\n";
        }
    }
    {
        // per-(algorithm, k) aggregates plus the evaluation-work speedup
        // against the plain pam combo at the same k, when one exists
        std::ofstream out(std::filesystem::path(output_dir) / "summary.csv");
        out << "algorithm,k,runs,td_mean,td_min,td_max,iterations_mean,swaps_mean,"
               "candidate_evaluations_mean,change_evals_mean,lookups_mean,"
               "distance_evals_mean,wall_time_ms_mean,work_vs_pam\n";
        auto change_mean = [&](const std::string& engine_id, std::size_t k) -> double {
            double sum = 0.0;
            std::size_t cnt = 0;
            for (const BenchRecord& r : records) {
                if (r.ok && r.k == k && r.algorithm == engine_id) {
                    sum += static_cast<double>(r.outcome.stats.change_evals);
                    ++cnt;
                }
            }
            return cnt == 0 ? 0.0 : sum / static_cast<double>(cnt);
        };
        std::string pam_id;
        for (const BenchCombo& c : combos) {
            if (c.opt.engine == "pam") {
                pam_id = c.id;
                break;
            }
        }
        for (const BenchCombo& combo : combos) {
            for (const std::size_t k : k_values) {
                double td_min = kInfinity, td_max = -kInfinity;
                double td_sum = 0, it_sum = 0, sw_sum = 0, cand_sum = 0, chg_sum = 0,
                       lk_sum = 0, de_sum = 0, wall_sum = 0;
                std::size_t cnt = 0;
                for (const BenchRecord& r : records) {
                    if (!r.ok || r.algorithm != combo.id || r.k != k) {
                        continue;
                    }
                    ++cnt;
                    td_min = std::min(td_min, r.outcome.td);
                    td_max = std::max(td_max, r.outcome.td);
                    td_sum += r.outcome.td;
                    it_sum += static_cast<double>(r.outcome.stats.iterations);
                    sw_sum += static_cast<double>(r.outcome.stats.swaps_executed);
                    cand_sum += static_cast<double>(r.outcome.stats.candidate_evaluations);
                    chg_sum += static_cast<double>(r.outcome.stats.change_evals);
                    lk_sum += static_cast<double>(r.outcome.stats.lookups);
                    de_sum += static_cast<double>(r.outcome.stats.distance_evals);
                    wall_sum += r.outcome.wall_ms;
                }
                out << combo.id << ',' << k << ',' << cnt << ',';
                if (cnt == 0) {
                    out << ",,,,,,,,,,\n";
                    continue;
                }
                const double dn = static_cast<double>(cnt);
                out << format_double(td_sum / dn) << ',' << format_double(td_min) << ','
                    << format_double(td_max) << ',' << format_double(it_sum / dn) << ','
                    << format_double(sw_sum / dn) << ',' << format_double(cand_sum / dn) << ','
                    << format_double(chg_sum / dn) << ',' << format_double(lk_sum / dn) << ','
                    << format_double(de_sum / dn) << ',' << format_double(wall_sum / dn) << ',';
                const double own = chg_sum / dn;
                if (!pam_id.empty() && own > 0.0) {
                    out << format_double(change_mean(pam_id, k) / own);
                }
                out << "\n";
            }
        }
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-medoids clustering engine and benchmark harness"};
    app.require_subcommand(1);

    CommonOptions opt;
    auto* cluster = app.add_subcommand("cluster", "cluster one dataset and emit JSON");
    cluster->add_option("--input", opt.input, "CSV dataset, or triangular matrix file with --metric precomputed")->required();
    cluster->add_option("--metric", opt.metric, "euclidean|sqeuclidean|manhattan|precomputed");
    auto* init_opt = cluster->add_option("--init", opt.init, "build|lab|kmeanspp|random|parkjun");
    cluster->add_option("--engine", opt.engine,
                        "pam|reynolds|fastpam1|fastpam2|parkjun|clara|fastclara|clarans|fastclarans");
    cluster->add_option("--k", opt.k, "number of medoids")->required();
    cluster->add_option("--seed", opt.seed, "RNG seed");
    auto* tau_opt = cluster->add_option("--tau", opt.tau, "fastpam2 recheck tolerance in [0,1]");
    cluster->add_option("--sample-size", opt.sample_size, "clara subsample size (0 = 40+2k)");
    cluster->add_option("--restarts", opt.restarts, "clara restarts (0 = 5)");
    cluster->add_option("--attempts", opt.attempts, "clarans attempt budget (0 = 1.25% rule)");
    cluster->add_option("--numlocal", opt.numlocal, "clarans restarts");
    cluster->add_flag("--count-lookups", opt.count_lookups, "count matrix accesses");
    cluster->add_option("--kernel", opt.kernel, "auto|scalar|avx2");
    cluster->add_option("--output", opt.output, "output JSON path ('-' = stdout)");

    std::string bench_spec, bench_out = "bench-out";
    auto* bench = app.add_subcommand("bench", "run a seeded experiment matrix, emit CSV");
    bench->add_option("--spec", bench_spec, "experiment spec (JSON)")->required();
    bench->add_option("--output-dir", bench_out, "directory for records.csv / summary.csv");

    medoids::MixtureSpec mix;
    std::string gen_out = "-";
    auto* gen = app.add_subcommand("generate", "write a seeded gaussian-mixture CSV");
    gen->add_option("--clusters", mix.clusters, "mixture components");
    gen->add_option("--dim", mix.dim, "dimensions");
    gen->add_option("--spread", mix.spread, "per-component stddev");
    gen->add_option("--n", mix.n, "rows")->required();
    gen->add_option("--seed", mix.seed, "RNG seed");
    gen->add_option("--output", gen_out, "output CSV path ('-' = stdout)");

    std::string conv_in, conv_metric = "euclidean", conv_out = "-";
    auto* conv = app.add_subcommand("convert-matrix", "precompute a triangular matrix file");
    conv->add_option("--input", conv_in, "CSV dataset")->required();
    conv->add_option("--metric", conv_metric, "euclidean|sqeuclidean|manhattan");
    conv->add_option("--output", conv_out, "output path ('-' = stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (cluster->parsed()) {
            opt.init_given = init_opt->count() > 0;
            opt.tau_given = tau_opt->count() > 0;
            return cmd_cluster(opt);
        }
        if (bench->parsed()) {
            return cmd_bench(bench_spec, bench_out);
        }
        if (gen->parsed()) {
            return cmd_generate(mix, gen_out);
        }
        if (conv->parsed()) {
            return cmd_convert_matrix(conv_in, conv_metric, conv_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
