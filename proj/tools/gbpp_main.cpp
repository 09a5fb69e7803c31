// gbpp: granular-ball granulation, classification and benchmarking CLI.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gbpp/classify.hpp"
#include "gbpp/eval.hpp"
#include "gbpp/granulation.hpp"
#include "gbpp/io.hpp"
#include "gbpp/synth.hpp"
#include "gbpp/version.hpp"

using namespace gbpp;
using nlohmann::json;

namespace {

// --- shared option bundles ---------------------------------------------------

struct InputArgs {
    std::vector<std::string> files;
    std::vector<std::string> synth_names;
    std::string format = "csv";
    std::string label_column;
    bool no_header = false;
    int libsvm_dim = 0;
    std::uint64_t synth_seed = 7;
};

struct RunArgs {
    double purity = 1.0;
    int folds = 10;
    std::uint64_t seed = 1;          // fold partition seed
    std::uint64_t kmeans_seed = 7;   // baseline centroid seed
    std::uint64_t noise_seed = 31;   // label-flip seed
    bool no_am = false;
    bool no_outlier_detection = false;
};

void add_input_options(CLI::App* cmd, InputArgs& in, bool multiple) {
    auto* input = cmd->add_option("--input,-i", in.files,
                                  multiple ? "Dataset file(s) (CSV or LIBSVM)"
                                           : "Dataset file (CSV or LIBSVM)");
    if (!multiple) input->expected(0, 1);
    cmd->add_option("--synth", in.synth_names,
                    "Built-in synthetic dataset(s): fourclass, svmguide1, sonar, ecoli, diabetes");
    cmd->add_option("--format", in.format, "Input format: csv or libsvm")
        ->check(CLI::IsMember({"csv", "libsvm"}))
        ->capture_default_str();
    cmd->add_option("--label-column", in.label_column,
                    "CSV label column (header name or 0-based index; default: last)");
    cmd->add_flag("--no-header", in.no_header, "CSV file has no header row");
    cmd->add_option("--libsvm-dim", in.libsvm_dim,
                    "LIBSVM feature count (default: inferred from the max index)");
    cmd->add_option("--synth-seed", in.synth_seed, "Seed for --synth generators")
        ->capture_default_str();
}

void add_run_options(CLI::App* cmd, RunArgs& run, bool with_folds) {
    cmd->add_option("--purity", run.purity, "Purity threshold in (0,1]")
        ->check(CLI::Range(std::nextafter(0.0, 1.0), 1.0))
        ->capture_default_str();
    if (with_folds) {
        cmd->add_option("--folds", run.folds, "Cross-validation folds")
            ->check(CLI::Range(2, 1000000))
            ->capture_default_str();
        cmd->add_option("--seed", run.seed, "Fold partition seed")->capture_default_str();
        cmd->add_option("--noise-seed", run.noise_seed, "Label-noise seed")
            ->capture_default_str();
    }
    cmd->add_option("--kmeans-seed", run.kmeans_seed, "Baseline k-means seed")
        ->capture_default_str();
    cmd->add_flag("--no-am", run.no_am, "Build children on all undivided samples");
    cmd->add_flag("--no-outlier-detection", run.no_outlier_detection,
                  "Keep one-sample balls instead of dropping them");
}

GranulationConfig make_config(const RunArgs& run, GranulationMethod method) {
    GranulationConfig cfg;
    cfg.purity_threshold = run.purity;
    cfg.method = method;
    cfg.enable_am = !run.no_am;
    cfg.enable_outlier_detection = !run.no_outlier_detection;
    cfg.kmeans_seed = run.kmeans_seed;
    cfg.validate();
    return cfg;
}

std::vector<Dataset> load_inputs(const InputArgs& in) {
    std::vector<Dataset> out;
    for (const auto& path : in.files) {
        LoadOptions opts;
        opts.format = format_from_string(in.format);
        opts.label_column = in.label_column;
        opts.has_header = !in.no_header;
        opts.dimensions = in.libsvm_dim;
        out.push_back(load_dataset(path, opts));
    }
    for (const auto& name : in.synth_names) out.push_back(synth::by_name(name, in.synth_seed));
    if (out.empty())
        throw CLI::ValidationError("--input", "no datasets given (use --input or --synth)");
    return out;
}

// --- manifest ----------------------------------------------------------------

std::string fnv1a64_hex(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "unreadable";
    std::uint64_t hash = 1469598103934665603ull;
    char buf[8192];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 1099511628211ull;
        }
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(hash));
    return hex;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

json make_manifest(const std::string& command, const InputArgs& in, const RunArgs& run,
                   int argc, char** argv) {
    std::ostringstream cmdline;
    for (int i = 0; i < argc; ++i) cmdline << (i ? " " : "") << argv[i];
    json inputs = json::array();
    for (const auto& path : in.files)
        inputs.push_back({{"path", path}, {"fnv1a64", fnv1a64_hex(path)}});
    for (const auto& name : in.synth_names)
        inputs.push_back({{"synth", name}, {"seed", in.synth_seed}});
    return json{{"command", command},
                {"command_line", cmdline.str()},
                {"version", GBPP_VERSION},
                {"timestamp", utc_timestamp()},
                {"inputs", inputs},
                {"seeds",
                 {{"folds", run.seed},
                  {"kmeans", run.kmeans_seed},
                  {"noise", run.noise_seed},
                  {"synth", in.synth_seed}}},
                {"settings",
                 {{"purity", run.purity},
                  {"folds", run.folds},
                  {"am", !run.no_am},
                  {"outlier_detection", !run.no_outlier_detection}}}};
}

void write_report(const json& report, const std::string& path) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << report.dump(2) << "\n";
    std::cout << "report written to " << path << "\n";
}

json report_to_json(const EvalReport& r) {
    json j{{"method", r.method},
           {"dataset", r.dataset},
           {"per_fold_accuracies", r.per_fold_accuracies},
           {"mean_accuracy", r.mean_accuracy},
           {"sd_accuracy", r.sd_accuracy},
           {"granulate_seconds", r.granulate_seconds},
           {"predict_seconds", r.predict_seconds},
           {"granulation_distance_evaluations", r.granulation_distance_evaluations},
           {"prediction_distance_evaluations", r.prediction_distance_evaluations},
           {"folds", r.folds},
           {"fold_seed", r.fold_seed}};
    if (!r.ball_counts.empty()) j["ball_counts"] = r.ball_counts;
    if (!r.knn_k_values.empty()) j["knn_k_values"] = r.knn_k_values;
    return j;
}

// mean per-fold pipeline time; the displayed timing index is its natural log
double mean_fold_seconds(const EvalReport& r) {
    return (r.granulate_seconds + r.predict_seconds) / std::max(1, r.folds);
}

// --- benchmark methods ---------------------------------------------------------

struct MethodSpec {
    std::string name;  // gbknn++ | gbknn | knn
};

EvalReport run_method(const std::string& method, const Dataset& ds, const RunArgs& run,
                      const std::vector<int>& knn_ks) {
    if (method == "gbknn++")
        return cross_validate(ds, make_config(run, GranulationMethod::GbgPlusPlus),
                              BallRule::HarmonicDistance, run.folds, run.seed);
    if (method == "gbknn")
        return cross_validate(ds, make_config(run, GranulationMethod::KMeansBaseline),
                              BallRule::SurfaceDistance, run.folds, run.seed);
    if (method == "knn") return cross_validate_knn(ds, knn_ks, run.folds, run.seed);
    throw std::invalid_argument("unknown method: " + method);
}

void print_table_header() {
    std::printf("%-12s %-10s %-8s %-8s %-8s %-14s %s\n", "dataset", "method", "mean", "sd",
                "lnt", "dist_evals", "balls/fold");
}

void print_table_row(const EvalReport& r) {
    const double t = mean_fold_seconds(r);
    std::string balls = "-";
    if (!r.ball_counts.empty()) {
        double acc = 0;
        for (int b : r.ball_counts) acc += b;
        balls = std::to_string(static_cast<int>(acc / static_cast<double>(r.ball_counts.size())));
    }
    std::printf("%-12s %-10s %-8.4f %-8.4f %-8.3f %-14llu %s\n", r.dataset.c_str(),
                r.method.c_str(), r.mean_accuracy, r.sd_accuracy, t > 0 ? lnt(t) : 0.0,
                static_cast<unsigned long long>(r.granulation_distance_evaluations),
                balls.c_str());
}

// --- subcommand: granulate ----------------------------------------------------

struct GranulateArgs {
    InputArgs in;
    RunArgs run;
    std::string method = "gbg++";
    std::string output;
    bool no_normalize = false;
};

int cmd_granulate(const GranulateArgs& args) {
    auto datasets = load_inputs(args.in);
    if (datasets.size() != 1)
        throw CLI::ValidationError("--input", "granulate takes exactly one dataset");
    Dataset ds = std::move(datasets.front());
    if (!args.no_normalize) ds = fit_apply_minmax(ds).train;

    const auto cfg = make_config(args.run, method_from_string(args.method));
    const auto result = run_granulation(ds, cfg);

    double min_purity = 1.0;
    for (const auto& b : result.balls) min_purity = std::min(min_purity, b.purity);
    std::printf("dataset          %s (n=%d, q=%d, classes=%zu)\n", ds.name.c_str(), ds.n(), ds.q,
                ds.classes.size());
    std::printf("method           %s\n", args.method.c_str());
    std::printf("balls            %zu\n", result.balls.size());
    std::printf("outliers         %zu\n", result.outliers.size());
    std::printf("iterations       %d\n", result.iterations);
    std::printf("distance evals   %llu\n",
                static_cast<unsigned long long>(result.counters.distance_evaluations));
    std::printf("wall time        %.6f s\n", result.wall_time_seconds);
    std::printf("min purity       %g\n", min_purity);
    std::printf("hetero nestings  %d\n", count_heterogeneous_nestings(result.balls));
    if (!args.output.empty()) {
        export_balls(result, ds, args.output);
        std::printf("ball set written to %s\n", args.output.c_str());
    }
    return 0;
}

// --- subcommand: benchmark ------------------------------------------------------

struct BenchmarkArgs {
    InputArgs in;
    RunArgs run;
    std::vector<std::string> methods{"gbknn++", "gbknn", "knn"};
    std::vector<double> noise;
    std::string purity_sweep;
    std::vector<int> knn_ks{1, 3, 5, 7, 9, 11, 13, 15};
    bool wilcoxon = false;
    std::string output;
};

std::vector<double> parse_sweep(const std::string& spec) {
    double start, end, step;
    char c1, c2;
    std::istringstream ss(spec);
    if (!(ss >> start >> c1 >> end >> c2 >> step) || c1 != ':' || c2 != ':' || step <= 0.0)
        throw CLI::ValidationError("--purity-sweep", "expected start:end:step");
    std::vector<double> values;
    for (double p = start; p <= end + 1e-9; p += step) values.push_back(std::min(p, 1.0));
    if (values.empty()) throw CLI::ValidationError("--purity-sweep", "empty range");
    return values;
}

int cmd_benchmark(const BenchmarkArgs& args, const json& manifest) {
    const auto datasets = load_inputs(args.in);
    json report{{"manifest", manifest}, {"sections", json::array()}};
    std::vector<std::string> failures;

    std::vector<double> rates = args.noise;
    if (rates.empty()) rates.push_back(0.0);

    for (double rate : rates) {
        json section{{"noise_rate", rate}, {"runs", json::array()}};
        std::printf("== noise rate %.0f%%\n", rate * 100.0);
        print_table_header();
        // accuracy vectors across datasets, per method (for the signed-rank test)
        std::map<std::string, std::vector<double>> method_accuracies;
        for (const auto& ds : datasets) {
            const Dataset noisy =
                rate > 0.0 ? inject_label_noise(ds, rate, args.run.noise_seed) : ds;
            for (const auto& method : args.methods) {
                try {
                    const auto r = run_method(method, noisy, args.run, args.knn_ks);
                    print_table_row(r);
                    section["runs"].push_back(report_to_json(r));
                    method_accuracies[method].push_back(r.mean_accuracy);
                } catch (const std::exception& e) {
                    failures.push_back(ds.name + "/" + method + ": " + e.what());
                    std::printf("%-12s %-10s failed: %s\n", ds.name.c_str(), method.c_str(),
                                e.what());
                }
            }
        }
        if (args.wilcoxon && args.methods.size() >= 2) {
            json tests = json::array();
            for (size_t a = 0; a < args.methods.size(); ++a)
                for (size_t b = a + 1; b < args.methods.size(); ++b) {
                    const auto& va = method_accuracies[args.methods[a]];
                    const auto& vb = method_accuracies[args.methods[b]];
                    if (va.size() != vb.size() || va.empty()) continue;
                    std::vector<double> diffs(va.size());
                    for (size_t i = 0; i < va.size(); ++i) diffs[i] = vb[i] - va[i];
                    const auto w = wilcoxon_signed_rank(diffs);
                    json entry{{"better_hypothesis", args.methods[a]},
                               {"against", args.methods[b]},
                               {"r_plus", w.r_plus},
                               {"r_minus", w.r_minus},
                               {"t", w.statistic_t}};
                    std::printf("wilcoxon %s vs %s: R+=%g R-=%g T=%g", args.methods[a].c_str(),
                                args.methods[b].c_str(), w.r_plus, w.r_minus, w.statistic_t);
                    if (w.reject_at_0_05.has_value()) {
                        entry["reject_at_0_05"] = *w.reject_at_0_05;
                        std::printf(" reject@0.05=%s", *w.reject_at_0_05 ? "yes" : "no");
                    }
                    std::printf("\n");
                    tests.push_back(entry);
                }
            section["wilcoxon"] = tests;
        }
        report["sections"].push_back(section);
    }

    if (!args.purity_sweep.empty()) {
        const auto purities = parse_sweep(args.purity_sweep);
        json sweep = json::array();
        std::printf("== purity sweep\n%-12s %-8s %-8s %-8s\n", "dataset", "purity", "mean", "sd");
        for (const auto& ds : datasets) {
            for (double p : purities) {
                RunArgs run = args.run;
                run.purity = p;
                try {
                    const auto r = run_method("gbknn++", ds, run, args.knn_ks);
                    std::printf("%-12s %-8.2f %-8.4f %-8.4f\n", ds.name.c_str(), p,
                                r.mean_accuracy, r.sd_accuracy);
                    sweep.push_back({{"dataset", ds.name},
                                     {"purity", p},
                                     {"mean_accuracy", r.mean_accuracy},
                                     {"sd_accuracy", r.sd_accuracy}});
                } catch (const std::exception& e) {
                    failures.push_back(ds.name + "/sweep@" + std::to_string(p) + ": " + e.what());
                }
            }
        }
        report["purity_sweep"] = sweep;
    }

    write_report(report, args.output);
    if (!failures.empty()) {
        std::printf("%zu run(s) failed:\n", failures.size());
        for (const auto& f : failures) std::printf("  %s\n", f.c_str());
        return 1;
    }
    return 0;
}

// --- subcommand: ablate ---------------------------------------------------------

struct AblateArgs {
    InputArgs in;
    RunArgs run;
    std::vector<double> noise;
    std::string output;
};

int cmd_ablate(const AblateArgs& args, const json& manifest) {
    const auto datasets = load_inputs(args.in);
    json report{{"manifest", manifest}};
    std::vector<std::string> failures;

    std::printf("== attention mechanism ablation\n%-12s %-10s %-10s\n", "dataset", "with-am",
                "without-am");
    json am_rows = json::array();
    for (const auto& ds : datasets) {
        try {
            RunArgs on = args.run, off = args.run;
            off.no_am = true;
            const auto yes = run_method("gbknn++", ds, on, {});
            const auto no = run_method("gbknn++", ds, off, {});
            std::printf("%-12s %-10.4f %-10.4f\n", ds.name.c_str(), yes.mean_accuracy,
                        no.mean_accuracy);
            am_rows.push_back({{"dataset", ds.name},
                               {"with_am", yes.mean_accuracy},
                               {"without_am", no.mean_accuracy}});
        } catch (const std::exception& e) {
            failures.push_back(ds.name + "/am: " + e.what());
        }
    }
    report["am_ablation"] = am_rows;

    std::vector<double> rates = args.noise;
    if (rates.empty()) rates.push_back(0.0);
    std::printf("== outlier detection ablation\n%-12s %-8s %-10s %-10s\n", "dataset", "noise",
                "with-od", "without-od");
    json od_rows = json::array();
    for (const auto& ds : datasets) {
        for (double rate : rates) {
            try {
                const Dataset noisy =
                    rate > 0.0 ? inject_label_noise(ds, rate, args.run.noise_seed) : ds;
                RunArgs on = args.run, off = args.run;
                off.no_outlier_detection = true;
                const auto yes = run_method("gbknn++", noisy, on, {});
                const auto no = run_method("gbknn++", noisy, off, {});
                std::printf("%-12s %-8.2f %-10.4f %-10.4f\n", ds.name.c_str(), rate,
                            yes.mean_accuracy, no.mean_accuracy);
                od_rows.push_back({{"dataset", ds.name},
                                   {"noise_rate", rate},
                                   {"with_od", yes.mean_accuracy},
                                   {"without_od", no.mean_accuracy}});
            } catch (const std::exception& e) {
                failures.push_back(ds.name + "/od@" + std::to_string(rate) + ": " + e.what());
            }
        }
    }
    report["od_ablation"] = od_rows;

    write_report(report, args.output);
    if (!failures.empty()) {
        std::printf("%zu run(s) failed:\n", failures.size());
        for (const auto& f : failures) std::printf("  %s\n", f.c_str());
        return 1;
    }
    return 0;
}

// --- subcommand: synth ----------------------------------------------------------

struct SynthArgs {
    std::string name;
    std::uint64_t seed = 7;
    std::string output;
    bool list = false;
};

int cmd_synth(const SynthArgs& args) {
    if (args.list) {
        for (const auto& name : synth::known_names()) std::printf("%s\n", name.c_str());
        return 0;
    }
    const auto ds = synth::by_name(args.name, args.seed);
    std::printf("%s: n=%d q=%d classes=%zu\n", ds.name.c_str(), ds.n(), ds.q, ds.classes.size());
    if (!args.output.empty()) {
        write_csv(ds, args.output);
        std::printf("written to %s\n", args.output.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"granular-ball generation and classification benchmark harness"};
    app.set_version_flag("--version", GBPP_VERSION);
    app.require_subcommand(1);

    GranulateArgs gran;
    auto* granulate_cmd =
        app.add_subcommand("granulate", "Granulate one dataset and export the ball set");
    add_input_options(granulate_cmd, gran.in, false);
    add_run_options(granulate_cmd, gran.run, false);
    granulate_cmd->add_option("--method", gran.method, "Granulation method")
        ->check(CLI::IsMember({"gbg++", "kmeans"}))
        ->capture_default_str();
    granulate_cmd->add_option("--output,-o", gran.output, "Ball-set output path (JSONL)");
    granulate_cmd->add_flag("--no-normalize", gran.no_normalize,
                            "Skip min-max normalization of the input");

    BenchmarkArgs bench;
    auto* bench_cmd =
        app.add_subcommand("benchmark", "Cross-validated comparison of the classifiers");
    add_input_options(bench_cmd, bench.in, true);
    add_run_options(bench_cmd, bench.run, true);
    bench_cmd->add_option("--methods", bench.methods, "Methods: gbknn++, gbknn, knn")
        ->delimiter(',')
        ->check(CLI::IsMember({"gbknn++", "gbknn", "knn"}))
        ->capture_default_str();
    bench_cmd->add_option("--noise", bench.noise, "Label-noise rates, e.g. 0.1,0.2")
        ->delimiter(',')
        ->check(CLI::Range(0.0, 1.0));
    bench_cmd->add_option("--purity-sweep", bench.purity_sweep,
                          "Sweep gbknn++ over purity start:end:step");
    bench_cmd->add_option("--knn-k", bench.knn_ks, "k grid for the plain kNN baseline")
        ->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_flag("--wilcoxon", bench.wilcoxon,
                        "Signed-rank test across datasets per method pair");
    bench_cmd->add_option("--output,-o", bench.output, "JSON report path");

    AblateArgs ablate;
    auto* ablate_cmd = app.add_subcommand("ablate", "Attention / outlier-detection ablations");
    add_input_options(ablate_cmd, ablate.in, true);
    add_run_options(ablate_cmd, ablate.run, true);
    ablate_cmd->add_option("--noise", ablate.noise, "Noise rates for the outlier ablation")
        ->delimiter(',')
        ->check(CLI::Range(0.0, 1.0));
    ablate_cmd->add_option("--output,-o", ablate.output, "JSON report path");

    SynthArgs synth_args;
    auto* synth_cmd = app.add_subcommand("synth", "Emit a built-in synthetic dataset as CSV");
    synth_cmd->add_option("--name", synth_args.name, "Dataset name");
    synth_cmd->add_option("--seed", synth_args.seed, "Generator seed")->capture_default_str();
    synth_cmd->add_option("--output,-o", synth_args.output, "CSV output path");
    synth_cmd->add_flag("--list", synth_args.list, "List known generator names");

    CLI11_PARSE(app, argc, argv);

    try {
        if (granulate_cmd->parsed()) return cmd_granulate(gran);
        if (bench_cmd->parsed())
            return cmd_benchmark(bench, make_manifest("benchmark", bench.in, bench.run, argc, argv));
        if (ablate_cmd->parsed())
            return cmd_ablate(ablate, make_manifest("ablate", ablate.in, ablate.run, argc, argv));
        if (synth_cmd->parsed()) return cmd_synth(synth_args);
    } catch (const CLI::Error& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
