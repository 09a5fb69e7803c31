#include "gbpp/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gbpp {

using nlohmann::json;

FileFormat format_from_string(const std::string& s) {
    if (s == "csv") return FileFormat::Csv;
    if (s == "libsvm") return FileFormat::Libsvm;
    throw std::invalid_argument("unknown dataset format: " + s);
}

std::string to_string(FileFormat format) {
    return format == FileFormat::Csv ? "csv" : "libsvm";
}

std::string to_string(GranulationMethod method) {
    return method == GranulationMethod::GbgPlusPlus ? "gbg++" : "kmeans";
}

GranulationMethod method_from_string(const std::string& s) {
    if (s == "gbg++") return GranulationMethod::GbgPlusPlus;
    if (s == "kmeans") return GranulationMethod::KMeansBaseline;
    throw std::invalid_argument("unknown granulation method: " + s);
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size() && std::isfinite(out);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

[[noreturn]] void fail_line(const std::string& path, size_t line_no, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

struct RawRow {
    std::vector<double> features;
    std::string label_text;
    double label_value = 0.0;
    bool label_numeric = false;
};

Dataset assemble(std::vector<RawRow> rows, int q, const std::string& path) {
    if (rows.empty()) throw std::runtime_error(path + ": empty dataset");
    const bool all_numeric =
        std::all_of(rows.begin(), rows.end(), [](const RawRow& r) { return r.label_numeric; });

    // Dense ids follow numeric order when possible, text order otherwise.
    std::map<std::string, int> by_text;
    std::map<double, int> by_value;
    std::vector<std::string> names;
    if (all_numeric) {
        for (const auto& r : rows) by_value.emplace(r.label_value, 0);
        int next = 0;
        for (auto& [value, id] : by_value) id = next++;
        names.resize(by_value.size());
        for (const auto& r : rows) {
            auto& name = names[static_cast<size_t>(by_value[r.label_value])];
            if (name.empty()) name = r.label_text;
        }
    } else {
        for (const auto& r : rows) by_text.emplace(r.label_text, 0);
        int next = 0;
        for (auto& [text, id] : by_text) id = next++;
        names.resize(by_text.size());
        for (const auto& [text, id] : by_text) names[static_cast<size_t>(id)] = text;
    }

    Dataset ds;
    ds.q = q;
    ds.source_path = path;
    ds.class_names = std::move(names);
    ds.samples.reserve(rows.size());
    int index = 0;
    for (auto& r : rows) {
        Sample s;
        s.features = std::move(r.features);
        s.label = all_numeric ? by_value[r.label_value] : by_text[r.label_text];
        s.index = index++;
        ds.samples.push_back(std::move(s));
    }
    ds.rebuild_classes();
    ds.validate();
    return ds;
}

Dataset load_csv(const std::string& path, const LoadOptions& opts) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    std::string line;
    size_t line_no = 0;
    std::vector<std::string> header;
    if (opts.has_header) {
        if (!std::getline(in, line)) throw std::runtime_error(path + ": empty dataset");
        ++line_no;
        header = split_csv_line(line);
    }

    int label_col = -1;  // resolved on the first data row when the column count is known
    auto resolve_label_col = [&](int n_cols, size_t at_line) {
        if (opts.label_column.empty()) return n_cols - 1;
        if (opts.has_header) {
            auto it = std::find(header.begin(), header.end(), opts.label_column);
            if (it != header.end()) return static_cast<int>(it - header.begin());
        }
        try {
            size_t used = 0;
            int idx = std::stoi(opts.label_column, &used);
            if (used == opts.label_column.size() && idx >= 0 && idx < n_cols) return idx;
        } catch (const std::exception&) {
        }
        fail_line(path, at_line, "label column '" + opts.label_column + "' not found");
    };

    std::vector<RawRow> rows;
    int n_cols = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (n_cols < 0) {
            n_cols = static_cast<int>(fields.size());
            if (n_cols < 2) fail_line(path, line_no, "need at least one feature and a label");
            if (opts.has_header && static_cast<int>(header.size()) != n_cols)
                fail_line(path, line_no, "column count differs from the header");
            label_col = resolve_label_col(n_cols, line_no);
        } else if (static_cast<int>(fields.size()) != n_cols) {
            fail_line(path, line_no,
                      "expected " + std::to_string(n_cols) + " columns, got " +
                          std::to_string(fields.size()));
        }
        RawRow row;
        for (int c = 0; c < n_cols; ++c) {
            const std::string& f = fields[static_cast<size_t>(c)];
            if (c == label_col) {
                row.label_text = f;
                row.label_numeric = parse_double(f, row.label_value);
                if (f.empty()) fail_line(path, line_no, "empty label");
            } else {
                double v;
                if (!parse_double(f, v))
                    fail_line(path, line_no, "non-numeric feature '" + f + "'");
                row.features.push_back(v);
            }
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error(path + ": empty dataset");
    return assemble(std::move(rows), n_cols - 1, path);
}

Dataset load_libsvm(const std::string& path, const LoadOptions& opts) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    struct SparseRow {
        std::string label_text;
        double label_value = 0.0;
        std::vector<std::pair<int, double>> entries;
    };
    std::vector<SparseRow> sparse;
    std::string line;
    size_t line_no = 0;
    int max_index = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(line);
        if (body.empty()) continue;
        std::istringstream ss(body);
        SparseRow row;
        ss >> row.label_text;
        if (!parse_double(row.label_text, row.label_value))
            fail_line(path, line_no, "non-numeric label '" + row.label_text + "'");
        std::string tok;
        while (ss >> tok) {
            const size_t colon = tok.find(':');
            if (colon == std::string::npos)
                fail_line(path, line_no, "malformed entry '" + tok + "'");
            int idx;
            double val;
            try {
                idx = std::stoi(tok.substr(0, colon));
            } catch (const std::exception&) {
                fail_line(path, line_no, "malformed index in '" + tok + "'");
            }
            if (!parse_double(tok.substr(colon + 1), val))
                fail_line(path, line_no, "non-numeric value in '" + tok + "'");
            if (idx < 1) fail_line(path, line_no, "feature indices are 1-based");
            if (opts.dimensions > 0 && idx > opts.dimensions)
                fail_line(path, line_no,
                          "index " + std::to_string(idx) + " exceeds declared dimensions");
            max_index = std::max(max_index, idx);
            row.entries.emplace_back(idx, val);
        }
        sparse.push_back(std::move(row));
    }
    if (sparse.empty()) throw std::runtime_error(path + ": empty dataset");

    const int q = opts.dimensions > 0 ? opts.dimensions : max_index;
    std::vector<RawRow> rows;
    rows.reserve(sparse.size());
    for (auto& sr : sparse) {
        RawRow row;
        row.label_text = sr.label_text;
        row.label_value = sr.label_value;
        row.label_numeric = true;
        row.features.assign(static_cast<size_t>(q), 0.0);
        for (const auto& [idx, val] : sr.entries) row.features[static_cast<size_t>(idx - 1)] = val;
        rows.push_back(std::move(row));
    }
    return assemble(std::move(rows), q, path);
}

}  // namespace

Dataset load_dataset(const std::string& path, const LoadOptions& opts) {
    Dataset ds = opts.format == FileFormat::Csv ? load_csv(path, opts) : load_libsvm(path, opts);
    const size_t slash = path.find_last_of("/\\");
    std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
    const size_t dot = stem.find_last_of('.');
    if (dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
    ds.name = stem;
    return ds;
}

NormalizationParams fit_minmax(const Dataset& train) {
    if (train.n() == 0) throw std::invalid_argument("fit_minmax: empty training set");
    NormalizationParams params;
    params.min = train.samples.front().features;
    params.max = train.samples.front().features;
    for (const auto& s : train.samples)
        for (int d = 0; d < train.q; ++d) {
            const double v = s.features[static_cast<size_t>(d)];
            params.min[static_cast<size_t>(d)] = std::min(params.min[static_cast<size_t>(d)], v);
            params.max[static_cast<size_t>(d)] = std::max(params.max[static_cast<size_t>(d)], v);
        }
    return params;
}

Dataset apply_minmax(const Dataset& ds, const NormalizationParams& params) {
    if (ds.normalized) throw std::invalid_argument("apply_minmax: dataset already normalized");
    if (static_cast<int>(params.min.size()) != ds.q)
        throw std::invalid_argument("apply_minmax: dimension mismatch");
    Dataset out = ds;
    for (auto& s : out.samples)
        for (int d = 0; d < ds.q; ++d) {
            const double lo = params.min[static_cast<size_t>(d)];
            const double hi = params.max[static_cast<size_t>(d)];
            double& v = s.features[static_cast<size_t>(d)];
            v = hi > lo ? (v - lo) / (hi - lo) : 0.0;
        }
    out.normalized = true;
    return out;
}

NormalizedBundle fit_apply_minmax(const Dataset& train, std::vector<Dataset> others) {
    NormalizedBundle bundle;
    bundle.params = fit_minmax(train);
    bundle.train = apply_minmax(train, bundle.params);
    bundle.others.reserve(others.size());
    for (auto& ds : others) bundle.others.push_back(apply_minmax(ds, bundle.params));
    return bundle;
}

namespace {

json config_to_json(const GranulationConfig& cfg) {
    return json{{"purity_threshold", cfg.purity_threshold},
                {"method", to_string(cfg.method)},
                {"enable_outlier_detection", cfg.enable_outlier_detection},
                {"enable_am", cfg.enable_am},
                {"kmeans_seed", cfg.kmeans_seed},
                {"kmeans_k", cfg.kmeans_k},
                {"max_iterations", cfg.max_iterations}};
}

GranulationConfig config_from_json(const json& j) {
    GranulationConfig cfg;
    cfg.purity_threshold = j.at("purity_threshold").get<double>();
    cfg.method = method_from_string(j.at("method").get<std::string>());
    cfg.enable_outlier_detection = j.at("enable_outlier_detection").get<bool>();
    cfg.enable_am = j.at("enable_am").get<bool>();
    cfg.kmeans_seed = j.at("kmeans_seed").get<std::uint64_t>();
    cfg.kmeans_k = j.at("kmeans_k").get<int>();
    cfg.max_iterations = j.at("max_iterations").get<int>();
    return cfg;
}

}  // namespace

BallSetFile to_ball_file(const GranulationResult& result, const Dataset& ds) {
    BallSetFile file;
    file.config = result.config;
    file.dataset_n = ds.n();
    file.dataset_q = ds.q;
    file.dataset_name = ds.name;
    file.dataset_normalized = ds.normalized;
    file.iterations = result.iterations;
    file.distance_evaluations = result.counters.distance_evaluations;
    file.outliers = result.outliers;
    file.balls.reserve(result.balls.size());
    for (const auto& b : result.balls)
        file.balls.push_back({b.ball_id, b.center, b.radius, static_cast<int>(b.members.size()),
                              b.label, b.purity, b.generation});
    return file;
}

void write_ball_file(const BallSetFile& file, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << json{{"format", "gbpp-balls"}, {"version", file.version}}.dump() << "\n";
    out << json{{"type", "run"},
                {"config", config_to_json(file.config)},
                {"dataset",
                 {{"n", file.dataset_n},
                  {"q", file.dataset_q},
                  {"name", file.dataset_name},
                  {"normalized", file.dataset_normalized}}},
                {"iterations", file.iterations},
                {"distance_evaluations", file.distance_evaluations},
                {"outliers", file.outliers}}
               .dump()
        << "\n";
    for (const auto& b : file.balls)
        out << json{{"type", "ball"},
                    {"ball_id", b.ball_id},
                    {"center", b.center},
                    {"radius", b.radius},
                    {"member_count", b.member_count},
                    {"label", b.label},
                    {"purity", b.purity},
                    {"generation", b.generation}}
                   .dump()
            << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

BallSetFile import_balls(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    size_t line_no = 0;
    BallSetFile file;
    bool saw_header = false, saw_run = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            fail_line(path, line_no, std::string("bad record: ") + e.what());
        }
        if (!saw_header) {
            if (j.value("format", "") != "gbpp-balls")
                fail_line(path, line_no, "not a gbpp ball file");
            file.version = j.at("version").get<int>();
            if (file.version != 1)
                fail_line(path, line_no, "unsupported version " + std::to_string(file.version));
            saw_header = true;
            continue;
        }
        const std::string type = j.value("type", "");
        if (type == "run") {
            file.config = config_from_json(j.at("config"));
            file.dataset_n = j.at("dataset").at("n").get<int>();
            file.dataset_q = j.at("dataset").at("q").get<int>();
            file.dataset_name = j.at("dataset").at("name").get<std::string>();
            file.dataset_normalized = j.at("dataset").at("normalized").get<bool>();
            file.iterations = j.at("iterations").get<int>();
            file.distance_evaluations = j.at("distance_evaluations").get<std::uint64_t>();
            file.outliers = j.at("outliers").get<std::vector<int>>();
            saw_run = true;
        } else if (type == "ball") {
            BallRecord b;
            b.ball_id = j.at("ball_id").get<int>();
            b.center = j.at("center").get<std::vector<double>>();
            b.radius = j.at("radius").get<double>();
            b.member_count = j.at("member_count").get<int>();
            b.label = j.at("label").get<int>();
            b.purity = j.at("purity").get<double>();
            b.generation = j.at("generation").get<int>();
            file.balls.push_back(std::move(b));
        } else {
            fail_line(path, line_no, "unknown record type '" + type + "'");
        }
    }
    if (!saw_header || !saw_run)
        throw std::runtime_error(path + ": truncated ball file");
    return file;
}

void export_balls(const GranulationResult& result, const Dataset& ds, const std::string& path) {
    write_ball_file(to_ball_file(result, ds), path);
}

void write_csv(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (int d = 1; d <= ds.q; ++d) out << "x" << d << ",";
    out << "label\n";
    for (const auto& s : ds.samples) {
        for (double v : s.features) {
            char buf[32];
            const auto res = std::to_chars(buf, buf + sizeof(buf), v);
            out.write(buf, res.ptr - buf);
            out << ",";
        }
        if (static_cast<size_t>(s.label) < ds.class_names.size() &&
            !ds.class_names[static_cast<size_t>(s.label)].empty())
            out << ds.class_names[static_cast<size_t>(s.label)];
        else
            out << s.label;
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

BallClassifier to_classifier(const BallSetFile& file, BallRule rule) {
    std::vector<BallClassifier::BallView> views;
    views.reserve(file.balls.size());
    for (const auto& b : file.balls)
        views.push_back(
            {b.center, b.radius, b.label, static_cast<std::uint64_t>(b.member_count), b.ball_id});
    return BallClassifier::from_views(std::move(views), rule);
}

}  // namespace gbpp
