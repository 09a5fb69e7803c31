#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gbpp/classify.hpp"
#include "gbpp/core.hpp"
#include "gbpp/granulation.hpp"

namespace gbpp {

enum class FileFormat { Csv, Libsvm };

FileFormat format_from_string(const std::string& s);
std::string to_string(FileFormat format);
std::string to_string(GranulationMethod method);
GranulationMethod method_from_string(const std::string& s);

struct LoadOptions {
    FileFormat format = FileFormat::Csv;
    std::string label_column;  // CSV: header name or 0-based index; empty = last column
    bool has_header = true;    // CSV only
    int dimensions = 0;        // LIBSVM: feature count; 0 = infer from max index
};

/// Parse a CSV or LIBSVM file into a Dataset. Source labels are mapped to
/// dense ids 0..C-1 (numeric label order when every label parses as a number,
/// lexicographic otherwise); the mapping is kept in Dataset::class_names.
/// Malformed input throws std::runtime_error naming the offending line.
Dataset load_dataset(const std::string& path, const LoadOptions& opts = {});

/// Per-feature range learned from a training split.
struct NormalizationParams {
    std::vector<double> min;
    std::vector<double> max;
};

NormalizationParams fit_minmax(const Dataset& train);

/// Scale features to [0,1] by the given train ranges. Constant features map
/// to 0; values outside the train range are not clamped. Throws when the
/// dataset is already normalized.
Dataset apply_minmax(const Dataset& ds, const NormalizationParams& params);

struct NormalizedBundle {
    Dataset train;
    std::vector<Dataset> others;
    NormalizationParams params;
};

/// Fit ranges on `train` and apply them to train and all `others`.
NormalizedBundle fit_apply_minmax(const Dataset& train, std::vector<Dataset> others = {});

/// One exported ball: geometry plus summary fields, no member list.
struct BallRecord {
    int ball_id = 0;
    std::vector<double> center;
    double radius = 0.0;
    int member_count = 0;
    int label = 0;
    double purity = 1.0;
    int generation = 0;
};

/// Contents of a ball-set file (line-delimited JSON records, version tagged).
struct BallSetFile {
    int version = 1;
    GranulationConfig config;
    int dataset_n = 0;
    int dataset_q = 0;
    std::string dataset_name;
    bool dataset_normalized = false;
    int iterations = 0;
    std::uint64_t distance_evaluations = 0;
    std::vector<int> outliers;
    std::vector<BallRecord> balls;
};

BallSetFile to_ball_file(const GranulationResult& result, const Dataset& ds);

/// Serialize / parse the ball-set document. write(import(f)) is byte-identical
/// to f: numeric fields use shortest round-trip decimals and keys are ordered.
void write_ball_file(const BallSetFile& file, const std::string& path);
BallSetFile import_balls(const std::string& path);

/// Convenience: to_ball_file + write_ball_file.
void export_balls(const GranulationResult& result, const Dataset& ds, const std::string& path);

/// Build a classifier from an exported ball set.
BallClassifier to_classifier(const BallSetFile& file, BallRule rule);

/// Write a dataset as CSV with an x1..xq header and a trailing label column
/// (source label text when known). Loads back via load_dataset.
void write_csv(const Dataset& ds, const std::string& path);

}  // namespace gbpp
