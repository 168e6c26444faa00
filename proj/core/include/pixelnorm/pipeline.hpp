#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pixelnorm/dataset.hpp"
#include "pixelnorm/evaluation.hpp"
#include "pixelnorm/mlp.hpp"
#include "pixelnorm/normcodec.hpp"

namespace pixelnorm {

// End-to-end run: load (or synthesize) the table, normalize globally onto
// [0, 255], quantize to a grayscale image, export image + surface grid, split
// 70/15/15, train the classifier, evaluate and write the report bundle.
struct PipelineConfig {
    std::string data_path;  // CSV with a label column; ignored when use_synth
    bool use_synth = false;
    std::size_t synth_rows = 1000;
    std::size_t synth_cols = 17;
    std::uint64_t synth_seed = 7;
    double synth_separation = 6.0;

    std::string label_column = "churn";
    std::vector<std::string> drop_columns;
    bool impute_mean = false;

    std::uint64_t seed = 0;  // master seed; split and init seeds derive from it
    std::string out_dir = ".";
    std::size_t hidden_units = 10;
    SplitFractions fractions;
    TrainConfig train;
    double threshold = 0.5;
    // Features default to the quantized pixels scaled by 1/255; true feeds the
    // continuous normalized values scaled by 1/255 instead.
    bool continuous_features = false;
};

struct PipelineOutcome {
    std::size_t rows = 0;
    std::size_t cols = 0;
    EvalReport report;
    TrainTrace trace;
    std::vector<std::string> artifacts;

    double overall_accuracy() const { return report.overall_accuracy(); }
};

PipelineOutcome run_pipeline(const PipelineConfig& cfg);

// Feature matrix fed to the classifier: pixel intensities (or continuous
// normalized values) scaled by 1/255.
Matrix pipeline_features(const NormMatrix& normalized, bool continuous);

}  // namespace pixelnorm
