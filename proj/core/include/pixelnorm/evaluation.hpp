#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pixelnorm/dataset.hpp"
#include "pixelnorm/matrix.hpp"
#include "pixelnorm/mlp.hpp"

namespace pixelnorm {

struct SplitFractions {
    double train = 0.70;
    double validation = 0.15;
    double test = 0.15;
};

// Disjoint index lists covering every row exactly once.
struct DataSplits {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
    SplitFractions fractions;
    std::uint64_t seed = 0;
};

// Seeded shuffle, then contiguous assignment. Train and validation sizes are
// the row count times their fraction rounded to the nearest integer; test
// takes the remainder, so every size lands within one row of its fraction.
DataSplits split(std::size_t rows, SplitFractions fractions = {}, std::uint64_t seed = 0);
DataSplits split(const Dataset& d, SplitFractions fractions = {}, std::uint64_t seed = 0);

// Positive class is churn = 1.
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
    double accuracy() const;
};

ConfusionMatrix confusion(const std::vector<int>& labels, const std::vector<int>& predictions);

// Curve from sweeping the decision threshold down over the distinct scores
// (ties grouped), with a +inf sentinel so the first point is (0,0); the last
// threshold equals the smallest score, so the curve ends at (1,1).
struct RocCurve {
    std::vector<double> thresholds;
    std::vector<double> fpr;
    std::vector<double> tpr;
    double auc = 0.0;  // trapezoidal integral of the curve
};

RocCurve roc(const std::vector<int>& labels, const std::vector<double>& scores);

// Histogram of target - output for the churn component, per split, over
// uniform bins spanning the combined error range.
struct ErrorHistogram {
    std::vector<double> bin_edges;  // bins + 1 edges, strictly increasing
    std::vector<std::string> split_names;
    std::vector<std::vector<std::size_t>> counts;  // one row of counts per split
};

ErrorHistogram error_histogram(const Matrix& targets, const Matrix& outputs,
                               std::size_t bins = 20);
ErrorHistogram error_histogram(const std::vector<Matrix>& targets,
                               const std::vector<Matrix>& outputs,
                               const std::vector<std::string>& split_names,
                               std::size_t bins = 20);

struct SplitEval {
    std::string name;
    ConfusionMatrix confusion;
};

struct EvalReport {
    std::vector<SplitEval> splits;  // train, validation, test, all
    RocCurve roc_all;               // over every row
    ErrorHistogram histogram;
    TrainTrace trace;
    double threshold = 0.5;

    double overall_accuracy() const { return splits.back().confusion.accuracy(); }
};

EvalReport evaluate_model(const MlpModel& m, const Matrix& x, const std::vector<int>& labels,
                          const DataSplits& splits, const TrainTrace& trace,
                          double threshold = 0.5);

// Writes report.json plus confusion_<split>.csv, roc.csv, error_hist.csv and
// trace.csv into dir (created if absent). Returns the paths written.
std::vector<std::string> write_report(const EvalReport& r, const std::string& dir);

// Per-epoch columns epoch,train_loss,val_loss,test_loss,grad_norm.
void write_trace_csv(const TrainTrace& trace, const std::string& path);

}  // namespace pixelnorm
