#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pixelnorm/error.hpp"
#include "pixelnorm/matrix.hpp"

namespace pixelnorm {

// Feed-forward classifier: tanh hidden layers, softmax output. Default
// topology is one hidden layer of 10 units between 17 inputs and 2 outputs.
// Class order is churn first: output 0 is P(churn), output 1 is P(retention);
// one-hot targets follow the same order.
struct MlpModel {
    std::vector<std::size_t> layer_sizes;
    std::vector<Matrix> weights;              // weights[l]: (layer_sizes[l+1], layer_sizes[l])
    std::vector<std::vector<double>> biases;  // biases[l]: layer_sizes[l+1]

    std::size_t input_size() const { return layer_sizes.front(); }
    std::size_t output_size() const { return layer_sizes.back(); }
    std::size_t parameter_count() const;
};

struct TrainConfig {
    std::size_t max_epochs = 1000;
    std::size_t max_validation_failures = 6;
    double min_gradient_norm = 1e-6;
    double sigma = 5.0e-5;        // perturbation for the second-order estimate
    double lambda_init = 5.0e-7;  // initial Levenberg-Marquardt scale
    std::uint64_t seed = 0;
};

enum class StopReason { MaxEpochs, ValidationFailures, MinGradient };

const char* to_string(StopReason r);

struct EpochRecord {
    std::size_t epoch = 0;          // 1-based
    double train_loss = 0.0;
    double validation_loss = 0.0;   // NaN when no validation set
    double test_loss = 0.0;         // NaN when no test set
    double gradient_norm = 0.0;
};

struct TrainTrace {
    std::vector<EpochRecord> epochs;
    std::size_t best_validation_epoch = 0;  // 0 when nothing was recorded
    StopReason stop_reason = StopReason::MaxEpochs;
};

// NonFiniteLoss carrying the epochs completed before divergence, so callers
// can still write out the partial trace.
struct TrainingDiverged : NonFiniteLoss {
    TrainTrace trace;
    TrainingDiverged(std::size_t epoch_, TrainTrace trace_)
        : NonFiniteLoss(epoch_), trace(std::move(trace_)) {}
};

// Materialized split matrices; validation and test may be empty (early
// stopping is disabled without a validation set).
struct TrainData {
    Matrix x_train, y_train;
    Matrix x_val, y_val;
    Matrix x_test, y_test;
};

// Uniform weights in [-r, r] with r = sqrt(6 / (fan_in + fan_out)), zero
// biases; deterministic for a fixed seed. uniform_radius overrides r for
// every layer (0 gives the all-zero debug init).
MlpModel init_model(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed,
                    std::optional<double> uniform_radius = std::nullopt);

// Class probabilities, one row per input row. Each row sums to 1.
Matrix forward(const MlpModel& m, const Matrix& x);
std::vector<double> forward(const MlpModel& m, const std::vector<double>& x);

// Mean cross-entropy over the batch and its gradient as one flat vector:
// layer by layer, weight matrix row-major, then biases.
std::pair<double, std::vector<double>> loss_and_gradient(const MlpModel& m, const Matrix& x,
                                                         const Matrix& y);
double loss(const MlpModel& m, const Matrix& x, const Matrix& y);

// Full parameter vector in the flat order above.
std::vector<double> get_params(const MlpModel& m);
void set_params(MlpModel& m, const std::vector<double>& flat);

// Scaled conjugate gradient (Moller, Neural Networks 6(4), 1993): one
// full-batch iteration per epoch, second-order curvature from a
// sigma-perturbed gradient difference, Levenberg-Marquardt lambda scaling,
// direction restart every parameter_count() iterations. Tracks validation
// loss per epoch and returns the weights of the best validation epoch.
std::pair<MlpModel, TrainTrace> train_scg(const MlpModel& m, const TrainData& data,
                                          const TrainConfig& cfg);

// Label 1 iff P(churn) >= threshold; an exact tie resolves to 1.
std::vector<int> predict(const MlpModel& m, const Matrix& x, double threshold = 0.5);

// One-hot targets in class order churn first: label 1 -> [1, 0], 0 -> [0, 1].
Matrix one_hot(const std::vector<int>& labels);

// JSON model file: layer sizes, activations, weights, biases, the training
// configuration and a trace summary.
struct SavedModel {
    MlpModel model;
    TrainConfig config;
    bool continuous_features = false;  // features fed as continuous values instead of pixels
    std::size_t epochs_run = 0;
    std::size_t best_validation_epoch = 0;
    std::string stop_reason = "max_epochs";
    double final_train_loss = 0.0;
};

void save_model(const SavedModel& m, const std::string& path);
SavedModel load_model(const std::string& path);

}  // namespace pixelnorm
