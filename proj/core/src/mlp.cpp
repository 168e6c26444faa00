#include "pixelnorm/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "pixelnorm/error.hpp"
#include "pixelnorm/rng.hpp"

namespace pixelnorm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_topology(const std::vector<std::size_t>& layer_sizes) {
    if (layer_sizes.size() < 2) throw DimensionMismatch("need at least input and output layers");
    for (std::size_t s : layer_sizes) {
        if (s < 1) throw DimensionMismatch("every layer needs at least one unit");
    }
}

// z = x W^T + b, one output row per input row. Sequential accumulation so
// results are reproducible bit-for-bit.
Matrix affine(const Matrix& x, const Matrix& w, const std::vector<double>& b) {
    Matrix z(x.rows, w.rows);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const double* xi = x.row(i);
        for (std::size_t j = 0; j < w.rows; ++j) {
            const double* wj = w.row(j);
            double acc = b[j];
            for (std::size_t k = 0; k < w.cols; ++k) acc += wj[k] * xi[k];
            z(i, j) = acc;
        }
    }
    return z;
}

struct ForwardPass {
    std::vector<Matrix> activations;  // activations[0] = input, then tanh layers
    Matrix logits;
};

ForwardPass run_forward(const MlpModel& m, const Matrix& x) {
    if (x.cols != m.input_size()) {
        throw DimensionMismatch("input has " + std::to_string(x.cols) + " features, model expects " +
                                std::to_string(m.input_size()));
    }
    ForwardPass fp;
    fp.activations.push_back(x);
    const std::size_t n_layers = m.weights.size();
    for (std::size_t l = 0; l < n_layers; ++l) {
        Matrix z = affine(fp.activations.back(), m.weights[l], m.biases[l]);
        if (l + 1 == n_layers) {
            fp.logits = std::move(z);
        } else {
            for (double& v : z.data) v = std::tanh(v);
            fp.activations.push_back(std::move(z));
        }
    }
    return fp;
}

Matrix softmax_rows(const Matrix& logits) {
    Matrix p(logits.rows, logits.cols);
    for (std::size_t i = 0; i < logits.rows; ++i) {
        const double* zi = logits.row(i);
        double zmax = zi[0];
        for (std::size_t j = 1; j < logits.cols; ++j) zmax = std::max(zmax, zi[j]);
        double sum = 0.0;
        for (std::size_t j = 0; j < logits.cols; ++j) {
            const double e = std::exp(zi[j] - zmax);
            p(i, j) = e;
            sum += e;
        }
        for (std::size_t j = 0; j < logits.cols; ++j) p(i, j) /= sum;
    }
    return p;
}

// Mean cross-entropy from logits via log-sum-exp, so a confident wrong answer
// yields a large finite loss instead of log(0).
double mean_cross_entropy(const Matrix& logits, const Matrix& y) {
    double total = 0.0;
    for (std::size_t i = 0; i < logits.rows; ++i) {
        const double* zi = logits.row(i);
        double zmax = zi[0];
        for (std::size_t j = 1; j < logits.cols; ++j) zmax = std::max(zmax, zi[j]);
        double sum = 0.0;
        for (std::size_t j = 0; j < logits.cols; ++j) sum += std::exp(zi[j] - zmax);
        const double lse = zmax + std::log(sum);
        double dot = 0.0;
        for (std::size_t j = 0; j < logits.cols; ++j) dot += y(i, j) * zi[j];
        total += lse - dot;
    }
    return total / static_cast<double>(logits.rows);
}

void check_targets(const Matrix& x, const Matrix& y, const MlpModel& m) {
    if (y.rows != x.rows || y.cols != m.output_size()) {
        throw DimensionMismatch("target matrix shape does not match inputs and output layer");
    }
}

double eval_loss(const MlpModel& m, const Matrix& x, const Matrix& y) {
    check_targets(x, y, m);
    if (x.rows == 0) throw DimensionMismatch("empty batch");
    return mean_cross_entropy(run_forward(m, x).logits, y);
}

std::pair<double, std::vector<double>> eval_loss_grad(const MlpModel& m, const Matrix& x,
                                                      const Matrix& y) {
    check_targets(x, y, m);
    if (x.rows == 0) throw DimensionMismatch("empty batch");

    ForwardPass fp = run_forward(m, x);
    const double loss_value = mean_cross_entropy(fp.logits, y);

    const std::size_t n = x.rows;
    const std::size_t n_layers = m.weights.size();

    // dL/dlogits = (softmax - y) / n
    Matrix delta = softmax_rows(fp.logits);
    for (std::size_t i = 0; i < delta.size(); ++i) {
        delta.data[i] = (delta.data[i] - y.data[i]) / static_cast<double>(n);
    }

    std::vector<Matrix> grad_w(n_layers);
    std::vector<std::vector<double>> grad_b(n_layers);

    for (std::size_t l = n_layers; l-- > 0;) {
        const Matrix& act = fp.activations[l];
        Matrix& gw = grad_w[l];
        gw = Matrix(m.weights[l].rows, m.weights[l].cols);
        grad_b[l].assign(m.weights[l].rows, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* di = delta.row(i);
            const double* ai = act.row(i);
            for (std::size_t j = 0; j < gw.rows; ++j) {
                double* gwj = gw.row(j);
                const double dij = di[j];
                for (std::size_t k = 0; k < gw.cols; ++k) gwj[k] += dij * ai[k];
                grad_b[l][j] += dij;
            }
        }
        if (l > 0) {
            // propagate through the tanh layer below
            Matrix prev(n, m.weights[l].cols);
            for (std::size_t i = 0; i < n; ++i) {
                const double* di = delta.row(i);
                const double* ai = act.row(i);
                double* pi = prev.row(i);
                for (std::size_t k = 0; k < prev.cols; ++k) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < m.weights[l].rows; ++j) {
                        acc += di[j] * m.weights[l](j, k);
                    }
                    pi[k] = acc * (1.0 - ai[k] * ai[k]);
                }
            }
            delta = std::move(prev);
        }
    }

    std::vector<double> flat;
    flat.reserve(m.parameter_count());
    for (std::size_t l = 0; l < n_layers; ++l) {
        flat.insert(flat.end(), grad_w[l].data.begin(), grad_w[l].data.end());
        flat.insert(flat.end(), grad_b[l].begin(), grad_b[l].end());
    }
    return {loss_value, std::move(flat)};
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::MaxEpochs: return "max_epochs";
        case StopReason::ValidationFailures: return "validation_failures";
        case StopReason::MinGradient: return "min_gradient";
    }
    return "unknown";
}

std::size_t MlpModel::parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        n += layer_sizes[l + 1] * layer_sizes[l] + layer_sizes[l + 1];
    }
    return n;
}

MlpModel init_model(const std::vector<std::size_t>& layer_sizes, std::uint64_t seed,
                    std::optional<double> uniform_radius) {
    check_topology(layer_sizes);

    MlpModel m;
    m.layer_sizes = layer_sizes;
    SplitMix64 rng(seed);
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const std::size_t fan_in = layer_sizes[l];
        const std::size_t fan_out = layer_sizes[l + 1];
        const double r = uniform_radius
                             ? *uniform_radius
                             : std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        Matrix w(fan_out, fan_in);
        for (double& v : w.data) v = rng.uniform(-r, r);
        m.weights.push_back(std::move(w));
        m.biases.emplace_back(fan_out, 0.0);
    }
    return m;
}

Matrix forward(const MlpModel& m, const Matrix& x) {
    return softmax_rows(run_forward(m, x).logits);
}

std::vector<double> forward(const MlpModel& m, const std::vector<double>& x) {
    Matrix batch(1, x.size());
    batch.data = x;
    Matrix p = forward(m, batch);
    return p.data;
}

std::pair<double, std::vector<double>> loss_and_gradient(const MlpModel& m, const Matrix& x,
                                                         const Matrix& y) {
    return eval_loss_grad(m, x, y);
}

double loss(const MlpModel& m, const Matrix& x, const Matrix& y) {
    return eval_loss(m, x, y);
}

std::vector<double> get_params(const MlpModel& m) {
    std::vector<double> flat;
    flat.reserve(m.parameter_count());
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        flat.insert(flat.end(), m.weights[l].data.begin(), m.weights[l].data.end());
        flat.insert(flat.end(), m.biases[l].begin(), m.biases[l].end());
    }
    return flat;
}

void set_params(MlpModel& m, const std::vector<double>& flat) {
    if (flat.size() != m.parameter_count()) {
        throw DimensionMismatch("flat parameter vector has wrong length");
    }
    std::size_t pos = 0;
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        std::copy_n(flat.begin() + pos, m.weights[l].data.size(), m.weights[l].data.begin());
        pos += m.weights[l].data.size();
        std::copy_n(flat.begin() + pos, m.biases[l].size(), m.biases[l].begin());
        pos += m.biases[l].size();
    }
}

std::pair<MlpModel, TrainTrace> train_scg(const MlpModel& model, const TrainData& data,
                                          const TrainConfig& cfg) {
    if (data.x_train.rows == 0) throw EmptyTrainingSet();
    const bool has_val = data.x_val.rows > 0;
    const bool has_test = data.x_test.rows > 0;

    TrainTrace trace;
    MlpModel work = model;
    const std::size_t n_params = work.parameter_count();

    if (cfg.max_epochs == 0) return {work, trace};

    auto loss_grad_at = [&](const std::vector<double>& w) {
        set_params(work, w);
        return eval_loss_grad(work, data.x_train, data.y_train);
    };
    auto loss_at = [&](const std::vector<double>& w) {
        set_params(work, w);
        return eval_loss(work, data.x_train, data.y_train);
    };
    auto side_loss = [&](const std::vector<double>& w, const Matrix& x, const Matrix& y) {
        set_params(work, w);
        return eval_loss(work, x, y);
    };

    std::vector<double> w = get_params(model);
    auto [train_loss, gradient] = loss_grad_at(w);
    if (!std::isfinite(train_loss) || !all_finite(gradient)) {
        throw TrainingDiverged(0, trace);
    }

    std::vector<double> r(n_params), p(n_params), s(n_params);
    for (std::size_t i = 0; i < n_params; ++i) r[i] = -gradient[i];
    p = r;

    double lambda = cfg.lambda_init;
    double lambda_bar = 0.0;
    bool success = true;
    double delta = 0.0;
    double p_norm2 = dot(p, p);
    double grad_norm = std::sqrt(p_norm2);

    std::vector<double> best_w = w;
    double best_val_loss = std::numeric_limits<double>::infinity();
    std::size_t val_failures = 0;
    bool stopped = false;

    std::vector<double> trial(n_params);

    for (std::size_t epoch = 1; epoch <= cfg.max_epochs && !stopped; ++epoch) {
        if (success) {
            // Second-order curvature estimate along p from a sigma-sized
            // perturbation of the gradient.
            p_norm2 = dot(p, p);
            if (!(p_norm2 > 0.0)) {
                trace.stop_reason = StopReason::MinGradient;
                break;
            }
            const double sigma_k = cfg.sigma / std::sqrt(p_norm2);
            for (std::size_t i = 0; i < n_params; ++i) trial[i] = w[i] + sigma_k * p[i];
            auto [_, grad_perturbed] = loss_grad_at(trial);
            if (!all_finite(grad_perturbed)) throw TrainingDiverged(epoch, trace);
            for (std::size_t i = 0; i < n_params; ++i) {
                s[i] = (grad_perturbed[i] - gradient[i]) / sigma_k;
            }
            delta = dot(p, s);
        }

        // Levenberg-Marquardt scaling; lambda_bar tracks the lambda already
        // folded into delta.
        delta += (lambda - lambda_bar) * p_norm2;
        if (delta <= 0.0) {
            lambda_bar = 2.0 * (lambda - delta / p_norm2);
            delta = -delta + lambda * p_norm2;
            lambda = lambda_bar;
        }
        if (!(delta > 0.0)) delta = std::numeric_limits<double>::min();

        const double mu = dot(p, r);
        const double alpha = mu / delta;

        for (std::size_t i = 0; i < n_params; ++i) trial[i] = w[i] + alpha * p[i];
        const double trial_loss = loss_at(trial);

        // Comparison parameter; >= 0 exactly when the step reduced the loss.
        const double big_delta =
            2.0 * delta * (train_loss - trial_loss) / (mu * mu);
        const bool accepted = std::isfinite(trial_loss) && big_delta >= 0.0;

        if (accepted) {
            w = trial;
            auto [new_loss, new_gradient] = loss_grad_at(w);
            if (!std::isfinite(new_loss) || !all_finite(new_gradient)) {
                throw TrainingDiverged(epoch, trace);
            }
            train_loss = new_loss;

            std::vector<double> r_new(n_params);
            for (std::size_t i = 0; i < n_params; ++i) r_new[i] = -new_gradient[i];

            lambda_bar = 0.0;
            success = true;
            if (epoch % n_params == 0) {
                p = r_new;  // periodic restart of the conjugate directions
            } else {
                const double beta = (dot(r_new, r_new) - dot(r_new, r)) / mu;
                for (std::size_t i = 0; i < n_params; ++i) p[i] = r_new[i] + beta * p[i];
                if (dot(p, r_new) <= 0.0) p = r_new;  // keep a descent direction
            }
            r = std::move(r_new);
            gradient = std::move(new_gradient);
            grad_norm = std::sqrt(dot(r, r));
            if (big_delta >= 0.75) lambda *= 0.25;
        } else {
            lambda_bar = lambda;
            success = false;
        }
        const double delta_cmp = std::isfinite(big_delta) ? big_delta : -1.0;
        if (delta_cmp < 0.25) lambda += delta * (1.0 - delta_cmp) / p_norm2;

        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_loss = train_loss;
        rec.validation_loss = has_val ? side_loss(w, data.x_val, data.y_val) : kNaN;
        rec.test_loss = has_test ? side_loss(w, data.x_test, data.y_test) : kNaN;
        rec.gradient_norm = grad_norm;
        trace.epochs.push_back(rec);

        if (has_val) {
            if (rec.validation_loss < best_val_loss) {
                best_val_loss = rec.validation_loss;
                trace.best_validation_epoch = epoch;
                best_w = w;
                val_failures = 0;
            } else {
                ++val_failures;
            }
        }

        if (grad_norm <= cfg.min_gradient_norm) {
            trace.stop_reason = StopReason::MinGradient;
            stopped = true;
        } else if (has_val && val_failures >= cfg.max_validation_failures) {
            trace.stop_reason = StopReason::ValidationFailures;
            stopped = true;
        } else if (epoch == cfg.max_epochs) {
            trace.stop_reason = StopReason::MaxEpochs;
        }
    }

    set_params(work, has_val ? best_w : w);
    return {work, trace};
}

std::vector<int> predict(const MlpModel& m, const Matrix& x, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw DataError("threshold must lie strictly between 0 and 1");
    }
    const Matrix p = forward(m, x);
    std::vector<int> labels(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) {
        labels[i] = p(i, 0) >= threshold ? 1 : 0;
    }
    return labels;
}

Matrix one_hot(const std::vector<int>& labels) {
    Matrix y(labels.size(), 2);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 0 && labels[i] != 1) {
            throw DataError("labels must be 0 or 1");
        }
        y(i, 0) = labels[i] == 1 ? 1.0 : 0.0;
        y(i, 1) = labels[i] == 1 ? 0.0 : 1.0;
    }
    return y;
}

void save_model(const SavedModel& m, const std::string& path) {
    nlohmann::json j;
    j["layer_sizes"] = m.model.layer_sizes;
    auto activations = nlohmann::json::array();
    for (std::size_t l = 0; l + 1 < m.model.layer_sizes.size(); ++l) {
        activations.push_back(l + 2 == m.model.layer_sizes.size() ? "softmax" : "tanh");
    }
    j["activations"] = activations;
    auto weights = nlohmann::json::array();
    for (const auto& w : m.model.weights) weights.push_back(w.data);
    j["weights"] = weights;
    j["biases"] = m.model.biases;
    j["train_config"] = {
        {"max_epochs", m.config.max_epochs},
        {"max_validation_failures", m.config.max_validation_failures},
        {"min_gradient_norm", m.config.min_gradient_norm},
        {"sigma", m.config.sigma},
        {"lambda_init", m.config.lambda_init},
        {"seed", m.config.seed},
        {"continuous_features", m.continuous_features},
    };
    j["trace_summary"] = {
        {"epochs_run", m.epochs_run},
        {"best_validation_epoch", m.best_validation_epoch},
        {"stop_reason", m.stop_reason},
        {"final_train_loss", m.final_train_loss},
    };

    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path + " for writing");
    file << j.dump(2) << '\n';
    if (!file) throw IoError("write failed on " + path);
}

SavedModel load_model(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path);

    nlohmann::json j;
    try {
        file >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed model file " + path + ": " + e.what());
    }

    SavedModel m;
    try {
        m.model.layer_sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
        check_topology(m.model.layer_sizes);
        const auto& weights = j.at("weights");
        const auto& biases = j.at("biases");
        for (std::size_t l = 0; l + 1 < m.model.layer_sizes.size(); ++l) {
            Matrix w(m.model.layer_sizes[l + 1], m.model.layer_sizes[l]);
            auto data = weights.at(l).get<std::vector<double>>();
            if (data.size() != w.size()) {
                throw DimensionMismatch("weight matrix " + std::to_string(l) + " has wrong size");
            }
            w.data = std::move(data);
            m.model.weights.push_back(std::move(w));
            auto b = biases.at(l).get<std::vector<double>>();
            if (b.size() != m.model.layer_sizes[l + 1]) {
                throw DimensionMismatch("bias vector " + std::to_string(l) + " has wrong size");
            }
            m.model.biases.push_back(std::move(b));
        }
        const auto& tc = j.at("train_config");
        m.config.max_epochs = tc.at("max_epochs").get<std::size_t>();
        m.config.max_validation_failures = tc.at("max_validation_failures").get<std::size_t>();
        m.config.min_gradient_norm = tc.at("min_gradient_norm").get<double>();
        m.config.sigma = tc.at("sigma").get<double>();
        m.config.lambda_init = tc.at("lambda_init").get<double>();
        m.config.seed = tc.at("seed").get<std::uint64_t>();
        m.continuous_features = tc.at("continuous_features").get<bool>();
        const auto& ts = j.at("trace_summary");
        m.epochs_run = ts.at("epochs_run").get<std::size_t>();
        m.best_validation_epoch = ts.at("best_validation_epoch").get<std::size_t>();
        m.stop_reason = ts.at("stop_reason").get<std::string>();
        m.final_train_loss = ts.at("final_train_loss").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed model file " + path + ": " + e.what());
    }
    return m;
}

}  // namespace pixelnorm
