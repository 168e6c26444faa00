#include "pixelnorm/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "pixelnorm/error.hpp"
#include "pixelnorm/rng.hpp"
#include "repr.hpp"

namespace pixelnorm {

namespace {

void check_binary(const std::vector<int>& v, const char* what) {
    for (int x : v) {
        if (x != 0 && x != 1) throw DataError(std::string(what) + " must be 0 or 1");
    }
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path.string() + " for writing");
    return file;
}

void finish_write(std::ofstream& file, const std::filesystem::path& path) {
    file.flush();
    if (!file) throw IoError("write failed on " + path.string());
}

}  // namespace

DataSplits split(std::size_t rows, SplitFractions f, std::uint64_t seed) {
    if (!(f.train > 0.0 && f.validation > 0.0 && f.test > 0.0)) {
        throw DataError("split fractions must be positive");
    }
    if (std::abs(f.train + f.validation + f.test - 1.0) > 1e-9) {
        throw DataError("split fractions must sum to 1");
    }
    if (rows < 3) throw TooFewRows(rows);

    std::vector<std::size_t> order(rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    SplitMix64 rng(seed);
    rng.shuffle(order);

    auto rounded = [rows](double frac) {
        return static_cast<std::size_t>(std::llround(static_cast<double>(rows) * frac));
    };
    std::size_t n_train = std::min(rounded(f.train), rows);
    std::size_t n_val = std::min(rounded(f.validation), rows - n_train);

    DataSplits s;
    s.fractions = f;
    s.seed = seed;
    s.train.assign(order.begin(), order.begin() + n_train);
    s.validation.assign(order.begin() + n_train, order.begin() + n_train + n_val);
    s.test.assign(order.begin() + n_train + n_val, order.end());
    return s;
}

DataSplits split(const Dataset& d, SplitFractions fractions, std::uint64_t seed) {
    return split(d.row_count(), fractions, seed);
}

double ConfusionMatrix::accuracy() const {
    return static_cast<double>(tp + tn) / static_cast<double>(total());
}

ConfusionMatrix confusion(const std::vector<int>& labels, const std::vector<int>& predictions) {
    if (labels.size() != predictions.size()) {
        throw LengthMismatch(labels.size(), predictions.size());
    }
    if (labels.empty()) throw DataError("need at least one sample");
    check_binary(labels, "labels");
    check_binary(predictions, "predictions");

    ConfusionMatrix c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1) {
            (predictions[i] == 1 ? c.tp : c.fn)++;
        } else {
            (predictions[i] == 1 ? c.fp : c.tn)++;
        }
    }
    return c;
}

RocCurve roc(const std::vector<int>& labels, const std::vector<double>& scores) {
    if (labels.size() != scores.size()) throw LengthMismatch(labels.size(), scores.size());
    check_binary(labels, "labels");
    for (double s : scores) {
        if (!std::isfinite(s)) throw DataError("scores must be finite");
    }
    const std::size_t n_pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    const std::size_t n_neg = labels.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) throw SingleClassInput();

    std::vector<std::size_t> order(labels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    RocCurve curve;
    curve.thresholds.push_back(std::numeric_limits<double>::infinity());
    curve.fpr.push_back(0.0);
    curve.tpr.push_back(0.0);

    std::size_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double threshold = scores[order[i]];
        while (i < order.size() && scores[order[i]] == threshold) {
            (labels[order[i]] == 1 ? tp : fp)++;
            ++i;
        }
        curve.thresholds.push_back(threshold);
        curve.fpr.push_back(static_cast<double>(fp) / static_cast<double>(n_neg));
        curve.tpr.push_back(static_cast<double>(tp) / static_cast<double>(n_pos));
    }

    double auc = 0.0;
    for (std::size_t k = 1; k < curve.fpr.size(); ++k) {
        auc += (curve.fpr[k] - curve.fpr[k - 1]) * (curve.tpr[k] + curve.tpr[k - 1]) / 2.0;
    }
    curve.auc = auc;
    return curve;
}

ErrorHistogram error_histogram(const Matrix& targets, const Matrix& outputs, std::size_t bins) {
    return error_histogram(std::vector<Matrix>{targets}, std::vector<Matrix>{outputs},
                           {"all"}, bins);
}

ErrorHistogram error_histogram(const std::vector<Matrix>& targets,
                               const std::vector<Matrix>& outputs,
                               const std::vector<std::string>& split_names, std::size_t bins) {
    if (bins < 1) throw DataError("need at least one histogram bin");
    if (targets.size() != outputs.size() || targets.size() != split_names.size()) {
        throw ShapeMismatch("per-split target, output and name lists must align");
    }

    // error = target - output on the churn component (column 0)
    std::vector<std::vector<double>> errors(targets.size());
    std::size_t total = 0;
    for (std::size_t s = 0; s < targets.size(); ++s) {
        if (targets[s].rows != outputs[s].rows || targets[s].cols != outputs[s].cols) {
            throw ShapeMismatch("targets and outputs differ in shape for split " + split_names[s]);
        }
        if (targets[s].rows > 0 && targets[s].cols < 1) {
            throw ShapeMismatch("need at least one output component");
        }
        errors[s].reserve(targets[s].rows);
        for (std::size_t i = 0; i < targets[s].rows; ++i) {
            errors[s].push_back(targets[s](i, 0) - outputs[s](i, 0));
        }
        total += targets[s].rows;
    }
    if (total == 0) throw ShapeMismatch("no samples to bin");

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& split_errors : errors) {
        for (double e : split_errors) {
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
    }
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }

    ErrorHistogram h;
    h.split_names = split_names;
    auto fill_edges = [&](double a, double b) {
        h.bin_edges.assign(bins + 1, 0.0);
        for (std::size_t i = 0; i <= bins; ++i) {
            h.bin_edges[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(bins);
        }
        h.bin_edges.front() = a;
        h.bin_edges.back() = b;
        for (std::size_t i = 1; i <= bins; ++i) {
            if (!(h.bin_edges[i] > h.bin_edges[i - 1])) return false;
        }
        return true;
    };
    if (!fill_edges(lo, hi)) {
        // span too narrow for the requested bin count; widen to a unit range
        const double mid = lo + (hi - lo) / 2.0;
        fill_edges(mid - 0.5, mid + 0.5);
    }

    for (const auto& split_errors : errors) {
        std::vector<std::size_t> counts(bins, 0);
        for (double e : split_errors) {
            const double t = (e - h.bin_edges.front()) /
                             (h.bin_edges.back() - h.bin_edges.front());
            auto idx = static_cast<std::size_t>(
                std::min(std::max(t, 0.0), 1.0) * static_cast<double>(bins));
            counts[std::min(idx, bins - 1)]++;  // last bin is closed
        }
        h.counts.push_back(std::move(counts));
    }
    return h;
}

EvalReport evaluate_model(const MlpModel& m, const Matrix& x, const std::vector<int>& labels,
                          const DataSplits& splits, const TrainTrace& trace, double threshold) {
    if (labels.size() != x.rows) throw LengthMismatch(labels.size(), x.rows);

    const Matrix probabilities = forward(m, x);
    const std::vector<int> predictions = predict(m, x, threshold);
    const Matrix targets = one_hot(labels);

    EvalReport report;
    report.threshold = threshold;
    report.trace = trace;

    std::vector<Matrix> split_targets, split_outputs;
    const std::vector<std::pair<std::string, const std::vector<std::size_t>*>> named = {
        {"train", &splits.train},
        {"validation", &splits.validation},
        {"test", &splits.test},
    };
    for (const auto& [name, indices] : named) {
        std::vector<int> sub_labels, sub_preds;
        Matrix sub_targets(indices->size(), targets.cols);
        Matrix sub_outputs(indices->size(), probabilities.cols);
        for (std::size_t i = 0; i < indices->size(); ++i) {
            const std::size_t row = (*indices)[i];
            if (row >= x.rows) throw DataError("split index out of range");
            sub_labels.push_back(labels[row]);
            sub_preds.push_back(predictions[row]);
            for (std::size_t c = 0; c < targets.cols; ++c) {
                sub_targets(i, c) = targets(row, c);
                sub_outputs(i, c) = probabilities(row, c);
            }
        }
        SplitEval se;
        se.name = name;
        if (!sub_labels.empty()) se.confusion = confusion(sub_labels, sub_preds);
        report.splits.push_back(std::move(se));
        split_targets.push_back(std::move(sub_targets));
        split_outputs.push_back(std::move(sub_outputs));
    }
    report.splits.push_back({"all", confusion(labels, predictions)});
    split_targets.push_back(targets);
    split_outputs.push_back(probabilities);

    std::vector<double> scores(x.rows);
    for (std::size_t i = 0; i < x.rows; ++i) scores[i] = probabilities(i, 0);
    report.roc_all = roc(labels, scores);

    report.histogram = error_histogram(split_targets, split_outputs,
                                       {"train", "validation", "test", "all"});
    return report;
}

std::vector<std::string> write_report(const EvalReport& r, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir + ": " + ec.message());

    std::vector<std::string> written;
    auto emit = [&](const std::string& name, auto&& body) {
        const fs::path path = fs::path(dir) / name;
        std::ofstream file = open_for_write(path);
        body(file);
        finish_write(file, path);
        written.push_back(path.string());
    };

    for (const SplitEval& se : r.splits) {
        emit("confusion_" + se.name + ".csv", [&](std::ofstream& f) {
            f << ",predicted_churn,predicted_retention\n";
            f << "actual_churn," << se.confusion.tp << ',' << se.confusion.fn << '\n';
            f << "actual_retention," << se.confusion.fp << ',' << se.confusion.tn << '\n';
        });
    }

    emit("roc.csv", [&](std::ofstream& f) {
        f << "threshold,fpr,tpr\n";
        for (std::size_t i = 0; i < r.roc_all.thresholds.size(); ++i) {
            f << shortest_repr(r.roc_all.thresholds[i]) << ',' << shortest_repr(r.roc_all.fpr[i])
              << ',' << shortest_repr(r.roc_all.tpr[i]) << '\n';
        }
    });

    emit("error_hist.csv", [&](std::ofstream& f) {
        f << "bin_lo,bin_hi";
        for (const std::string& name : r.histogram.split_names) f << ',' << name;
        f << '\n';
        const std::size_t bins = r.histogram.counts.empty() ? 0 : r.histogram.counts[0].size();
        for (std::size_t b = 0; b < bins; ++b) {
            f << shortest_repr(r.histogram.bin_edges[b]) << ','
              << shortest_repr(r.histogram.bin_edges[b + 1]);
            for (const auto& counts : r.histogram.counts) f << ',' << counts[b];
            f << '\n';
        }
    });

    write_trace_csv(r.trace, (fs::path(dir) / "trace.csv").string());
    written.push_back((fs::path(dir) / "trace.csv").string());

    nlohmann::json j;
    for (const SplitEval& se : r.splits) {
        j["accuracy"][se.name] =
            se.confusion.total() > 0 ? nlohmann::json(se.confusion.accuracy()) : nullptr;
        j["confusion"][se.name] = {{"tp", se.confusion.tp},
                                   {"fp", se.confusion.fp},
                                   {"tn", se.confusion.tn},
                                   {"fn", se.confusion.fn}};
    }
    j["roc"] = {{"auc", r.roc_all.auc}, {"point_count", r.roc_all.thresholds.size()}};
    j["histogram"] = {{"bins", r.histogram.counts.empty() ? 0 : r.histogram.counts[0].size()},
                      {"min_error", r.histogram.bin_edges.front()},
                      {"max_error", r.histogram.bin_edges.back()}};
    j["threshold"] = r.threshold;
    nlohmann::json training = {
        {"epochs_run", r.trace.epochs.size()},
        {"best_validation_epoch", r.trace.best_validation_epoch},
        {"stop_reason", to_string(r.trace.stop_reason)},
    };
    if (!r.trace.epochs.empty()) {
        training["final_train_loss"] = r.trace.epochs.back().train_loss;
        const double final_val = r.trace.epochs.back().validation_loss;
        training["final_validation_loss"] =
            std::isfinite(final_val) ? nlohmann::json(final_val) : nullptr;
    }
    j["training"] = std::move(training);

    std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["generated_at"] = stamp;

    emit("report.json", [&](std::ofstream& f) { f << j.dump(2) << '\n'; });
    return written;
}

void write_trace_csv(const TrainTrace& trace, const std::string& path) {
    std::ofstream file = open_for_write(path);
    file << "epoch,train_loss,val_loss,test_loss,grad_norm\n";
    for (const EpochRecord& e : trace.epochs) {
        file << e.epoch << ',' << shortest_repr(e.train_loss) << ','
             << shortest_repr(e.validation_loss) << ',' << shortest_repr(e.test_loss) << ','
             << shortest_repr(e.gradient_norm) << '\n';
    }
    finish_write(file, path);
}

}  // namespace pixelnorm
