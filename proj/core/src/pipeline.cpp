#include "pixelnorm/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "pixelnorm/error.hpp"
#include "pixelnorm/imageio.hpp"
#include "pixelnorm/rng.hpp"
#include "repr.hpp"

namespace pixelnorm {

namespace fs = std::filesystem;

namespace {

void write_stats_csv(const Dataset& d, const ColumnStats& stats, const fs::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path.string() + " for writing");
    file << "column,min,max,mean\n";
    for (std::size_t c = 0; c < d.col_count(); ++c) {
        file << d.column_names[c] << ',' << shortest_repr(stats.min[c]) << ','
             << shortest_repr(stats.max[c]) << ',' << shortest_repr(stats.mean[c]) << '\n';
    }
    file << "(global)," << shortest_repr(stats.global_min) << ','
         << shortest_repr(stats.global_max) << ",\n";
    file.flush();
    if (!file) throw IoError("write failed on " + path.string());
}

}  // namespace

Matrix pipeline_features(const NormMatrix& normalized, bool continuous) {
    Matrix features(normalized.rows(), normalized.cols());
    if (continuous) {
        for (std::size_t i = 0; i < features.size(); ++i) {
            features.data[i] = normalized.values.data[i] / 255.0;
        }
    } else {
        const GrayImage img = quantize(normalized);
        for (std::size_t i = 0; i < features.size(); ++i) {
            features.data[i] = static_cast<double>(img.pixels[i]) / 255.0;
        }
    }
    return features;
}

PipelineOutcome run_pipeline(const PipelineConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw IoError("cannot create directory " + cfg.out_dir + ": " + ec.message());
    const fs::path out(cfg.out_dir);

    Dataset data;
    if (cfg.use_synth) {
        data = synth_churn(cfg.synth_rows, cfg.synth_cols, cfg.synth_seed, cfg.synth_separation);
    } else {
        LoadOptions opts;
        opts.label_column = cfg.label_column;
        opts.drop_columns = cfg.drop_columns;
        opts.impute_mean = cfg.impute_mean;
        data = load_csv(cfg.data_path, opts);
    }

    PipelineOutcome outcome;
    outcome.rows = data.row_count();
    outcome.cols = data.col_count();

    const ColumnStats stats = compute_stats(data);
    write_stats_csv(data, stats, out / "stats.csv");
    outcome.artifacts.push_back((out / "stats.csv").string());

    const NormMatrix normalized = normalize(data, NormMode::Global, 0.0, 255.0);
    const GrayImage image = quantize(normalized);

    write_pgm(image, (out / "image.pgm").string());
    outcome.artifacts.push_back((out / "image.pgm").string());
    save_params(normalized.params, (out / "image.pgm.norm.json").string());
    outcome.artifacts.push_back((out / "image.pgm.norm.json").string());

    write_surface_csv(surface_grid(image), (out / "surface.csv").string());
    outcome.artifacts.push_back((out / "surface.csv").string());

    const DataSplits splits = split(data.row_count(), cfg.fractions, derive_seed(cfg.seed, 0));
    const Matrix features = pipeline_features(normalized, cfg.continuous_features);
    const Matrix targets = one_hot(data.labels);

    auto gather = [&](const std::vector<std::size_t>& indices, const Matrix& src) {
        Matrix sub(indices.size(), src.cols);
        for (std::size_t i = 0; i < indices.size(); ++i) {
            for (std::size_t c = 0; c < src.cols; ++c) sub(i, c) = src(indices[i], c);
        }
        return sub;
    };

    TrainData td;
    td.x_train = gather(splits.train, features);
    td.y_train = gather(splits.train, targets);
    td.x_val = gather(splits.validation, features);
    td.y_val = gather(splits.validation, targets);
    td.x_test = gather(splits.test, features);
    td.y_test = gather(splits.test, targets);

    TrainConfig train_cfg = cfg.train;
    train_cfg.seed = cfg.seed;
    MlpModel model =
        init_model({data.col_count(), cfg.hidden_units, 2}, derive_seed(cfg.seed, 1));
    auto [trained, trace] = train_scg(model, td, train_cfg);
    outcome.trace = trace;

    SavedModel saved;
    saved.model = trained;
    saved.config = train_cfg;
    saved.continuous_features = cfg.continuous_features;
    saved.epochs_run = trace.epochs.size();
    saved.best_validation_epoch = trace.best_validation_epoch;
    saved.stop_reason = to_string(trace.stop_reason);
    saved.final_train_loss = trace.epochs.empty() ? std::nan("") : trace.epochs.back().train_loss;
    save_model(saved, (out / "model.json").string());
    outcome.artifacts.push_back((out / "model.json").string());

    outcome.report =
        evaluate_model(trained, features, data.labels, splits, trace, cfg.threshold);
    auto report_files = write_report(outcome.report, cfg.out_dir);
    outcome.artifacts.insert(outcome.artifacts.end(), report_files.begin(), report_files.end());

    return outcome;
}

}  // namespace pixelnorm
