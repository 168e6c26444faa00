#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pixelnorm/bench.hpp"
#include "pixelnorm/dataset.hpp"
#include "pixelnorm/error.hpp"
#include "pixelnorm/evaluation.hpp"
#include "pixelnorm/imageio.hpp"
#include "pixelnorm/manifest.hpp"
#include "pixelnorm/mlp.hpp"
#include "pixelnorm/normcodec.hpp"
#include "pixelnorm/pipeline.hpp"
#include "pixelnorm/rng.hpp"
#include "pixelnorm/version.hpp"

namespace fs = std::filesystem;
using namespace pixelnorm;

namespace {

std::uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// Effective seed: the flag when given, otherwise a fresh one printed to
// stdout so the run stays reproducible after the fact.
std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t value) {
    if (opt->count() > 0) return value;
    const std::uint64_t drawn = entropy_seed();
    std::cout << "seed: " << drawn << '\n';
    return drawn;
}

std::string default_out_dir() {
    const char* env = std::getenv("PIXELNORM_OUT_DIR");
    return env && *env ? env : ".";
}

std::string relative_to(const std::string& path, const fs::path& base) {
    std::error_code ec;
    const fs::path rel = fs::relative(path, base.empty() ? fs::path(".") : base, ec);
    return ec || rel.empty() ? path : rel.string();
}

// Manifests normalize the output directory to "." and store artifacts
// relative to themselves, so two runs into different directories compare
// equal and the tree can be moved.
void finish_manifest(RunManifest& m, const std::vector<std::string>& artifacts,
                     const fs::path& base, const fs::path& manifest_path) {
    for (const std::string& a : artifacts) m.artifacts.push_back(relative_to(a, base));
    m.artifacts.push_back(relative_to(manifest_path.string(), base));
    m.tool_version = kVersion;
    write_manifest(m, manifest_path.string());
}

std::string join(const std::vector<std::string>& v, char sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += sep;
        out += v[i];
    }
    return out;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

// Round-trip exact, unlike std::to_string.
std::string repr(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

StopReason parse_stop_reason(const std::string& s) {
    if (s == "validation_failures") return StopReason::ValidationFailures;
    if (s == "min_gradient") return StopReason::MinGradient;
    return StopReason::MaxEpochs;
}

struct DataFlags {
    std::string label = "churn";
    std::vector<std::string> drop;
    bool impute_mean = false;

    void attach(CLI::App* cmd, const std::string& default_label) {
        label = default_label;
        cmd->add_option("--label", label,
                        "Label column name; empty string for label-free data")
            ->capture_default_str();
        cmd->add_option("--drop", drop, "Column to discard before ingestion (repeatable)");
        cmd->add_flag("--impute-mean", impute_mean,
                      "Fill empty numeric cells with the column mean");
    }

    LoadOptions options() const {
        LoadOptions o;
        o.label_column = label;
        o.drop_columns = drop;
        o.impute_mean = impute_mean;
        return o;
    }

    void record(RunManifest& m) const {
        m.parameters["label"] = label;
        m.parameters["drop"] = join(drop, ';');
        m.parameters["impute_mean"] = bool_str(impute_mean);
    }
};

struct TrainFlags {
    std::size_t hidden_units = 10;
    TrainConfig config;
    double threshold = 0.5;
    bool continuous_features = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--hidden-units", hidden_units, "Hidden layer width")
            ->capture_default_str();
        cmd->add_option("--max-epochs", config.max_epochs, "Training epoch cap")
            ->capture_default_str();
        cmd->add_option("--val-failures", config.max_validation_failures,
                        "Consecutive non-improving validation epochs before stopping")
            ->capture_default_str();
        cmd->add_option("--min-grad", config.min_gradient_norm,
                        "Gradient norm below which training stops")
            ->capture_default_str();
        cmd->add_option("--sigma", config.sigma, "Perturbation for the curvature estimate")
            ->capture_default_str();
        cmd->add_option("--lambda", config.lambda_init, "Initial curvature regularizer")
            ->capture_default_str();
        cmd->add_option("--threshold", threshold, "Churn probability decision threshold")
            ->capture_default_str();
        cmd->add_flag("--continuous-features", continuous_features,
                      "Feed continuous normalized values instead of quantized pixels");
    }

    void record(RunManifest& m) const {
        m.parameters["hidden_units"] = std::to_string(hidden_units);
        m.parameters["max_epochs"] = std::to_string(config.max_epochs);
        m.parameters["val_failures"] = std::to_string(config.max_validation_failures);
        m.parameters["min_grad"] = repr(config.min_gradient_norm);
        m.parameters["sigma"] = repr(config.sigma);
        m.parameters["lambda"] = repr(config.lambda_init);
        m.parameters["threshold"] = repr(threshold);
        m.parameters["continuous_features"] = bool_str(continuous_features);
    }
};

struct SynthArgs {
    std::size_t rows = 1000;
    std::size_t cols = 17;
    std::uint64_t seed = 7;
    double separation = 6.0;
};

SynthArgs parse_synth(const std::string& text) {
    SynthArgs s;
    unsigned long long rows = 0, cols = 0, seed = 0;
    double sep = 0.0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%llu,%llu,%llu,%lf%c", &rows, &cols, &seed, &sep, &extra) !=
        4) {
        throw CLI::ValidationError("--synth", "expected ROWS,COLS,SEED,SEPARATION");
    }
    s.rows = rows;
    s.cols = cols;
    s.seed = seed;
    s.separation = sep;
    return s;
}

int cmd_reproduce(const std::string& data, const std::string& synth_text, bool use_synth,
                  std::uint64_t seed, const std::string& out_dir, const DataFlags& df,
                  const TrainFlags& tf) {
    PipelineConfig cfg;
    cfg.seed = seed;
    cfg.out_dir = out_dir;
    cfg.label_column = df.label;
    cfg.drop_columns = df.drop;
    cfg.impute_mean = df.impute_mean;
    cfg.hidden_units = tf.hidden_units;
    cfg.train = tf.config;
    cfg.threshold = tf.threshold;
    cfg.continuous_features = tf.continuous_features;
    if (use_synth) {
        const SynthArgs s = parse_synth(synth_text);
        cfg.use_synth = true;
        cfg.synth_rows = s.rows;
        cfg.synth_cols = s.cols;
        cfg.synth_seed = s.seed;
        cfg.synth_separation = s.separation;
    } else {
        cfg.data_path = data;
    }

    PipelineOutcome outcome;
    try {
        outcome = run_pipeline(cfg);
    } catch (const TrainingDiverged& e) {
        try {
            write_trace_csv(e.trace, (fs::path(out_dir) / "trace.csv").string());
            std::cerr << "partial trace written to " << (fs::path(out_dir) / "trace.csv").string()
                      << '\n';
        } catch (const Error&) {
        }
        throw;
    }

    RunManifest m;
    m.command = "reproduce";
    m.seed = seed;
    if (use_synth) {
        m.parameters["synth"] = synth_text;
    } else {
        m.parameters["data"] = data;
        m.input_hashes[data] = hash_file(data);
    }
    df.record(m);
    tf.record(m);
    m.parameters["out_dir"] = ".";
    finish_manifest(m, outcome.artifacts, out_dir, fs::path(out_dir) / "manifest.json");

    const ConfusionMatrix& all = outcome.report.splits.back().confusion;
    std::cout << "rows " << outcome.rows << ", attributes " << outcome.cols << '\n';
    std::printf("overall accuracy %.4f (%.2f%%), %zu of %zu correct\n",
                all.accuracy(), 100.0 * all.accuracy(), all.tp + all.tn, all.total());
    std::cout << "auc " << outcome.report.roc_all.auc << '\n';
    std::cout << "best validation epoch " << outcome.trace.best_validation_epoch << " of "
              << outcome.trace.epochs.size() << " epochs, stop reason "
              << to_string(outcome.trace.stop_reason) << '\n';
    std::cout << "artifacts in " << out_dir << '\n';
    return 0;
}

int cmd_normalize(const std::string& input, const std::string& out, const std::string& mode_name,
                  double a, double b, const DataFlags& df) {
    const Dataset d = load_csv(input, df.options());
    const NormMode mode = mode_name == "per-column" ? NormMode::PerColumn : NormMode::Global;
    const NormMatrix n = normalize(d, mode, a, b);

    write_matrix_csv(n.values, d.column_names, out);
    const std::string sidecar = out + ".norm.json";
    save_params(n.params, sidecar);

    RunManifest m;
    m.command = "normalize";
    m.parameters["input"] = input;
    m.parameters["mode"] = mode_name;
    m.parameters["a"] = repr(a);
    m.parameters["b"] = repr(b);
    m.parameters["out"] = fs::path(out).filename().string();
    df.record(m);
    m.input_hashes[input] = hash_file(input);
    finish_manifest(m, {out, sidecar}, fs::path(out).parent_path(), out + ".manifest.json");

    std::cout << "normalized " << n.rows() << "x" << n.cols() << " -> " << out << " (sidecar "
              << sidecar << ")\n";
    if (!n.params.degenerate_columns.empty()) {
        std::cout << n.params.degenerate_columns.size()
                  << " zero-span column(s) mapped to the interval start\n";
    }
    return 0;
}

int cmd_denormalize(const std::string& input, const std::string& params_path,
                    const std::string& out) {
    LoadOptions opts;
    opts.label_column.clear();
    const Dataset d = load_csv(input, opts);
    const NormParams p = load_params(params_path);
    const Matrix restored = denormalize(d.values, p);
    write_matrix_csv(restored, d.column_names, out);

    RunManifest m;
    m.command = "denormalize";
    m.parameters["input"] = input;
    m.parameters["params"] = params_path;
    m.parameters["out"] = fs::path(out).filename().string();
    m.input_hashes[input] = hash_file(input);
    m.input_hashes[params_path] = hash_file(params_path);
    finish_manifest(m, {out}, fs::path(out).parent_path(), out + ".manifest.json");

    std::cout << "restored " << restored.rows << "x" << restored.cols << " -> " << out << '\n';
    return 0;
}

int cmd_render(const std::string& input, const std::string& out, const std::string& surface,
               const std::string& surface_matrix, const DataFlags& df) {
    const Dataset d = load_csv(input, df.options());
    const NormMatrix n = normalize(d, NormMode::Global, 0.0, 255.0);
    const GrayImage img = quantize(n);

    write_pgm(img, out);
    const std::string sidecar = out + ".norm.json";
    save_params(n.params, sidecar);
    std::vector<std::string> artifacts = {out, sidecar};
    if (!surface.empty()) {
        write_surface_csv(surface_grid(img), surface);
        artifacts.push_back(surface);
    }
    if (!surface_matrix.empty()) {
        write_surface_matrix(surface_grid(img), surface_matrix);
        artifacts.push_back(surface_matrix);
    }

    RunManifest m;
    m.command = "render";
    m.parameters["input"] = input;
    m.parameters["out"] = fs::path(out).filename().string();
    if (!surface.empty()) m.parameters["surface"] = fs::path(surface).filename().string();
    if (!surface_matrix.empty()) {
        m.parameters["surface_matrix"] = fs::path(surface_matrix).filename().string();
    }
    df.record(m);
    m.input_hashes[input] = hash_file(input);
    finish_manifest(m, artifacts, fs::path(out).parent_path(), out + ".manifest.json");

    std::cout << "image " << img.width << "x" << img.height << " -> " << out << '\n';
    return 0;
}

int cmd_train(const std::string& data, std::uint64_t seed, const std::string& out_dir,
              const DataFlags& df, const TrainFlags& tf) {
    const Dataset d = load_csv(data, df.options());
    const NormMatrix n = normalize(d, NormMode::Global, 0.0, 255.0);
    const Matrix features = pipeline_features(n, tf.continuous_features);
    const Matrix targets = one_hot(d.labels);
    const DataSplits splits = split(d.row_count(), {}, derive_seed(seed, 0));

    auto gather = [&](const std::vector<std::size_t>& idx, const Matrix& src) {
        Matrix sub(idx.size(), src.cols);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            for (std::size_t c = 0; c < src.cols; ++c) sub(i, c) = src(idx[i], c);
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

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create directory " + out_dir + ": " + ec.message());

    TrainConfig cfg = tf.config;
    cfg.seed = seed;
    MlpModel model = init_model({d.col_count(), tf.hidden_units, 2}, derive_seed(seed, 1));

    MlpModel trained;
    TrainTrace trace;
    try {
        std::tie(trained, trace) = train_scg(model, td, cfg);
    } catch (const TrainingDiverged& e) {
        try {
            write_trace_csv(e.trace, (fs::path(out_dir) / "trace.csv").string());
            std::cerr << "partial trace written to " << (fs::path(out_dir) / "trace.csv").string()
                      << '\n';
        } catch (const Error&) {
        }
        throw;
    }

    SavedModel saved;
    saved.model = trained;
    saved.config = cfg;
    saved.continuous_features = tf.continuous_features;
    saved.epochs_run = trace.epochs.size();
    saved.best_validation_epoch = trace.best_validation_epoch;
    saved.stop_reason = to_string(trace.stop_reason);
    saved.final_train_loss = trace.epochs.empty() ? 0.0 : trace.epochs.back().train_loss;

    const std::string model_path = (fs::path(out_dir) / "model.json").string();
    const std::string trace_path = (fs::path(out_dir) / "trace.csv").string();
    save_model(saved, model_path);
    write_trace_csv(trace, trace_path);

    RunManifest m;
    m.command = "train";
    m.seed = seed;
    m.parameters["data"] = data;
    df.record(m);
    tf.record(m);
    m.parameters["out_dir"] = ".";
    m.input_hashes[data] = hash_file(data);
    finish_manifest(m, {model_path, trace_path}, out_dir, fs::path(out_dir) / "manifest.json");

    std::cout << "trained " << trace.epochs.size() << " epochs, stop reason "
              << to_string(trace.stop_reason) << ", best validation epoch "
              << trace.best_validation_epoch << '\n';
    if (!trace.epochs.empty()) {
        std::cout << "final train loss " << trace.epochs.back().train_loss << '\n';
    }
    std::cout << "model -> " << model_path << '\n';
    return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& data, std::uint64_t seed,
                 const std::string& out_dir, double threshold, const DataFlags& df) {
    const SavedModel saved = load_model(model_path);
    const Dataset d = load_csv(data, df.options());
    const NormMatrix n = normalize(d, NormMode::Global, 0.0, 255.0);
    const Matrix features = pipeline_features(n, saved.continuous_features);
    const DataSplits splits = split(d.row_count(), {}, derive_seed(seed, 0));

    TrainTrace trace;  // no per-epoch data in a model file; summary only
    trace.best_validation_epoch = saved.best_validation_epoch;
    trace.stop_reason = parse_stop_reason(saved.stop_reason);

    const EvalReport report =
        evaluate_model(saved.model, features, d.labels, splits, trace, threshold);
    const std::vector<std::string> files = write_report(report, out_dir);

    RunManifest m;
    m.command = "evaluate";
    m.seed = seed;
    m.parameters["model"] = model_path;
    m.parameters["data"] = data;
    m.parameters["threshold"] = repr(threshold);
    df.record(m);
    m.parameters["out_dir"] = ".";
    m.input_hashes[model_path] = hash_file(model_path);
    m.input_hashes[data] = hash_file(data);
    finish_manifest(m, files, out_dir, fs::path(out_dir) / "manifest.json");

    const ConfusionMatrix& all = report.splits.back().confusion;
    std::printf("overall accuracy %.4f (%.2f%%), auc %.4f\n", all.accuracy(),
                100.0 * all.accuracy(), report.roc_all.auc);
    std::cout << "report -> " << (fs::path(out_dir) / "report.json").string() << '\n';
    return 0;
}

int cmd_bench(std::size_t elements, std::size_t reps, std::size_t warmup, std::size_t threads,
              std::uint64_t seed, const std::string& out) {
    const auto results = bench_normalize(elements, reps, warmup,
                                         {BenchVariant::Serial, BenchVariant::Parallel}, seed,
                                         threads);
    write_bench_csv(results, out);

    RunManifest m;
    m.command = "bench";
    m.seed = seed;
    m.parameters["elements"] = std::to_string(elements);
    m.parameters["reps"] = std::to_string(reps);
    m.parameters["warmup"] = std::to_string(warmup);
    m.parameters["threads"] = std::to_string(threads);
    m.parameters["out"] = fs::path(out).filename().string();
    finish_manifest(m, {out}, fs::path(out).parent_path(), out + ".manifest.json");

    std::cout << render_table(results) << '\n';
    std::cout << render_machine_table(results.front().machine);
    std::cout << "\nresults -> " << out << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Min-max pixel normalization toolkit: turn numeric tables into grayscale "
                 "images, train a churn classifier on them, and benchmark the kernel"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    // reproduce
    auto* rep = app.add_subcommand(
        "reproduce", "End-to-end run: ingest, normalize, render, train, evaluate, report");
    std::string rep_data, rep_synth;
    std::uint64_t rep_seed = 0;
    std::string rep_out = default_out_dir();
    DataFlags rep_df;
    TrainFlags rep_tf;
    auto* rep_data_opt = rep->add_option("--data", rep_data, "Input CSV with a label column");
    auto* rep_synth_opt =
        rep->add_option("--synth", rep_synth,
                        "Generate separable data instead: ROWS,COLS,SEED,SEPARATION");
    auto* rep_seed_opt = rep->add_option("--seed", rep_seed, "Master seed (printed when drawn)");
    rep->add_option("--out-dir", rep_out, "Artifact directory (default $PIXELNORM_OUT_DIR or .)")
        ->capture_default_str();
    rep_df.attach(rep, "churn");
    rep_tf.attach(rep);
    rep_data_opt->excludes(rep_synth_opt);
    rep_synth_opt->excludes(rep_data_opt);

    // normalize
    auto* nor = app.add_subcommand("normalize", "Rescale a numeric CSV onto [a, b]");
    std::string nor_input, nor_out, nor_mode = "global";
    double nor_a = 0.0, nor_b = 255.0;
    DataFlags nor_df;
    nor->add_option("--input", nor_input, "Input CSV")->required();
    nor->add_option("--out", nor_out, "Output CSV")->required();
    nor->add_option("--mode", nor_mode, "Bounds source")
        ->check(CLI::IsMember({"global", "per-column"}))
        ->capture_default_str();
    nor->add_option("--a", nor_a, "Interval start")->capture_default_str();
    nor->add_option("--b", nor_b, "Interval end")->capture_default_str();
    nor_df.attach(nor, "");

    // denormalize
    auto* den = app.add_subcommand("denormalize", "Invert a normalization using its sidecar");
    std::string den_input, den_params, den_out;
    den->add_option("--input", den_input, "Normalized CSV")->required();
    den->add_option("--params", den_params, "Sidecar .norm.json written by normalize/render")
        ->required();
    den->add_option("--out", den_out, "Output CSV")->required();

    // render
    auto* ren = app.add_subcommand("render", "Render a numeric CSV as a binary PGM image");
    std::string ren_input, ren_out, ren_surface, ren_surface_matrix;
    DataFlags ren_df;
    ren->add_option("--input", ren_input, "Input CSV")->required();
    ren->add_option("--out", ren_out, "Output PGM")->required();
    ren->add_option("--surface", ren_surface, "Also write x,y,z surface triples to this CSV");
    ren->add_option("--surface-matrix", ren_surface_matrix,
                    "Also write a gnuplot-style z matrix to this file");
    ren_df.attach(ren, "");

    // train
    auto* tra = app.add_subcommand("train", "Train the churn classifier on a CSV");
    std::string tra_data;
    std::uint64_t tra_seed = 0;
    std::string tra_out = default_out_dir();
    DataFlags tra_df;
    TrainFlags tra_tf;
    tra->add_option("--data", tra_data, "Input CSV with a label column")->required();
    auto* tra_seed_opt = tra->add_option("--seed", tra_seed, "Master seed (printed when drawn)");
    tra->add_option("--out-dir", tra_out, "Artifact directory (default $PIXELNORM_OUT_DIR or .)")
        ->capture_default_str();
    tra_df.attach(tra, "churn");
    tra_tf.attach(tra);

    // evaluate
    auto* eva = app.add_subcommand("evaluate", "Evaluate a saved model against a CSV");
    std::string eva_model, eva_data;
    std::uint64_t eva_seed = 0;
    std::string eva_out = default_out_dir();
    double eva_threshold = 0.5;
    DataFlags eva_df;
    eva->add_option("--model", eva_model, "Model JSON written by train/reproduce")->required();
    eva->add_option("--data", eva_data, "Input CSV with a label column")->required();
    auto* eva_seed_opt =
        eva->add_option("--seed", eva_seed, "Split seed; match the training seed to "
                                            "reproduce the training-time splits");
    eva->add_option("--out-dir", eva_out, "Report directory (default $PIXELNORM_OUT_DIR or .)")
        ->capture_default_str();
    eva->add_option("--threshold", eva_threshold, "Churn probability decision threshold")
        ->capture_default_str();
    eva_df.attach(eva, "churn");

    // bench
    auto* ben = app.add_subcommand("bench",
                                   "Time the normalization kernel, serial vs data-parallel");
    std::size_t ben_elements = 10000000, ben_reps = 10, ben_warmup = 3, ben_threads = 0;
    std::uint64_t ben_seed = 0;
    std::string ben_out = (fs::path(default_out_dir()) / "bench.csv").string();
    ben->add_option("--elements", ben_elements, "Matrix size in elements")->capture_default_str();
    ben->add_option("--reps", ben_reps, "Timed repetitions per variant")->capture_default_str();
    ben->add_option("--warmup", ben_warmup, "Discarded warmup runs per variant")
        ->capture_default_str();
    ben->add_option("--threads", ben_threads, "Worker threads for the parallel variant "
                                              "(0 = hardware concurrency)")
        ->capture_default_str();
    auto* ben_seed_opt = ben->add_option("--seed", ben_seed, "Input generation seed");
    ben->add_option("--out", ben_out, "Output CSV")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << '\n';
        return 1;
    }

    try {
        if (rep->parsed()) {
            if (rep_data_opt->count() == 0 && rep_synth_opt->count() == 0) {
                std::cerr << "reproduce needs --data or --synth\n\n" << rep->help() << '\n';
                return 1;
            }
            const std::uint64_t seed = resolve_seed(rep_seed_opt, rep_seed);
            return cmd_reproduce(rep_data, rep_synth, rep_synth_opt->count() > 0, seed, rep_out,
                                 rep_df, rep_tf);
        }
        if (nor->parsed()) return cmd_normalize(nor_input, nor_out, nor_mode, nor_a, nor_b, nor_df);
        if (den->parsed()) return cmd_denormalize(den_input, den_params, den_out);
        if (ren->parsed()) {
            return cmd_render(ren_input, ren_out, ren_surface, ren_surface_matrix, ren_df);
        }
        if (tra->parsed()) {
            const std::uint64_t seed = resolve_seed(tra_seed_opt, tra_seed);
            return cmd_train(tra_data, seed, tra_out, tra_df, tra_tf);
        }
        if (eva->parsed()) {
            const std::uint64_t seed = resolve_seed(eva_seed_opt, eva_seed);
            return cmd_evaluate(eva_model, eva_data, seed, eva_out, eva_threshold, eva_df);
        }
        if (ben->parsed()) {
            const std::uint64_t seed = ben_seed_opt->count() > 0 ? ben_seed : 0;
            return cmd_bench(ben_elements, ben_reps, ben_warmup, ben_threads, seed, ben_out);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.family());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
