// End-to-end tests driving the installed CLI binary as a subprocess.
// Usage: cli_tests <path-to-pixelnorm-binary>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "pixelnorm/dataset.hpp"
#include "pixelnorm/imageio.hpp"
#include "pixelnorm/manifest.hpp"
#include "support/oracles.hpp"

using testsupport::RunResult;
using testsupport::TempDir;

namespace {

int g_failures = 0;
int g_checks = 0;

void check(bool ok, const std::string& what) {
    ++g_checks;
    if (!ok) {
        ++g_failures;
        std::fprintf(stderr, "FAILED: %s\n", what.c_str());
    }
}

std::string g_cli;

RunResult run(const std::string& args, const std::string& dir) {
    return testsupport::run_cli(g_cli, args, dir);
}

void write_small_csv(const std::string& path) {
    pixelnorm::Dataset d = pixelnorm::synth_churn(60, 3, 77, 5.0);
    pixelnorm::write_csv(d, path);
}

void test_usage_errors() {
    TempDir tmp;
    RunResult r = run("--no-such-flag", tmp.path());
    check(r.exit_code == 1, "unknown flag exits 1, got " + std::to_string(r.exit_code));
    check(r.err.find("Usage") != std::string::npos || r.err.find("usage") != std::string::npos,
          "unknown flag prints usage on stderr");

    r = run("", tmp.path());
    check(r.exit_code == 1, "no subcommand exits 1");

    r = run("normalize", tmp.path());
    check(r.exit_code == 1, "normalize without --input/--out exits 1");

    r = run("--help", tmp.path());
    check(r.exit_code == 0, "--help exits 0");
    check(r.out.find("reproduce") != std::string::npos, "--help lists the subcommands");

    r = run("--version", tmp.path());
    check(r.exit_code == 0, "--version exits 0");
}

void test_io_and_data_errors() {
    TempDir tmp;
    RunResult r = run("render --input missing.csv --out img.pgm", tmp.path());
    check(r.exit_code == 2, "missing input file exits 2, got " + std::to_string(r.exit_code));
    check(r.err.find("error:") != std::string::npos, "I/O failure reports an error line");

    testsupport::spit(tmp.file("bad.csv"), "a,churn\n1,0\nx,1\n");
    r = run("train --data bad.csv --out-dir t --seed 1", tmp.path());
    check(r.exit_code == 3, "non-numeric cell exits 3, got " + std::to_string(r.exit_code));

    testsupport::spit(tmp.file("nolabel.csv"), "a,b\n1,2\n");
    r = run("train --data nolabel.csv --out-dir t2 --seed 1", tmp.path());
    check(r.exit_code == 3, "missing label column exits 3");
}

void test_normalize_denormalize_round_trip() {
    TempDir tmp;
    write_small_csv(tmp.file("data.csv"));

    RunResult r = run("normalize --input data.csv --out norm.csv --label churn", tmp.path());
    check(r.exit_code == 0, "normalize succeeds: " + r.err);
    check(std::filesystem::exists(tmp.file("norm.csv")), "normalized matrix written");
    check(std::filesystem::exists(tmp.file("norm.csv.norm.json")), "sidecar written");
    check(std::filesystem::exists(tmp.file("norm.csv.manifest.json")), "manifest written");

    r = run("denormalize --input norm.csv --params norm.csv.norm.json --out back.csv",
            tmp.path());
    check(r.exit_code == 0, "denormalize succeeds: " + r.err);

    pixelnorm::Dataset original =
        pixelnorm::load_csv(tmp.file("data.csv"), {.label_column = "churn"});
    pixelnorm::Dataset restored = pixelnorm::load_csv(tmp.file("back.csv"), {.label_column = ""});
    check(restored.row_count() == original.row_count(), "round trip keeps the row count");
    bool close = restored.col_count() == original.col_count();
    if (close) {
        for (std::size_t i = 0; i < original.values.size(); ++i) {
            const double a = original.values.data[i], b = restored.values.data[i];
            if (std::abs(a - b) > 1e-9 * std::max(1.0, std::abs(a))) {
                close = false;
                break;
            }
        }
    }
    check(close, "denormalize(normalize(csv)) restores the matrix");
}

void test_render_header_and_surface() {
    TempDir tmp;
    write_small_csv(tmp.file("data.csv"));
    RunResult r = run("render --input data.csv --label churn --out img.pgm --surface surf.csv",
                      tmp.path());
    check(r.exit_code == 0, "render succeeds: " + r.err);

    const std::string bytes = testsupport::slurp(tmp.file("img.pgm"));
    check(bytes.rfind("P5\n3 60\n255\n", 0) == 0, "PGM header bytes are exact");
    check(bytes.size() == 12 + 3 * 60, "PGM payload is width*height bytes");

    const std::string surf = testsupport::slurp(tmp.file("surf.csv"));
    check(surf.rfind("x,y,z\n", 0) == 0, "surface CSV header");
}

void test_seed_is_printed_when_drawn() {
    TempDir tmp;
    RunResult r = run("reproduce --synth 200,4,7,6.0 --out-dir a", tmp.path());
    check(r.exit_code == 0, "reproduce without --seed succeeds");
    check(r.out.find("seed:") != std::string::npos, "drawn seed is printed");

    r = run("reproduce --synth 200,4,7,6.0 --seed 9 --out-dir b", tmp.path());
    check(r.exit_code == 0, "reproduce with --seed succeeds");
    check(r.out.find("seed:") == std::string::npos, "explicit seed is not echoed");
}

void test_reproduce_synth_and_manifest() {
    TempDir tmp;
    RunResult r = run("reproduce --synth 300,5,7,6.0 --seed 4 --out-dir run1", tmp.path());
    check(r.exit_code == 0, "reproduce --synth succeeds: " + r.err);
    check(r.out.find("overall accuracy") != std::string::npos, "accuracy printed");
    check(r.out.find("best validation epoch") != std::string::npos, "best epoch printed");

    pixelnorm::RunManifest m =
        pixelnorm::load_manifest(tmp.file("run1/manifest.json"));
    check(m.command == "reproduce", "manifest records the command");
    check(m.seed == 4, "manifest records the seed");
    check(!m.artifacts.empty(), "manifest lists artifacts");
    for (const std::string& artifact : m.artifacts) {
        check(std::filesystem::exists(tmp.file("run1/" + artifact)),
              "artifact listed in manifest exists: " + artifact);
    }
    check(m.parameters.at("out_dir") == ".", "manifest stores a relocatable out_dir");

    // Same seed, fresh directory: identical payloads modulo timestamps.
    RunResult r2 = run("reproduce --synth 300,5,7,6.0 --seed 4 --out-dir run2", tmp.path());
    check(r2.exit_code == 0, "second reproduce succeeds");
    for (const char* name : {"report.json", "model.json", "trace.csv", "image.pgm",
                             "manifest.json"}) {
        const std::string a = testsupport::slurp(tmp.file(std::string("run1/") + name));
        const std::string b = testsupport::slurp(tmp.file(std::string("run2/") + name));
        check(testsupport::strip_generated_at(a) == testsupport::strip_generated_at(b),
              std::string("deterministic artifact: ") + name);
    }

    // Requiring both or neither of --data/--synth is a usage error.
    RunResult r3 = run("reproduce --seed 1", tmp.path());
    check(r3.exit_code == 1, "reproduce without a data source exits 1");
}

void test_train_then_evaluate() {
    TempDir tmp;
    write_small_csv(tmp.file("data.csv"));

    RunResult r = run("train --data data.csv --seed 6 --out-dir model --max-epochs 60",
                      tmp.path());
    check(r.exit_code == 0, "train succeeds: " + r.err);
    check(std::filesystem::exists(tmp.file("model/model.json")), "model written");
    check(std::filesystem::exists(tmp.file("model/trace.csv")), "trace written");

    r = run("evaluate --model model/model.json --data data.csv --seed 6 --out-dir eval",
            tmp.path());
    check(r.exit_code == 0, "evaluate succeeds: " + r.err);
    check(std::filesystem::exists(tmp.file("eval/report.json")), "report written");
    check(r.out.find("overall accuracy") != std::string::npos, "evaluate prints accuracy");
}

void test_bench_csv() {
    TempDir tmp;
    RunResult r = run("bench --elements 20000 --reps 3 --warmup 1 --out bench.csv", tmp.path());
    check(r.exit_code == 0, "bench succeeds: " + r.err);
    check(r.out.find("| Machine |") != std::string::npos, "bench renders the timing table");
    const std::string csv = testsupport::slurp(tmp.file("bench.csv"));
    check(csv.rfind("machine,variant,elements,min_s,median_s,max_s\n", 0) == 0,
          "bench CSV columns");

    r = run("bench --elements 1000 --reps 2 --warmup 1 --out b2.csv", tmp.path());
    check(r.exit_code == 3, "too few repetitions exit 3, got " + std::to_string(r.exit_code));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_tests <pixelnorm-binary>\n");
        return 2;
    }
    g_cli = std::filesystem::absolute(argv[1]).string();

    test_usage_errors();
    test_io_and_data_errors();
    test_normalize_denormalize_round_trip();
    test_render_header_and_surface();
    test_seed_is_printed_when_drawn();
    test_reproduce_synth_and_manifest();
    test_train_then_evaluate();
    test_bench_csv();

    std::printf("%d checks, %d failures\n", g_checks, g_failures);
    return g_failures == 0 ? 0 : 1;
}
