#pragma once

// Reference implementations and fixtures shared by the test binaries. The
// oracles here are deliberately written as naive brute-force versions so they
// cannot share a bug with the library code they check.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pixelnorm/dataset.hpp"
#include "pixelnorm/matrix.hpp"
#include "pixelnorm/mlp.hpp"
#include "pixelnorm/rng.hpp"

namespace testsupport {

// ---------------------------------------------------------------------------
// Filesystem helpers

class TempDir {
public:
    TempDir() {
        std::string tmpl = (std::filesystem::temp_directory_path() / "pixelnorm_test_XXXXXX").string();
        std::vector<char> buf(tmpl.begin(), tmpl.end());
        buf.push_back('\0');
        if (!mkdtemp(buf.data())) throw std::runtime_error("mkdtemp failed");
        path_ = buf.data();
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::string& path() const { return path_; }
    std::string file(const std::string& name) const { return path_ + "/" + name; }

private:
    std::string path_;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + path);
}

// Drops lines containing a timestamp field so byte comparisons ignore it.
inline std::string strip_generated_at(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find("generated_at") == std::string::npos) out << line << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Subprocess runner for the CLI under test

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline RunResult run_cli(const std::string& cli, const std::string& args,
                         const std::string& workdir) {
    const std::string out_file = workdir + "/.stdout";
    const std::string err_file = workdir + "/.stderr";
    std::string cmd = "cd '" + workdir + "' && '" + cli + "' " + args + " > '" + out_file +
                      "' 2> '" + err_file + "'";
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    std::remove(out_file.c_str());
    std::remove(err_file.c_str());
    return r;
}

// ---------------------------------------------------------------------------
// Statistics oracle: independent double-loop min/max/mean

struct NaiveStats {
    std::vector<double> min, max, mean;
    double global_min = 0.0, global_max = 0.0;
};

inline NaiveStats naive_stats(const pixelnorm::Matrix& m) {
    NaiveStats s;
    for (std::size_t c = 0; c < m.cols; ++c) {
        double lo = m(0, c), hi = m(0, c), sum = 0.0;
        for (std::size_t r = 0; r < m.rows; ++r) {
            lo = std::min(lo, m(r, c));
            hi = std::max(hi, m(r, c));
            sum += m(r, c);
        }
        s.min.push_back(lo);
        s.max.push_back(hi);
        s.mean.push_back(sum / static_cast<double>(m.rows));
    }
    s.global_min = *std::min_element(s.min.begin(), s.min.end());
    s.global_max = *std::max_element(s.max.begin(), s.max.end());
    return s;
}

// ---------------------------------------------------------------------------
// AUC oracle: pairwise Mann-Whitney with half credit for ties

inline double mann_whitney_auc(const std::vector<int>& labels, const std::vector<double>& scores) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] != 1) continue;
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (labels[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

// ---------------------------------------------------------------------------
// Centroid classifier: establishes separability of the synthetic data

inline double centroid_accuracy(const pixelnorm::Dataset& d) {
    const std::size_t cols = d.col_count();
    std::vector<double> mean0(cols, 0.0), mean1(cols, 0.0);
    std::size_t n0 = 0, n1 = 0;
    for (std::size_t r = 0; r < d.row_count(); ++r) {
        auto& m = d.labels[r] == 1 ? mean1 : mean0;
        (d.labels[r] == 1 ? n1 : n0)++;
        for (std::size_t c = 0; c < cols; ++c) m[c] += d.values(r, c);
    }
    for (std::size_t c = 0; c < cols; ++c) {
        mean0[c] /= static_cast<double>(n0);
        mean1[c] /= static_cast<double>(n1);
    }
    std::size_t correct = 0;
    for (std::size_t r = 0; r < d.row_count(); ++r) {
        double d0 = 0.0, d1 = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            d0 += (d.values(r, c) - mean0[c]) * (d.values(r, c) - mean0[c]);
            d1 += (d.values(r, c) - mean1[c]) * (d.values(r, c) - mean1[c]);
        }
        int pred = d1 < d0 ? 1 : 0;
        if (pred == d.labels[r]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(d.row_count());
}

// ---------------------------------------------------------------------------
// Gradient oracle: central finite differences over the flat parameter vector

inline std::vector<double> numeric_gradient(const pixelnorm::MlpModel& m,
                                            const pixelnorm::Matrix& x,
                                            const pixelnorm::Matrix& y, double h = 1e-5) {
    pixelnorm::MlpModel work = m;
    std::vector<double> w = pixelnorm::get_params(work);
    std::vector<double> g(w.size(), 0.0);
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double orig = w[i];
        w[i] = orig + h;
        pixelnorm::set_params(work, w);
        const double up = pixelnorm::loss(work, x, y);
        w[i] = orig - h;
        pixelnorm::set_params(work, w);
        const double down = pixelnorm::loss(work, x, y);
        w[i] = orig;
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

// Relative error with a floor so near-zero components don't divide by zero.
inline double max_gradient_rel_error(const std::vector<double>& analytic,
                                     const std::vector<double>& numeric) {
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const double denom = std::max(std::abs(analytic[i]) + std::abs(numeric[i]), 1e-6);
        worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / denom);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Stand-in churn CSV. Mirrors the shape of the public telecom churn table:
// identifier and categorical text columns that the loader must discard, 17
// numeric attribute columns, and a trailing "churn" label spelled
// "False."/"True.". Row count defaults to the commonly distributed 3333.

inline void write_standin_churn_csv(const std::string& path, std::size_t rows = 3333) {
    static const char* kStates[] = {"KS", "OH", "NJ", "WV", "NY", "AL", "MA", "WI"};
    pixelnorm::SplitMix64 rng(20260819u);
    std::ofstream out(path);
    out << "state,account length,area code,phone number,international plan,"
           "voice mail plan,number vmail messages,total day minutes,total day calls,"
           "total day charge,total eve minutes,total eve calls,total eve charge,"
           "total night minutes,total night calls,total night charge,"
           "total intl minutes,total intl calls,total intl charge,"
           "customer service calls,churn\n";
    char line[512];
    for (std::size_t i = 0; i < rows; ++i) {
        const bool churn = rng.uniform01() < 0.145;
        const double bump = churn ? 1.0 : 0.0;
        const double day_min = std::max(0.0, 180.0 + 60.0 * bump + 50.0 * rng.normal());
        const double eve_min = std::max(0.0, 200.0 + 50.0 * rng.normal());
        const double night_min = std::max(0.0, 200.0 + 50.0 * rng.normal());
        const double intl_min = std::max(0.0, 10.0 + 3.0 * rng.normal());
        std::snprintf(
            line, sizeof line,
            "%s,%llu,%llu,%03llu-%04llu,%llu,%s,%llu,%.1f,%llu,%.2f,%.1f,%llu,%.2f,%.1f,"
            "%llu,%.2f,%.1f,%llu,%.2f,%llu,%s\n",
            kStates[rng.below(8)], (unsigned long long)(1 + rng.below(240)),
            (unsigned long long)(400 + rng.below(120)), (unsigned long long)rng.below(1000),
            (unsigned long long)rng.below(10000),
            (unsigned long long)(rng.uniform01() < 0.1 + 0.2 * bump ? 1 : 0),
            rng.uniform01() < 0.28 ? "yes" : "no", (unsigned long long)rng.below(52), day_min,
            (unsigned long long)(50 + rng.below(110)), day_min * 0.17, eve_min,
            (unsigned long long)(50 + rng.below(110)), eve_min * 0.085, night_min,
            (unsigned long long)(50 + rng.below(110)), night_min * 0.045, intl_min,
            (unsigned long long)(1 + rng.below(19)), intl_min * 0.27,
            (unsigned long long)(rng.below(5) + (churn && rng.uniform01() < 0.4 ? 4 : 0)),
            churn ? "True." : "False.");
        out << line;
    }
    if (!out) throw std::runtime_error("cannot write " + path);
}

// Path of a real churn CSV if the environment provides one, else empty.
inline std::string real_churn_csv() {
    if (const char* env = std::getenv("PIXELNORM_CHURN_CSV")) {
        if (*env && std::filesystem::exists(env)) return env;
    }
    if (std::filesystem::exists("data/churn.csv")) return "data/churn.csv";
    return {};
}

}  // namespace testsupport
