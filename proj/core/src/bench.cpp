#include "pixelnorm/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "pixelnorm/error.hpp"
#include "pixelnorm/normcodec.hpp"
#include "pixelnorm/rng.hpp"
#include "repr.hpp"

namespace pixelnorm {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::string read_cpu_model() {
    std::ifstream file("/proc/cpuinfo");
    std::string line;
    while (std::getline(file, line)) {
        if (line.rfind("model name", 0) == 0) {
            const auto colon = line.find(':');
            if (colon != std::string::npos) {
                const std::string model = trim(line.substr(colon + 1));
                if (!model.empty()) return model;
            }
        }
    }
    return "unknown";
}

std::string read_memory() {
    std::ifstream file("/proc/meminfo");
    std::string line;
    while (std::getline(file, line)) {
        if (line.rfind("MemTotal:", 0) == 0) {
            std::istringstream fields(line.substr(9));
            double kib = 0.0;
            if (fields >> kib && kib > 0.0) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.1f GiB", kib / (1024.0 * 1024.0));
                return buf;
            }
        }
    }
    return "unknown";
}

void run_parallel(const std::vector<double>& in, std::vector<double>& out, double x_min,
                  double scale, double a, std::size_t n_threads) {
    const std::size_t n = in.size();
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    const std::size_t chunk = (n + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
        const std::size_t begin = std::min(t * chunk, n);
        const std::size_t end = std::min(begin + chunk, n);
        if (begin == end) break;
        workers.emplace_back([&, begin, end] {
            normalize_range(in.data() + begin, out.data() + begin, end - begin, x_min, scale, a);
        });
    }
    for (auto& w : workers) w.join();
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

const char* to_string(BenchVariant v) {
    return v == BenchVariant::Serial ? "serial" : "parallel";
}

MachineInfo machine_info() {
    MachineInfo info;
    info.cpu_model = read_cpu_model();
    const unsigned cores = std::thread::hardware_concurrency();
    info.logical_cores = cores > 0 ? cores : 1;
    info.memory = read_memory();
    return info;
}

std::vector<BenchResult> bench_normalize(std::size_t n_elements, std::size_t repetitions,
                                         std::size_t warmup, std::vector<BenchVariant> variants,
                                         std::uint64_t seed, std::size_t threads) {
    if (n_elements < 1) throw DataError("need at least one element to benchmark");
    if (repetitions < 3) throw InsufficientRepetitions(repetitions);
    if (warmup < 1) throw DataError("need at least one warmup run");
    if (variants.empty()) throw DataError("no variants selected");

    const MachineInfo machine = machine_info();
    std::size_t n_threads = threads > 0 ? threads : machine.logical_cores;
    n_threads = std::max<std::size_t>(n_threads, 1);

    std::vector<double> input(n_elements);
    SplitMix64 rng(seed);
    for (double& v : input) v = rng.uniform(0.0, 1000.0);

    double x_min = input[0], x_max = input[0];
    for (double v : input) {
        x_min = std::min(x_min, v);
        x_max = std::max(x_max, v);
    }
    const double span = x_max - x_min;
    const double scale = span > 0.0 ? 255.0 / span : 0.0;

    std::vector<double> reference(n_elements);
    normalize_range(input.data(), reference.data(), n_elements, x_min, scale, 0.0);

    std::vector<double> output(n_elements);
    std::vector<BenchResult> results;
    for (BenchVariant variant : variants) {
        auto run_once = [&] {
            if (variant == BenchVariant::Serial) {
                normalize_range(input.data(), output.data(), n_elements, x_min, scale, 0.0);
            } else {
                run_parallel(input, output, x_min, scale, 0.0, n_threads);
            }
        };

        BenchResult r;
        r.variant = variant;
        r.element_count = n_elements;
        r.machine = machine;
        for (std::size_t i = 0; i < warmup; ++i) run_once();
        for (std::size_t i = 0; i < repetitions; ++i) {
            std::fill(output.begin(), output.end(), 0.0);
            const auto start = std::chrono::steady_clock::now();
            run_once();
            const auto stop = std::chrono::steady_clock::now();
            r.samples.push_back(std::chrono::duration<double>(stop - start).count());
        }
        if (output != reference) {
            throw NumericError(std::string(to_string(variant)) +
                               " variant output differs from the serial reference");
        }

        std::vector<double> sorted = r.samples;
        std::sort(sorted.begin(), sorted.end());
        r.min_s = sorted.front();
        r.max_s = sorted.back();
        const std::size_t mid = sorted.size() / 2;
        r.median_s = sorted.size() % 2 == 1 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2.0;
        results.push_back(std::move(r));
    }
    return results;
}

std::string render_table(const std::vector<BenchResult>& results) {
    if (results.empty()) throw DataError("nothing to render");

    std::ostringstream out;
    out << "| Machine |";
    for (const BenchResult& r : results) out << ' ' << to_string(r.variant) << " (s) |";
    out << "\n| --- |";
    for (std::size_t i = 0; i < results.size(); ++i) out << " --- |";
    out << "\n| " << results.front().machine.cpu_model << " |";
    for (const BenchResult& r : results) out << ' ' << fixed6(r.median_s) << " |";
    out << '\n';
    out << '\n'
        << "Median of " << results.front().samples.size() << " runs over "
        << results.front().element_count
        << " elements; times cover the normalization kernel only, no image write.\n";
    return out.str();
}

std::string render_machine_table(const MachineInfo& info) {
    std::ostringstream out;
    out << "| System | CPU | Logical cores | Memory |\n";
    out << "| --- | --- | --- | --- |\n";
    out << "| this host | " << info.cpu_model << " | " << info.logical_cores << " | "
        << info.memory << " |\n";
    return out.str();
}

void write_bench_csv(const std::vector<BenchResult>& results, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path + " for writing");
    file << "machine,variant,elements,min_s,median_s,max_s\n";
    for (const BenchResult& r : results) {
        file << csv_quote(r.machine.cpu_model) << ',' << to_string(r.variant) << ','
             << r.element_count << ',' << shortest_repr(r.min_s) << ','
             << shortest_repr(r.median_s) << ',' << shortest_repr(r.max_s) << '\n';
    }
    file.flush();
    if (!file) throw IoError("write failed on " + path);
}

}  // namespace pixelnorm
