#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace pixelnorm {

// Best-effort host description; fields degrade to "unknown", never vanish.
struct MachineInfo {
    std::string cpu_model = "unknown";
    std::size_t logical_cores = 1;
    std::string memory = "unknown";
};

MachineInfo machine_info();

enum class BenchVariant { Serial, Parallel };

const char* to_string(BenchVariant v);

struct BenchResult {
    BenchVariant variant = BenchVariant::Serial;
    std::size_t element_count = 0;
    std::vector<double> samples;  // wall-clock seconds, one per repetition
    double min_s = 0.0;
    double median_s = 0.0;
    double max_s = 0.0;
    MachineInfo machine;
};

// Times the normalization kernel (no image write) on a seeded random input:
// warmup runs discarded, then `repetitions` timed runs per variant on the
// identical buffer. The Parallel variant splits the elements into contiguous
// chunks across threads; every variant's output must match the serial
// reference bit-for-bit. threads = 0 picks the hardware concurrency.
std::vector<BenchResult> bench_normalize(std::size_t n_elements, std::size_t repetitions,
                                         std::size_t warmup,
                                         std::vector<BenchVariant> variants = {
                                             BenchVariant::Serial, BenchVariant::Parallel},
                                         std::uint64_t seed = 0, std::size_t threads = 0);

// Markdown table with one column per timed variant, plus a note that the
// times cover normalization only.
std::string render_table(const std::vector<BenchResult>& results);

// Markdown table describing the host (cpu model, cores, memory).
std::string render_machine_table(const MachineInfo& info);

// CSV columns: machine,variant,elements,min_s,median_s,max_s.
void write_bench_csv(const std::vector<BenchResult>& results, const std::string& path);

}  // namespace pixelnorm
