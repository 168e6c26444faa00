#include <benchmark/benchmark.h>

#include <cstddef>
#include <thread>
#include <vector>

#include "pixelnorm/normcodec.hpp"
#include "pixelnorm/rng.hpp"

namespace {

std::vector<double> random_buffer(std::size_t n) {
    pixelnorm::SplitMix64 rng(7);
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(-100.0, 900.0);
    return v;
}

void BM_NormalizeKernelSerial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const std::vector<double> in = random_buffer(n);
    std::vector<double> out(n);
    const double scale = 255.0 / 1000.0;
    for (auto _ : state) {
        pixelnorm::normalize_range(in.data(), out.data(), n, -100.0, scale, 0.0);
        benchmark::DoNotOptimize(out.data());
        benchmark::ClobberMemory();
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n) * static_cast<std::int64_t>(sizeof(double)));
}
BENCHMARK(BM_NormalizeKernelSerial)->Range(1 << 14, 1 << 23);

void BM_NormalizeKernelParallel(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const std::vector<double> in = random_buffer(n);
    std::vector<double> out(n);
    const double scale = 255.0 / 1000.0;
    const std::size_t workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    for (auto _ : state) {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t lo = std::min(n, w * chunk);
            const std::size_t hi = std::min(n, lo + chunk);
            pool.emplace_back([&, lo, hi] {
                pixelnorm::normalize_range(in.data() + lo, out.data() + lo, hi - lo, -100.0,
                                           scale, 0.0);
            });
        }
        for (std::thread& t : pool) t.join();
        benchmark::DoNotOptimize(out.data());
        benchmark::ClobberMemory();
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n) * static_cast<std::int64_t>(sizeof(double)));
}
BENCHMARK(BM_NormalizeKernelParallel)->Range(1 << 14, 1 << 23);

void BM_NormalizeMatrix(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    pixelnorm::Matrix m(rows, 17);
    pixelnorm::SplitMix64 rng(7);
    for (double& x : m.data) x = rng.uniform(-100.0, 900.0);
    for (auto _ : state) {
        pixelnorm::NormMatrix n = pixelnorm::normalize(m);
        benchmark::DoNotOptimize(n.values.data.data());
    }
}
BENCHMARK(BM_NormalizeMatrix)->Arg(1000)->Arg(3334)->Arg(10000);

void BM_QuantizeRoundTrip(benchmark::State& state) {
    const auto rows = static_cast<std::size_t>(state.range(0));
    pixelnorm::Matrix m(rows, 17);
    pixelnorm::SplitMix64 rng(7);
    for (double& x : m.data) x = rng.uniform(-100.0, 900.0);
    const pixelnorm::NormMatrix n = pixelnorm::normalize(m);
    for (auto _ : state) {
        pixelnorm::GrayImage img = pixelnorm::quantize(n);
        pixelnorm::Matrix back = pixelnorm::dequantize(img, n.params);
        benchmark::DoNotOptimize(back.data.data());
    }
}
BENCHMARK(BM_QuantizeRoundTrip)->Arg(3334);

}  // namespace

BENCHMARK_MAIN();
