#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "pixelnorm/dataset.hpp"
#include "pixelnorm/imageio.hpp"
#include "pixelnorm/matrix.hpp"

namespace pixelnorm {

enum class NormMode { Global, PerColumn };

// Constants of the affine map X' = a + (X - x_min) * (b - a) / (x_max - x_min).
// Together with the matrix shape this is everything a consumer needs to invert
// the map, and it is what the .norm.json sidecar stores.
struct NormParams {
    double x_min = 0.0;
    double x_max = 0.0;
    double a = 0.0;
    double b = 255.0;
    NormMode mode = NormMode::Global;
    std::vector<std::pair<double, double>> per_column_bounds;  // PerColumn only
    std::size_t rows = 0;  // customers
    std::size_t cols = 0;  // attributes
    std::vector<std::size_t> degenerate_columns;  // zero-span columns, mapped to a
};

// Matrix rescaled into [a, b] (within 1e-9 absolute slack from rounding).
struct NormMatrix {
    Matrix values;
    NormParams params;

    std::size_t rows() const { return values.rows; }
    std::size_t cols() const { return values.cols; }
};

// The per-element map, shared by normalize() and the benchmark kernels so the
// serial and data-parallel paths are bit-identical. scale is
// (b - a) / (x_max - x_min), or 0 for a degenerate span.
inline void normalize_range(const double* in, double* out, std::size_t n, double x_min,
                            double scale, double a) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = a + (in[i] - x_min) * scale;
    }
}

// Min-max normalization onto [a, b]. Global mode (the default) uses the
// dataset-wide min/max; PerColumn rescales each column by its own bounds.
// A zero span maps every affected value to a and is recorded in
// params.degenerate_columns instead of failing.
NormMatrix normalize(const Matrix& values, NormMode mode = NormMode::Global, double a = 0.0,
                     double b = 255.0);
NormMatrix normalize(const Dataset& d, NormMode mode = NormMode::Global, double a = 0.0,
                     double b = 255.0);

// Exact inverse of normalize up to floating rounding; degenerate spans come
// back as x_min.
Matrix denormalize(const NormMatrix& n);
Matrix denormalize(const Matrix& values, const NormParams& params);

// Rounds half away from zero, clamps to [0, 255]. Requires (a, b) = (0, 255).
// Image height = rows (customers), width = cols (attributes).
GrayImage quantize(const NormMatrix& n);

// denormalize applied to pixel values; per-entry reconstruction error is at
// most half a quantization step, span / 510.
Matrix dequantize(const GrayImage& img, const NormParams& params);

// Sidecar metadata (<image>.norm.json).
void save_params(const NormParams& p, const std::string& path);
NormParams load_params(const std::string& path);

}  // namespace pixelnorm
