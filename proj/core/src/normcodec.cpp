#include "pixelnorm/normcodec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "pixelnorm/error.hpp"

namespace pixelnorm {

namespace {

void require_gray_interval(const NormParams& p) {
    if (p.a != 0.0 || p.b != 255.0) throw IntervalMismatch(p.a, p.b);
}

// (min, max) per column of a row-major matrix.
std::vector<std::pair<double, double>> column_bounds(const Matrix& m) {
    std::vector<std::pair<double, double>> bounds(m.cols);
    for (std::size_t c = 0; c < m.cols; ++c) bounds[c] = {m(0, c), m(0, c)};
    for (std::size_t r = 0; r < m.rows; ++r) {
        for (std::size_t c = 0; c < m.cols; ++c) {
            const double v = m(r, c);
            bounds[c].first = std::min(bounds[c].first, v);
            bounds[c].second = std::max(bounds[c].second, v);
        }
    }
    return bounds;
}

double span_scale(double lo, double hi, double a, double b) {
    const double span = hi - lo;
    return span > 0.0 ? (b - a) / span : 0.0;
}

}  // namespace

NormMatrix normalize(const Matrix& values, NormMode mode, double a, double b) {
    if (values.empty()) throw EmptyDataset();
    if (!(a < b)) throw DataError("normalize needs a < b");

    NormMatrix out;
    out.params.a = a;
    out.params.b = b;
    out.params.mode = mode;
    out.params.rows = values.rows;
    out.params.cols = values.cols;
    out.values = Matrix(values.rows, values.cols);

    const auto bounds = column_bounds(values);
    double global_min = bounds[0].first;
    double global_max = bounds[0].second;
    for (const auto& [lo, hi] : bounds) {
        global_min = std::min(global_min, lo);
        global_max = std::max(global_max, hi);
    }
    out.params.x_min = global_min;
    out.params.x_max = global_max;

    if (mode == NormMode::Global) {
        const double scale = span_scale(global_min, global_max, a, b);
        if (scale == 0.0) {
            for (std::size_t c = 0; c < values.cols; ++c) out.params.degenerate_columns.push_back(c);
        }
        normalize_range(values.data.data(), out.values.data.data(), values.size(), global_min,
                        scale, a);
    } else {
        out.params.per_column_bounds = bounds;
        for (std::size_t c = 0; c < values.cols; ++c) {
            const auto [lo, hi] = bounds[c];
            const double scale = span_scale(lo, hi, a, b);
            if (scale == 0.0) out.params.degenerate_columns.push_back(c);
            for (std::size_t r = 0; r < values.rows; ++r) {
                out.values(r, c) = a + (values(r, c) - lo) * scale;
            }
        }
    }
    return out;
}

NormMatrix normalize(const Dataset& d, NormMode mode, double a, double b) {
    return normalize(d.values, mode, a, b);
}

Matrix denormalize(const Matrix& values, const NormParams& p) {
    if (!(p.a < p.b)) throw DataError("malformed params: a < b required");
    if (p.mode == NormMode::PerColumn && p.per_column_bounds.size() != values.cols) {
        throw DataError("per-column bounds count does not match matrix columns");
    }

    Matrix out(values.rows, values.cols);
    if (p.mode == NormMode::Global) {
        if (!(p.x_min <= p.x_max)) throw DataError("malformed params: x_min <= x_max required");
        const double span = p.x_max - p.x_min;
        const double inv_scale = span > 0.0 ? span / (p.b - p.a) : 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            out.data[i] = p.x_min + (values.data[i] - p.a) * inv_scale;
        }
    } else {
        for (std::size_t c = 0; c < values.cols; ++c) {
            const auto [lo, hi] = p.per_column_bounds[c];
            if (!(lo <= hi)) throw DataError("malformed params: column min <= max required");
            const double span = hi - lo;
            const double inv_scale = span > 0.0 ? span / (p.b - p.a) : 0.0;
            for (std::size_t r = 0; r < values.rows; ++r) {
                out(r, c) = lo + (values(r, c) - p.a) * inv_scale;
            }
        }
    }
    return out;
}

Matrix denormalize(const NormMatrix& n) {
    return denormalize(n.values, n.params);
}

GrayImage quantize(const NormMatrix& n) {
    require_gray_interval(n.params);

    GrayImage img(n.cols(), n.rows());
    for (std::size_t r = 0; r < n.rows(); ++r) {
        for (std::size_t c = 0; c < n.cols(); ++c) {
            const double rounded = std::round(n.values(r, c));  // half away from zero
            const double clamped = std::clamp(rounded, 0.0, 255.0);
            img.at(r, c) = static_cast<std::uint8_t>(clamped);
        }
    }
    return img;
}

Matrix dequantize(const GrayImage& img, const NormParams& params) {
    require_gray_interval(params);

    Matrix pixels(img.height, img.width);
    for (std::size_t r = 0; r < img.height; ++r) {
        for (std::size_t c = 0; c < img.width; ++c) {
            pixels(r, c) = static_cast<double>(img.at(r, c));
        }
    }
    return denormalize(pixels, params);
}

void save_params(const NormParams& p, const std::string& path) {
    nlohmann::json j;
    j["x_min"] = p.x_min;
    j["x_max"] = p.x_max;
    j["a"] = p.a;
    j["b"] = p.b;
    j["mode"] = p.mode == NormMode::Global ? "global" : "per-column";
    if (p.mode == NormMode::PerColumn) {
        auto bounds = nlohmann::json::array();
        for (const auto& [lo, hi] : p.per_column_bounds) bounds.push_back({lo, hi});
        j["per_column_bounds"] = bounds;
    } else {
        j["per_column_bounds"] = nullptr;
    }
    j["rows"] = p.rows;
    j["cols"] = p.cols;
    j["degenerate_columns"] = p.degenerate_columns;

    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path + " for writing");
    file << j.dump(2) << '\n';
    if (!file) throw IoError("write failed on " + path);
}

NormParams load_params(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path);

    nlohmann::json j;
    try {
        file >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed sidecar " + path + ": " + e.what());
    }

    NormParams p;
    try {
        p.x_min = j.at("x_min").get<double>();
        p.x_max = j.at("x_max").get<double>();
        p.a = j.at("a").get<double>();
        p.b = j.at("b").get<double>();
        const std::string mode = j.at("mode").get<std::string>();
        if (mode == "global") {
            p.mode = NormMode::Global;
        } else if (mode == "per-column") {
            p.mode = NormMode::PerColumn;
        } else {
            throw DataError("unknown mode '" + mode + "' in " + path);
        }
        if (p.mode == NormMode::PerColumn) {
            for (const auto& pair : j.at("per_column_bounds")) {
                p.per_column_bounds.emplace_back(pair.at(0).get<double>(),
                                                 pair.at(1).get<double>());
            }
        }
        p.rows = j.at("rows").get<std::size_t>();
        p.cols = j.at("cols").get<std::size_t>();
        for (const auto& c : j.at("degenerate_columns")) {
            p.degenerate_columns.push_back(c.get<std::size_t>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError("malformed sidecar " + path + ": " + e.what());
    }

    if (!(p.x_min <= p.x_max) || !(p.a < p.b)) {
        throw DataError("malformed sidecar " + path + ": bounds out of order");
    }
    if (p.mode == NormMode::PerColumn && p.per_column_bounds.size() != p.cols) {
        throw DataError("malformed sidecar " + path + ": per-column bounds count mismatch");
    }
    return p;
}

}  // namespace pixelnorm
