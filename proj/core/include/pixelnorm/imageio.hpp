#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pixelnorm/matrix.hpp"

namespace pixelnorm {

// 8-bit grayscale image. Height counts customers (rows of the source table),
// width counts attributes. Pixels are row-major, top row first.
struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(std::size_t w, std::size_t h) : width(w), height(h), pixels(w * h, 0) {}

    std::uint8_t& at(std::size_t r, std::size_t c) { return pixels[r * width + c]; }
    std::uint8_t at(std::size_t r, std::size_t c) const { return pixels[r * width + c]; }

    bool operator==(const GrayImage& other) const = default;
};

// Intensity surface underlying the 3D visualization of a dataset image:
// z(i, j) = intensity at row i, column j; x and y are the column and row
// indices. No smoothing, no aggregation.
struct SurfaceGrid {
    Matrix z;
    std::vector<std::size_t> x;  // 0 .. width-1
    std::vector<std::size_t> y;  // 0 .. height-1
};

// Binary PGM: "P5\n<width> <height>\n255\n" followed by width*height raw
// bytes. Bit-exact across platforms.
void write_pgm(const GrayImage& img, const std::string& path);

// Accepts '#' comments between header tokens; maxval must be 255.
GrayImage read_pgm(const std::string& path);

SurfaceGrid surface_grid(const GrayImage& img);
SurfaceGrid surface_grid(const Matrix& values);

// CSV with header "x,y,z", one triple per pixel, row-major.
void write_surface_csv(const SurfaceGrid& g, const std::string& path);

// gnuplot-compatible matrix: one line of space-separated z values per row.
void write_surface_matrix(const SurfaceGrid& g, const std::string& path);

}  // namespace pixelnorm
