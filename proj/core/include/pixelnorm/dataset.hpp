#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pixelnorm/matrix.hpp"

namespace pixelnorm {

// Numeric table: rows are customers, columns are attributes. Labels are the
// binary churn flags (1 = churn, 0 = retention) and are stored outside the
// value matrix.
struct Dataset {
    Matrix values;
    std::vector<int> labels;
    std::vector<std::string> column_names;
    std::string label_name = "churn";

    std::size_t row_count() const { return values.rows; }
    std::size_t col_count() const { return values.cols; }
};

struct ColumnStats {
    std::vector<double> min;
    std::vector<double> max;
    std::vector<double> mean;
    double global_min = 0.0;
    double global_max = 0.0;
};

struct LoadOptions {
    std::string label_column = "churn";     // empty means label-free: labels all 0
    std::vector<std::string> drop_columns;  // identifier columns to discard up front
    bool impute_mean = false;               // fill empty cells with the column mean instead of rejecting
};

// Reads an RFC-4180-style CSV (header row, UTF-8, '.' decimal separator).
// Columns are classified by their first non-empty cell: if it parses as a
// finite number the column is numeric and kept, otherwise the whole column is
// discarded. A later unparseable cell in a numeric column is an error. The
// label column accepts 0/1, true/false, yes/no, case-insensitive, with an
// optional trailing period ("True." / "False.").
Dataset load_csv(const std::string& path, const LoadOptions& opts = {});

// Writes values + label column; numbers use the shortest representation that
// re-parses to the identical double.
void write_csv(const Dataset& d, const std::string& path);

// Label-free variant used when reconstructing a matrix from an image.
void write_matrix_csv(const Matrix& m, const std::vector<std::string>& column_names,
                      const std::string& path);

// Per-column and global min/max/mean in a single pass.
ColumnStats compute_stats(const Dataset& d);

// Two Gaussian clusters with unit variance whose class means differ by
// `separation` in every coordinate. Row i carries label i % 2, so the classes
// are balanced within one row. Deterministic for a fixed seed.
Dataset synth_churn(std::size_t rows, std::size_t cols, std::uint64_t seed, double separation);

}  // namespace pixelnorm
