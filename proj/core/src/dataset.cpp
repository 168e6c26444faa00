#include "pixelnorm/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string_view>

#include "pixelnorm/error.hpp"
#include "pixelnorm/rng.hpp"
#include "repr.hpp"

namespace pixelnorm {

namespace {

bool parse_finite_double(std::string_view s, double& out) {
    // Tolerate surrounding whitespace; from_chars itself is strict.
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (s.empty()) return false;
    double parsed = 0.0;
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, parsed, std::chars_format::general);
    if (ec != std::errc{} || ptr != end || !std::isfinite(parsed)) return false;
    out = parsed;
    return true;
}

bool cell_is_empty(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

// RFC-4180 state machine; handles quoted fields, escaped quotes, embedded
// newlines and CRLF line endings. Returns one vector of cells per record.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;

    auto end_field = [&] {
        record.push_back(field);
        field.clear();
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(record));
        record.clear();
    };

    std::size_t i = 0;
    // Skip a UTF-8 BOM if present.
    if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) i = 3;

    for (; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty() && !field_was_quoted) {
            in_quotes = true;
            field_was_quoted = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n') {
            end_record();
        } else if (c == '\r') {
            // swallowed; '\n' (if any) ends the record
        } else {
            field += c;
        }
    }
    if (!field.empty() || field_was_quoted || !record.empty()) end_record();
    return records;
}

std::optional<int> parse_label(std::string_view raw) {
    std::string s;
    for (char c : raw) {
        if (c == ' ' || c == '\t' || c == '\r') continue;
        s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (!s.empty() && s.back() == '.') s.pop_back();  // "True." / "False."
    if (s == "true" || s == "yes") return 1;
    if (s == "false" || s == "no") return 0;
    double v = 0.0;
    if (parse_finite_double(s, v)) {
        if (v == 0.0) return 0;
        if (v == 1.0) return 1;
    }
    return std::nullopt;
}

void quote_if_needed(std::string& out, const std::string& cell) {
    if (cell.find_first_of(",\"\n\r") == std::string::npos) {
        out += cell;
        return;
    }
    out += '"';
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

}  // namespace

Dataset load_csv(const std::string& path, const LoadOptions& opts) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path);
    std::ostringstream buffer;
    buffer << file.rdbuf();
    if (file.bad()) throw IoError("read failed on " + path);

    auto records = parse_csv(buffer.str());
    if (records.empty()) throw EmptyAfterFilter("no header row in " + path);

    const auto& header = records.front();
    const std::size_t n_cols = header.size();

    std::size_t label_idx = n_cols;
    if (!opts.label_column.empty()) {
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (header[c] == opts.label_column) label_idx = c;
        }
        if (label_idx == n_cols) throw MissingLabelColumn(opts.label_column);
    }

    std::vector<bool> dropped(n_cols, false);
    for (const auto& name : opts.drop_columns) {
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (header[c] == name) dropped[c] = true;
        }
    }

    const std::size_t n_data_rows = records.size() - 1;
    if (n_data_rows == 0) throw EmptyAfterFilter("no data rows in " + path);

    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != n_cols) {
            throw DataError("data row " + std::to_string(r) + " has " +
                            std::to_string(records[r].size()) + " cells, header has " +
                            std::to_string(n_cols));
        }
    }

    // Classify candidate columns by their first non-empty cell.
    std::vector<std::size_t> numeric_cols;
    for (std::size_t c = 0; c < n_cols; ++c) {
        if (c == label_idx || dropped[c]) continue;
        bool numeric = false;
        for (std::size_t r = 1; r < records.size(); ++r) {
            const std::string& cell = records[r][c];
            if (cell_is_empty(cell)) continue;
            double v = 0.0;
            numeric = parse_finite_double(cell, v);
            break;
        }
        if (numeric) numeric_cols.push_back(c);
    }
    if (numeric_cols.empty()) throw EmptyAfterFilter("no numeric columns left after filtering");

    Dataset d;
    d.label_name = opts.label_column;
    for (std::size_t c : numeric_cols) d.column_names.push_back(header[c]);
    d.values = Matrix(n_data_rows, numeric_cols.size());
    d.labels.resize(n_data_rows);

    struct Missing {
        std::size_t row, col;
    };
    std::vector<Missing> missing;

    for (std::size_t r = 0; r < n_data_rows; ++r) {
        const auto& record = records[r + 1];
        for (std::size_t j = 0; j < numeric_cols.size(); ++j) {
            const std::string& cell = record[numeric_cols[j]];
            if (cell_is_empty(cell)) {
                if (!opts.impute_mean) {
                    throw NonNumericCell(r + 1, header[numeric_cols[j]], "(empty)");
                }
                missing.push_back({r, j});
                continue;
            }
            double v = 0.0;
            if (!parse_finite_double(cell, v)) {
                throw NonNumericCell(r + 1, header[numeric_cols[j]], cell);
            }
            d.values(r, j) = v;
        }
        if (label_idx < n_cols) {
            auto label = parse_label(record[label_idx]);
            if (!label) throw NonNumericCell(r + 1, header[label_idx], record[label_idx]);
            d.labels[r] = *label;
        }
    }

    if (!missing.empty()) {
        std::vector<double> sum(numeric_cols.size(), 0.0);
        std::vector<std::size_t> count(numeric_cols.size(), 0);
        std::vector<bool> is_missing(d.values.size(), false);
        for (const auto& m : missing) is_missing[m.row * d.values.cols + m.col] = true;
        for (std::size_t r = 0; r < n_data_rows; ++r) {
            for (std::size_t j = 0; j < numeric_cols.size(); ++j) {
                if (is_missing[r * d.values.cols + j]) continue;
                sum[j] += d.values(r, j);
                count[j] += 1;
            }
        }
        for (const auto& m : missing) {
            if (count[m.col] == 0) {
                throw NonNumericCell(m.row + 1, header[numeric_cols[m.col]],
                                     "(entire column empty)");
            }
            d.values(m.row, m.col) = sum[m.col] / static_cast<double>(count[m.col]);
        }
    }

    return d;
}

void write_csv(const Dataset& d, const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path + " for writing");

    std::string line;
    for (std::size_t c = 0; c < d.column_names.size(); ++c) {
        if (c) line += ',';
        quote_if_needed(line, d.column_names[c]);
    }
    if (!d.column_names.empty()) line += ',';
    quote_if_needed(line, d.label_name);
    file << line << '\n';

    for (std::size_t r = 0; r < d.row_count(); ++r) {
        line.clear();
        for (std::size_t c = 0; c < d.col_count(); ++c) {
            if (c) line += ',';
            line += shortest_repr(d.values(r, c));
        }
        line += ',';
        line += d.labels[r] ? '1' : '0';
        file << line << '\n';
    }
    if (!file) throw IoError("write failed on " + path);
}

void write_matrix_csv(const Matrix& m, const std::vector<std::string>& column_names,
                      const std::string& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path + " for writing");

    std::string line;
    for (std::size_t c = 0; c < m.cols; ++c) {
        if (c) line += ',';
        quote_if_needed(line, c < column_names.size() ? column_names[c] : "c" + std::to_string(c));
    }
    file << line << '\n';
    for (std::size_t r = 0; r < m.rows; ++r) {
        line.clear();
        for (std::size_t c = 0; c < m.cols; ++c) {
            if (c) line += ',';
            line += shortest_repr(m(r, c));
        }
        file << line << '\n';
    }
    if (!file) throw IoError("write failed on " + path);
}

ColumnStats compute_stats(const Dataset& d) {
    if (d.row_count() == 0 || d.col_count() == 0) throw EmptyDataset();

    const std::size_t cols = d.col_count();
    ColumnStats stats;
    stats.min.assign(cols, 0.0);
    stats.max.assign(cols, 0.0);
    stats.mean.assign(cols, 0.0);

    std::vector<double> sum(cols, 0.0);
    for (std::size_t c = 0; c < cols; ++c) {
        stats.min[c] = d.values(0, c);
        stats.max[c] = d.values(0, c);
    }
    for (std::size_t r = 0; r < d.row_count(); ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const double v = d.values(r, c);
            stats.min[c] = std::min(stats.min[c], v);
            stats.max[c] = std::max(stats.max[c], v);
            sum[c] += v;
        }
    }
    for (std::size_t c = 0; c < cols; ++c) {
        stats.mean[c] = sum[c] / static_cast<double>(d.row_count());
    }
    stats.global_min = *std::min_element(stats.min.begin(), stats.min.end());
    stats.global_max = *std::max_element(stats.max.begin(), stats.max.end());
    return stats;
}

Dataset synth_churn(std::size_t rows, std::size_t cols, std::uint64_t seed, double separation) {
    if (rows < 2 || cols < 1) {
        throw DataError("synth_churn needs rows >= 2 and cols >= 1");
    }
    if (!(separation >= 0.0)) {
        throw DataError("synth_churn needs separation >= 0");
    }

    Dataset d;
    d.values = Matrix(rows, cols);
    d.labels.resize(rows);
    for (std::size_t c = 0; c < cols; ++c) d.column_names.push_back("f" + std::to_string(c));

    SplitMix64 rng(seed);
    for (std::size_t r = 0; r < rows; ++r) {
        const int label = static_cast<int>(r % 2);
        d.labels[r] = label;
        const double shift = label ? separation : 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            d.values(r, c) = rng.normal() + shift;
        }
    }
    return d;
}

}  // namespace pixelnorm
