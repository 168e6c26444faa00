#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pixelnorm {

// Exit-code families used by the CLI: 1 usage, 2 I/O, 3 data validation,
// 4 numeric failure.
enum class ErrorFamily { Usage = 1, Io = 2, Data = 3, Numeric = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorFamily family, const std::string& what)
        : std::runtime_error(what), family_(family) {}

    ErrorFamily family() const { return family_; }

private:
    ErrorFamily family_;
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ErrorFamily::Io, what) {}
};

struct DataError : Error {
    explicit DataError(const std::string& what) : Error(ErrorFamily::Data, what) {}
};

struct NumericError : Error {
    explicit NumericError(const std::string& what) : Error(ErrorFamily::Numeric, what) {}
};

// dataset
struct MissingLabelColumn : DataError {
    explicit MissingLabelColumn(const std::string& name)
        : DataError("label column not found: " + name) {}
};

struct NonNumericCell : DataError {
    NonNumericCell(std::size_t data_row, const std::string& column_name, const std::string& cell)
        : DataError("non-numeric cell in data row " + std::to_string(data_row) + ", column '" +
                    column_name + "': '" + cell + "'"),
          row(data_row),
          column(column_name) {}

    std::size_t row;      // 1-based data row (header excluded)
    std::string column;
};

struct EmptyAfterFilter : DataError {
    explicit EmptyAfterFilter(const std::string& what) : DataError(what) {}
};

struct EmptyDataset : DataError {
    EmptyDataset() : DataError("dataset is empty") {}
};

// normcodec / imageio
struct IntervalMismatch : DataError {
    IntervalMismatch(double a, double b)
        : DataError("operation requires target interval (0, 255), got (" + std::to_string(a) +
                    ", " + std::to_string(b) + ")") {}
};

struct BadMagic : DataError {
    explicit BadMagic(const std::string& magic) : DataError("not a binary PGM (P5) file, magic '" + magic + "'") {}
};

struct UnsupportedMaxval : DataError {
    explicit UnsupportedMaxval(long maxval)
        : DataError("unsupported PGM maxval " + std::to_string(maxval) + " (only 255)") {}
};

struct TruncatedPixelData : DataError {
    TruncatedPixelData(std::size_t expected, std::size_t got)
        : DataError("truncated PGM pixel data: expected " + std::to_string(expected) +
                    " bytes, got " + std::to_string(got)) {}
};

// mlp
struct DimensionMismatch : DataError {
    explicit DimensionMismatch(const std::string& what) : DataError(what) {}
};

struct EmptyTrainingSet : DataError {
    EmptyTrainingSet() : DataError("training set is empty") {}
};

struct NonFiniteLoss : NumericError {
    explicit NonFiniteLoss(std::size_t epoch)
        : NumericError("non-finite loss or gradient at epoch " + std::to_string(epoch) +
                       "; training diverged"),
          epoch(epoch) {}

    std::size_t epoch;
};

// evaluation
struct TooFewRows : DataError {
    explicit TooFewRows(std::size_t rows)
        : DataError("need at least 3 rows to split, got " + std::to_string(rows)) {}
};

struct LengthMismatch : DataError {
    LengthMismatch(std::size_t a, std::size_t b)
        : DataError("sequence lengths differ: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

struct SingleClassInput : DataError {
    SingleClassInput() : DataError("ROC needs both classes present") {}
};

struct ShapeMismatch : DataError {
    explicit ShapeMismatch(const std::string& what) : DataError(what) {}
};

// bench
struct InsufficientRepetitions : DataError {
    explicit InsufficientRepetitions(std::size_t reps)
        : DataError("need at least 3 repetitions, got " + std::to_string(reps)) {}
};

}  // namespace pixelnorm
