#pragma once

#include "lnq/estimators.hpp"
#include "lnq/metrics.hpp"

#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lnq {

/// A titled, rectangular table of reals. The title is not written to CSV.
struct TableDocument {
    std::string title;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    /// Throws std::invalid_argument unless every row has one value per column.
    void validate() const;
    /// Index of a column label; throws std::out_of_range when absent.
    [[nodiscard]] std::size_t column_index(const std::string& label) const;
};

class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A required column is missing from the header.
class SchemaError : public CsvError {
public:
    using CsvError::CsvError;
};

/// A cell is not a number. row() is the 1-based data row (header excluded).
class ParseError : public CsvError {
public:
    ParseError(const std::string& what, std::size_t row) : CsvError(what), row_(row) {}
    [[nodiscard]] std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

/// A value violates the target type's invariants (e.g. y <= 0).
class ValidationError : public CsvError {
public:
    ValidationError(const std::string& what, std::size_t row) : CsvError(what), row_(row) {}
    [[nodiscard]] std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

enum class NumberFormat {
    Significant6,  // up to 6 significant digits, trailing zeros dropped
    RoundTrip,     // shortest text that parses back to the same double
};

/// Locale-independent rendering of a double.
std::string format_number(double value, NumberFormat format = NumberFormat::Significant6);

XYDataset load_xy_csv(const std::filesystem::path& path, const std::string& x_column, const std::string& y_column);
PairedObservations load_paired_csv(const std::filesystem::path& path, const std::string& actual_column,
                                   const std::string& predicted_column);
TableDocument load_table_csv(const std::filesystem::path& path);

void write_xy_csv(const XYDataset& data, const std::filesystem::path& path, const std::string& x_column = "x",
                  const std::string& y_column = "y");
void write_table_csv(const TableDocument& doc, const std::filesystem::path& path,
                     NumberFormat format = NumberFormat::Significant6);

/// Bar chart of lnQ residuals against x: one bar per observation, bars above
/// the zero baseline are over-predictions. Also writes the (x, ln_q) series
/// to the sibling path with extension ".csv", which is returned.
std::filesystem::path write_residual_svg(std::span<const double> ln_q_residuals, std::span<const double> xs,
                                         const std::filesystem::path& svg_path);

} // namespace lnq
