#include "lnq/dataio.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lnq {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        const auto cell = std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        out.emplace_back(trim(cell));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

struct RawCsv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
};

RawCsv read_raw(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CsvError("cannot open " + path.string());
    RawCsv raw;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (blank(line)) continue;
        if (!have_header) {
            raw.header = split_row(line);
            have_header = true;
            continue;
        }
        raw.rows.push_back(split_row(line));
        raw.line_numbers.push_back(line_no);
    }
    if (!have_header) throw SchemaError(path.string() + ": file has no header row");
    return raw;
}

std::size_t find_column(const RawCsv& raw, const std::string& name, const std::filesystem::path& path) {
    const auto it = std::find(raw.header.begin(), raw.header.end(), name);
    if (it == raw.header.end()) {
        throw SchemaError(path.string() + ": missing column '" + name + "'");
    }
    return static_cast<std::size_t>(it - raw.header.begin());
}

double parse_cell(const RawCsv& raw, std::size_t row, std::size_t col, const std::filesystem::path& path) {
    const auto where = [&] {
        return path.string() + ": row " + std::to_string(row + 1) + " (line " + std::to_string(raw.line_numbers[row]) + ")";
    };
    const auto& cells = raw.rows[row];
    if (col >= cells.size()) {
        throw ParseError(where() + ": missing value for column '" + raw.header[col] + "'", row + 1);
    }
    const std::string& text = cells[col];
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
        throw ParseError(where() + ": column '" + raw.header[col] + "' value '" + text + "' is not a finite number",
                         row + 1);
    }
    return value;
}

void require_positive_cell(double v, const RawCsv& raw, std::size_t row, std::size_t col,
                           const std::filesystem::path& path) {
    if (!(v > 0.0)) {
        throw ValidationError(path.string() + ": row " + std::to_string(row + 1) + " (line " +
                                  std::to_string(raw.line_numbers[row]) + "): column '" + raw.header[col] +
                                  "' value " + format_number(v, NumberFormat::RoundTrip) + " is not positive",
                              row + 1);
    }
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw std::runtime_error("error while writing " + path.string());
}

} // namespace

void TableDocument::validate() const {
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != columns.size()) {
            throw std::invalid_argument("table '" + title + "' row " + std::to_string(r + 1) + " has " +
                                        std::to_string(rows[r].size()) + " values for " +
                                        std::to_string(columns.size()) + " columns");
        }
    }
}

std::size_t TableDocument::column_index(const std::string& label) const {
    const auto it = std::find(columns.begin(), columns.end(), label);
    if (it == columns.end()) throw std::out_of_range("table '" + title + "' has no column '" + label + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

std::string format_number(double value, NumberFormat format) {
    std::array<char, 64> buf{};
    const auto res = format == NumberFormat::RoundTrip
                         ? std::to_chars(buf.data(), buf.data() + buf.size(), value)
                         : std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 6);
    return std::string(buf.data(), res.ptr);
}

XYDataset load_xy_csv(const std::filesystem::path& path, const std::string& x_column, const std::string& y_column) {
    const RawCsv raw = read_raw(path);
    const std::size_t xc = find_column(raw, x_column, path);
    const std::size_t yc = find_column(raw, y_column, path);
    std::vector<double> xs, ys;
    xs.reserve(raw.rows.size());
    ys.reserve(raw.rows.size());
    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
        const double x = parse_cell(raw, r, xc, path);
        const double y = parse_cell(raw, r, yc, path);
        require_positive_cell(y, raw, r, yc, path);
        xs.push_back(x);
        ys.push_back(y);
    }
    if (xs.size() < 2) {
        throw ValidationError(path.string() + ": need at least 2 data rows, found " + std::to_string(xs.size()),
                              xs.size());
    }
    return XYDataset(std::move(xs), std::move(ys));
}

PairedObservations load_paired_csv(const std::filesystem::path& path, const std::string& actual_column,
                                   const std::string& predicted_column) {
    const RawCsv raw = read_raw(path);
    const std::size_t ac = find_column(raw, actual_column, path);
    const std::size_t pc = find_column(raw, predicted_column, path);
    std::vector<double> actuals, preds;
    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
        const double a = parse_cell(raw, r, ac, path);
        const double p = parse_cell(raw, r, pc, path);
        require_positive_cell(a, raw, r, ac, path);
        require_positive_cell(p, raw, r, pc, path);
        actuals.push_back(a);
        preds.push_back(p);
    }
    if (actuals.empty()) throw ValidationError(path.string() + ": no data rows", 0);
    return PairedObservations(std::move(actuals), std::move(preds));
}

TableDocument load_table_csv(const std::filesystem::path& path) {
    const RawCsv raw = read_raw(path);
    TableDocument doc{path.stem().string(), raw.header, {}};
    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
        if (raw.rows[r].size() != raw.header.size()) {
            throw ParseError(path.string() + ": row " + std::to_string(r + 1) + " has " +
                                 std::to_string(raw.rows[r].size()) + " cells, header has " +
                                 std::to_string(raw.header.size()),
                             r + 1);
        }
        std::vector<double> row;
        for (std::size_t c = 0; c < raw.header.size(); ++c) row.push_back(parse_cell(raw, r, c, path));
        doc.rows.push_back(std::move(row));
    }
    return doc;
}

void write_xy_csv(const XYDataset& data, const std::filesystem::path& path, const std::string& x_column,
                  const std::string& y_column) {
    auto out = open_for_write(path);
    out << x_column << ',' << y_column << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        out << format_number(data.xs()[i], NumberFormat::RoundTrip) << ','
            << format_number(data.ys()[i], NumberFormat::RoundTrip) << '\n';
    }
    finish(out, path);
}

void write_table_csv(const TableDocument& doc, const std::filesystem::path& path, NumberFormat format) {
    doc.validate();
    auto out = open_for_write(path);
    for (std::size_t c = 0; c < doc.columns.size(); ++c) out << (c ? "," : "") << doc.columns[c];
    out << '\n';
    for (const auto& row : doc.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c], format);
        out << '\n';
    }
    finish(out, path);
}

std::filesystem::path write_residual_svg(std::span<const double> ln_q_residuals, std::span<const double> xs,
                                         const std::filesystem::path& svg_path) {
    if (ln_q_residuals.size() != xs.size()) {
        throw std::invalid_argument("residual and x series differ in length");
    }
    const std::size_t n = xs.size();

    constexpr double kWidth = 800.0, kHeight = 400.0, kMargin = 50.0;
    const double plot_w = kWidth - 2 * kMargin;
    const double half_h = (kHeight - 2 * kMargin) / 2.0;
    const double baseline = kMargin + half_h;

    double x_lo = 0.0, x_hi = 1.0, r_max = 0.0;
    if (n > 0) {
        const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
        x_lo = *lo;
        x_hi = *hi;
        for (double r : ln_q_residuals) r_max = std::max(r_max, std::abs(r));
    }
    const double bar_w = std::clamp(plot_w / (1.5 * static_cast<double>(std::max<std::size_t>(n, 1))), 1.0, 20.0);
    auto x_pos = [&](double x) {
        if (x_hi == x_lo) return kMargin + plot_w / 2.0;
        return kMargin + bar_w / 2.0 + (x - x_lo) / (x_hi - x_lo) * (plot_w - bar_w);
    };
    // Axis spans at least +-0.1 so rounding-level residuals stay flat.
    const double axis_max = std::max(r_max, 0.1);
    const double scale = half_h / axis_max;

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ln_q_residuals[i];
        const double h = std::abs(r) * scale;
        const double top = r > 0.0 ? baseline - h : baseline;
        const char* kind = r > 0.0 ? "over" : (r < 0.0 ? "under" : "zero");
        svg << "<rect class=\"bar " << kind << "\" data-x=\"" << format_number(xs[i], NumberFormat::RoundTrip)
            << "\" data-value=\"" << format_number(r, NumberFormat::RoundTrip) << "\" x=\""
            << format_number(x_pos(xs[i]) - bar_w / 2.0) << "\" y=\"" << format_number(top) << "\" width=\""
            << format_number(bar_w) << "\" height=\"" << format_number(h) << "\" fill=\""
            << (r > 0.0 ? "#c0504d" : "#4f81bd") << "\"/>\n";
    }
    svg << "<line class=\"baseline\" x1=\"" << kMargin << "\" y1=\"" << baseline << "\" x2=\"" << kWidth - kMargin
        << "\" y2=\"" << baseline << "\" stroke=\"black\" stroke-width=\"1\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">x</text>\n"
        << "<text x=\"16\" y=\"" << baseline << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\""
        << " transform=\"rotate(-90 16 " << baseline << ")\">ln(predicted / actual)</text>\n"
        << "<text x=\"" << kMargin << "\" y=\"" << kMargin - 8 << "\" font-family=\"sans-serif\" font-size=\"11\">+"
        << format_number(axis_max) << "</text>\n"
        << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 16
        << "\" font-family=\"sans-serif\" font-size=\"11\">-" << format_number(axis_max) << "</text>\n"
        << "</svg>\n";

    auto out = open_for_write(svg_path);
    out << svg.str();
    finish(out, svg_path);

    TableDocument series{"ln_q_residuals", {"x", "ln_q"}, {}};
    for (std::size_t i = 0; i < n; ++i) series.rows.push_back({xs[i], ln_q_residuals[i]});
    auto csv_path = svg_path;
    csv_path.replace_extension(".csv");
    write_table_csv(series, csv_path, NumberFormat::RoundTrip);
    return csv_path;
}

} // namespace lnq
