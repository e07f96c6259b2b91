#include "greennet/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "greennet/errors.hpp"

namespace greennet {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

std::vector<double> read_numeric_column(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view field = trim(line);
        if (field.empty()) continue;
        if (auto comma = field.find(','); comma != std::string_view::npos) {
            field = trim(field.substr(0, comma));
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
        if (ec != std::errc() || ptr != field.data() + field.size()) {
            if (values.empty() && line_no == 1) continue;  // header
            throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                  ": not a number: '" + std::string(field) + "'");
        }
        values.push_back(v);
    }
    return values;
}

std::string format_number(double value, int precision) {
    if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, value);
    std::string s(buf);
    if (s == "-0" || s.find_first_not_of("-0.") == std::string::npos) {
        // Normalise negative zero so reruns compare byte-for-byte.
        if (!s.empty() && s.front() == '-') s.erase(0, 1);
    }
    return s;
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     std::initializer_list<std::string_view> header)
    : path_(path), out_(path), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    for (auto h : header) cell(h);
    end_row();
}

void CsvWriter::separator() {
    if (in_row_++ > 0) out_ << ',';
}

CsvWriter& CsvWriter::cell(double value, int precision) {
    separator();
    out_ << format_number(value, precision);
    return *this;
}

CsvWriter& CsvWriter::cell(long long value) {
    separator();
    out_ << value;
    return *this;
}

CsvWriter& CsvWriter::cell(std::string_view text) {
    separator();
    out_ << text;
    return *this;
}

void CsvWriter::end_row() {
    if (in_row_ != columns_) {
        throw std::logic_error(path_.string() + ": row has " + std::to_string(in_row_) +
                               " cells, header has " + std::to_string(columns_));
    }
    out_ << '\n';
    in_row_ = 0;
}

}  // namespace greennet
