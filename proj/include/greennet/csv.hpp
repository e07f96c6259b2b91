#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace greennet {

// First column of every numeric row. Blank lines and a leading
// non-numeric header are skipped; any other malformed row throws.
std::vector<double> read_numeric_column(const std::filesystem::path& path);

// Fixed-precision decimal rendering, stable across runs.
std::string format_number(double value, int precision = 6);

// Minimal CSV emitter. Every file starts with a header row whose column
// names carry units, e.g. "pv_kwh".
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header);

    CsvWriter& cell(double value, int precision = 6);
    CsvWriter& cell(long long value);
    CsvWriter& cell(int value) { return cell(static_cast<long long>(value)); }
    CsvWriter& cell(std::string_view text);
    void end_row();

    const std::filesystem::path& path() const { return path_; }

private:
    void separator();

    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_ = 0;
    std::size_t in_row_ = 0;
};

}  // namespace greennet
