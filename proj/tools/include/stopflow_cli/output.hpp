#pragma once

#include <initializer_list>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stopflow::cli {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kCsvHeader = "# stopflow v1";
inline constexpr int kJsonSchema = 1;

/// 17 significant digits; "inf", "-inf", "nan" for non-finite values.
std::string num(double v);

/// CSV writer: the version comment line, then a header row on construction.
class CsvWriter {
public:
    CsvWriter(std::ostream& os, std::initializer_list<std::string_view> columns);

    CsvWriter& field(double v);
    CsvWriter& field(long long v);
    CsvWriter& field(std::size_t v) { return field(static_cast<long long>(v)); }
    CsvWriter& field(int v) { return field(static_cast<long long>(v)); }
    CsvWriter& field(bool v);
    /// Quoted when it contains a comma, quote or newline.
    CsvWriter& field(std::string_view v);
    CsvWriter& field(const char* v) { return field(std::string_view{v}); }
    void end_row();

private:
    void sep();

    std::ostream& os_;
    bool first_ = true;
};

/// Writes `content` to `path`, throwing IoError with the path on failure.
void write_file(const std::string& path, std::string_view content);

/// Reads a whole file, throwing IoError with the path on failure.
std::string read_file(const std::string& path);

}  // namespace stopflow::cli
