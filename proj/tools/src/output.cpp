#include "stopflow_cli/output.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>

namespace stopflow::cli {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::ostream& os, std::initializer_list<std::string_view> columns) : os_{os} {
    os_ << kCsvHeader << '\n';
    for (auto c : columns) field(c);
    end_row();
}

void CsvWriter::sep() {
    if (!first_) os_ << ',';
    first_ = false;
}

CsvWriter& CsvWriter::field(double v) {
    sep();
    os_ << num(v);
    return *this;
}

CsvWriter& CsvWriter::field(long long v) {
    sep();
    os_ << v;
    return *this;
}

CsvWriter& CsvWriter::field(bool v) {
    sep();
    os_ << (v ? "true" : "false");
    return *this;
}

CsvWriter& CsvWriter::field(std::string_view v) {
    sep();
    if (v.find_first_of(",\"\n") == std::string_view::npos) {
        os_ << v;
        return *this;
    }
    os_ << '"';
    for (char c : v) {
        if (c == '"') os_ << '"';
        os_ << c;
    }
    os_ << '"';
    return *this;
}

void CsvWriter::end_row() {
    os_ << '\n';
    first_ = true;
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open output file '" + path + "': " + std::strerror(errno));
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.close();
    if (!f) throw IoError("failed writing output file '" + path + "'");
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open input file '" + path + "': " + std::strerror(errno));
    std::ostringstream ss;
    ss << f.rdbuf();
    if (f.bad()) throw IoError("failed reading input file '" + path + "'");
    return ss.str();
}

}  // namespace stopflow::cli
