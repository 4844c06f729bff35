#include "lora/csv.hpp"

#include <cstdio>

namespace lora {

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

void CsvWriter::header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i > 0) {
            out_ << ',';
        }
        out_ << names[i];
    }
    out_ << '\n';
}

CsvWriter& CsvWriter::field(double value) { return field(format_number(value)); }

CsvWriter& CsvWriter::field(long value) { return field(std::to_string(value)); }

CsvWriter& CsvWriter::field(unsigned long long value) { return field(std::to_string(value)); }

CsvWriter& CsvWriter::field(int value) { return field(std::to_string(value)); }

CsvWriter& CsvWriter::field(const std::string& text) {
    if (row_open_) {
        out_ << ',';
    }
    out_ << text;
    row_open_ = true;
    return *this;
}

void CsvWriter::end_row() {
    out_ << '\n';
    row_open_ = false;
}

}  // namespace lora
