#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lora {

// 9 significant digits, shortest form; deterministic for a given double.
std::string format_number(double value);

// Minimal CSV emitter: header always present, LF line endings, fixed column
// order, numbers via format_number.
class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(const std::vector<std::string>& names);
    CsvWriter& field(double value);
    CsvWriter& field(long value);
    CsvWriter& field(unsigned long long value);
    CsvWriter& field(int value);
    CsvWriter& field(const std::string& text);
    void end_row();

  private:
    std::ostream& out_;
    bool row_open_ = false;
};

}  // namespace lora
