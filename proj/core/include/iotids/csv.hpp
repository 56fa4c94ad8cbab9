#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace iotids::csv {

using Record = std::vector<std::string>;

// Minimal RFC-4180 reader: quoted fields, doubled quotes, embedded newlines,
// CRLF or LF line endings. A UTF-8 byte-order mark before the header is
// skipped.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Returns false at end of input. Blank lines are skipped.
  bool next(Record& record);
  // 1-based physical line number where the last record started.
  std::size_t line() const noexcept { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 1;
  std::size_t record_line_ = 0;
  bool started_ = false;
};

// Quotes a field only when it contains a separator, quote or newline.
std::string escape(std::string_view field);

void write_record(std::ostream& out, const std::vector<std::string>& fields);

// Reads an entire file. Throws Error(Io) when the file cannot be opened.
std::vector<Record> read_file(const std::string& path);

}  // namespace iotids::csv
