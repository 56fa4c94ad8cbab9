#include "iotids/csv.hpp"

#include <fstream>

#include "iotids/error.hpp"

namespace iotids::csv {

bool Reader::next(Record& record) {
  record.clear();
  for (;;) {
    if (!started_) {
      started_ = true;
      if (in_.peek() == 0xEF) {
        char bom[3];
        in_.read(bom, 3);
      }
    }
    if (in_.peek() == std::char_traits<char>::eof()) return false;

    record_line_ = line_;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (;;) {
      const int ch = in_.get();
      if (ch == std::char_traits<char>::eof()) {
        if (any || !field.empty()) record.push_back(std::move(field));
        return !record.empty();
      }
      const char c = static_cast<char>(ch);
      if (quoted) {
        if (c == '"') {
          if (in_.peek() == '"') {
            in_.get();
            field.push_back('"');
          } else {
            quoted = false;
          }
        } else {
          if (c == '\n') ++line_;
          field.push_back(c);
        }
        continue;
      }
      if (c == '"') {
        quoted = true;
        any = true;
      } else if (c == ',') {
        record.push_back(std::move(field));
        field.clear();
        any = true;
      } else if (c == '\r') {
        // swallowed; the following '\n' terminates the record
      } else if (c == '\n') {
        ++line_;
        break;
      } else {
        field.push_back(c);
      }
    }
    if (!any && field.empty()) continue;  // blank line
    record.push_back(std::move(field));
    return true;
  }
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_record(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i != 0) out << ',';
    out << escape(fields[i]);
  }
  out << '\n';
}

std::vector<Record> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  Reader reader(in);
  std::vector<Record> rows;
  Record rec;
  while (reader.next(rec)) rows.push_back(rec);
  return rows;
}

}  // namespace iotids::csv
