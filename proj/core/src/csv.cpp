#include "splitcp/csv.hpp"

#include <charconv>
#include <cmath>

namespace splitcp::csv {

std::optional<Record> read_record(std::istream& in, std::size_t& line) {
  std::string raw;
  if (!std::getline(in, raw)) return std::nullopt;
  ++line;
  Record rec;
  rec.line = line;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0;; ++i) {
    if (i == raw.size()) {
      if (quoted) {
        // Quoted field continues on the next physical line.
        std::string more;
        if (!std::getline(in, more)) break;
        ++line;
        field.push_back('\n');
        raw = std::move(more);
        i = static_cast<std::size_t>(-1);
        continue;
      }
      break;
    }
    char ch = raw[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < raw.size() && raw[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      rec.fields.push_back(std::move(field));
      field.clear();
    } else if (ch == '\r' && i + 1 == raw.size()) {
      // CRLF
    } else {
      field.push_back(ch);
    }
  }
  rec.fields.push_back(std::move(field));
  return rec;
}

Reader::Reader(std::istream& in) : in_(in) {
  if (auto rec = read_record(in_, line_)) {
    header_ = std::move(rec->fields);
    // Strip a UTF-8 byte order mark from the first header cell.
    if (!header_.empty() && header_[0].starts_with("\xEF\xBB\xBF")) header_[0].erase(0, 3);
  }
}

std::optional<std::size_t> Reader::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i)
    if (header_[i] == name) return i;
  return std::nullopt;
}

std::optional<Record> Reader::next() {
  while (auto rec = read_record(in_, line_)) {
    if (rec->fields.size() == 1 && rec->fields[0].empty()) continue;  // blank line
    return rec;
  }
  return std::nullopt;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "NA";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

}  // namespace splitcp::csv
