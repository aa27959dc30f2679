#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace splitcp::csv {

// One physical record. `line` is the 1-based line where the record starts.
struct Record {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// Reads the next RFC 4180 record (quoted fields, doubled quotes, embedded
// newlines). Returns nullopt at end of input. Handles CRLF.
std::optional<Record> read_record(std::istream& in, std::size_t& line);

// Header-indexed reader.
class Reader {
 public:
  explicit Reader(std::istream& in);

  [[nodiscard]] const std::vector<std::string>& header() const noexcept { return header_; }
  [[nodiscard]] std::optional<std::size_t> column(std::string_view name) const;

  std::optional<Record> next();

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::vector<std::string> header_;
};

// Quotes a field when it contains a separator, quote or newline.
std::string escape(std::string_view field);

// Shortest round-trippable decimal representation.
std::string format_number(double value);

}  // namespace splitcp::csv
