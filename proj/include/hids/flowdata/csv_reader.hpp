#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hids/flowdata/flow_record.hpp"

namespace hids::flowdata {

// Splits one CSV line (RFC 4180 quoting, no embedded newlines). Cells are
// trimmed of surrounding whitespace.
std::vector<std::string> split_csv_line(std::string_view line);

// Sequential reader over a flow-record CSV file with a header row.
//
// The header is validated against the schema on construction. If the schema
// lists no column names, the file header is adopted. Rows that cannot be
// turned into a FlowRecord raise RowError; the reader stays positioned after
// the bad row so callers may skip and continue.
class FlowCsvReader {
 public:
  FlowCsvReader(const std::filesystem::path& path, StreamSchema schema);

  std::optional<FlowRecord> next();

  // The schema with column_names resolved against the header.
  const StreamSchema& schema() const { return schema_; }
  std::size_t line_number() const { return line_; }

 private:
  std::ifstream in_;
  StreamSchema schema_;
  std::size_t label_index_ = 0;
  std::size_t line_ = 0;
};

FlowCsvReader open_stream(const std::filesystem::path& path,
                          const StreamSchema& schema);

// Counts data rows (non-empty lines after the header).
std::size_t count_rows(const std::filesystem::path& path);

}  // namespace hids::flowdata
