#include "hids/flowdata/csv_reader.hpp"

#include <algorithm>
#include <cctype>

namespace hids::flowdata {
namespace {

std::string trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

bool blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(trimmed(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(trimmed(cell));
  return cells;
}

FlowCsvReader::FlowCsvReader(const std::filesystem::path& path, StreamSchema schema)
    : in_(path), schema_(std::move(schema)) {
  if (!in_) throw Error("cannot open '" + path.string() + "'");
  std::string header_line;
  if (!std::getline(in_, header_line)) {
    throw SchemaError("'" + path.string() + "' has no header row", "");
  }
  ++line_;
  // UTF-8 byte order mark
  if (header_line.rfind("\xEF\xBB\xBF", 0) == 0) header_line.erase(0, 3);
  const auto header = split_csv_line(header_line);

  if (schema_.column_names.empty()) {
    schema_.column_names = header;
  } else {
    const std::size_t n = std::max(header.size(), schema_.column_names.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (i >= header.size()) {
        throw SchemaError("header is missing column '" + schema_.column_names[i] + "'",
                          schema_.column_names[i]);
      }
      if (i >= schema_.column_names.size()) {
        throw SchemaError("unexpected header column '" + header[i] + "'", header[i]);
      }
      if (header[i] != schema_.column_names[i]) {
        throw SchemaError("header column " + std::to_string(i) + " is '" + header[i] +
                              "', expected '" + schema_.column_names[i] + "'",
                          schema_.column_names[i]);
      }
    }
  }
  schema_.validate();
  const auto it = std::find(schema_.column_names.begin(), schema_.column_names.end(),
                            schema_.label_column);
  label_index_ = static_cast<std::size_t>(it - schema_.column_names.begin());
}

std::optional<FlowRecord> FlowCsvReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (blank(line)) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != schema_.column_names.size()) {
      throw RowError("expected " + std::to_string(schema_.column_names.size()) +
                         " cells, found " + std::to_string(cells.size()),
                     line_);
    }
    if (cells[label_index_].empty()) throw RowError("empty label", line_);
    FlowRecord record;
    record.values.reserve(cells.size());
    for (const auto& c : cells) record.values.push_back(parse_cell(c));
    record.label_raw = std::move(cells[label_index_]);
    return record;
  }
  return std::nullopt;
}

FlowCsvReader open_stream(const std::filesystem::path& path, const StreamSchema& schema) {
  return FlowCsvReader(path, schema);
}

std::size_t count_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::string line;
  std::size_t rows = 0;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      continue;
    }
    if (!blank(line)) ++rows;
  }
  return rows;
}

}  // namespace hids::flowdata
