#include "hids/flowdata/flow_record.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

namespace hids::flowdata {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char l, char r) {
           return std::tolower(static_cast<unsigned char>(l)) ==
                  std::tolower(static_cast<unsigned char>(r));
         });
}

bool contains(const std::vector<std::string>& names, const std::string& name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace

std::vector<std::string> StreamSchema::identity_columns() {
  return {"Flow ID", "Source IP", "Source Port", "Destination IP", "Destination Port",
          "Timestamp"};
}

void StreamSchema::validate() const {
  if (label_column.empty()) throw SchemaError("label column is not set", "");
  if (!column_names.empty()) {
    if (!contains(column_names, label_column)) {
      throw SchemaError("label column '" + label_column + "' not in header", label_column);
    }
    for (const auto& c : drop_columns) {
      if (!contains(column_names, c)) {
        throw SchemaError("drop column '" + c + "' not in header", c);
      }
    }
  }
  if (contains(drop_columns, label_column)) {
    throw SchemaError("label column '" + label_column + "' is also a drop column",
                      label_column);
  }
}

int StreamSchema::label_of(std::string_view label_raw) const {
  const auto label = trim(label_raw);
  if (!positive_labels.empty()) {
    return positive_labels.count(std::string(label)) > 0 ? 1 : 0;
  }
  for (const auto& benign : benign_labels) {
    if (iequals(label, benign)) return 0;
  }
  return 1;
}

std::optional<double> parse_cell(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return std::nullopt;
  double value = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

}  // namespace hids::flowdata
