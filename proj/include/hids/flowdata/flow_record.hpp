#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "hids/common/error.hpp"

namespace hids::flowdata {

// One raw CSV row. Cells that are blank or not a finite number are empty.
struct FlowRecord {
  std::vector<std::optional<double>> values;
  std::string label_raw;
};

// One preprocessed sample: finite features and a binary label
// (0 = benign, 1 = attack).
struct FeatureVector {
  std::vector<double> x;
  int y = 0;

  std::size_t dimension() const { return x.size(); }
  bool operator==(const FeatureVector&) const = default;
};

struct StreamSchema {
  // Empty means "adopt the header of the file being opened".
  std::vector<std::string> column_names;
  std::vector<std::string> drop_columns;
  std::string label_column = "Label";
  // When non-empty, exactly these labels map to 1. Otherwise every label not
  // in benign_labels (case-insensitive) maps to 1.
  std::set<std::string> positive_labels;
  std::set<std::string> benign_labels{"BENIGN"};

  // Identity and time columns removed from flow datasets before learning.
  static std::vector<std::string> identity_columns();

  // Checks drop/label columns against column_names. Throws SchemaError.
  void validate() const;

  int label_of(std::string_view label_raw) const;
};

class SchemaError : public Error {
 public:
  SchemaError(const std::string& message, std::string column)
      : Error(message), column_(std::move(column)) {}
  const std::string& column() const { return column_; }

 private:
  std::string column_;
};

class RowError : public Error {
 public:
  RowError(const std::string& message, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Parses one CSV cell. Blank, NaN, +-Inf and non-numeric text yield nullopt.
std::optional<double> parse_cell(std::string_view cell);

}  // namespace hids::flowdata
