#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hids {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  DimensionError(std::size_t expected, std::size_t actual)
      : Error("dimension mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const { return expected_; }
  std::size_t actual() const { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

inline void check_dimension(std::size_t expected, std::size_t actual) {
  if (expected != actual) throw DimensionError(expected, actual);
}

}  // namespace hids
