#pragma once

#include <memory>
#include <string_view>

namespace hids::drift {

enum class DriftStatus { InControl, Warning, Drift };

std::string_view to_string(DriftStatus status);

// Common interface for error-rate drift detectors. A detector returning Drift
// has already restarted its statistics.
class DriftDetector {
 public:
  virtual ~DriftDetector() = default;

  virtual DriftStatus update(double value) = 0;
  virtual void reset() = 0;
  virtual std::string_view name() const = 0;
};

}  // namespace hids::drift
