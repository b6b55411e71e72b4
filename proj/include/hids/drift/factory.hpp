#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hids/drift/adwin.hpp"
#include "hids/drift/ddm.hpp"
#include "hids/drift/detector.hpp"
#include "hids/drift/hddm.hpp"
#include "hids/drift/kswin.hpp"
#include "hids/drift/page_hinkley.hpp"

namespace hids::drift {

enum class DetectorKind { Adwin, Ddm, Eddm, HddmA, HddmW, PageHinkley, Kswin };

// Accepts the comparison-table spellings case-insensitively: ADWIN, DDM, EDDM,
// HDDM_A, HDDM_W, PageHinkle (or PageHinkley), KSWIN. Throws ConfigError.
DetectorKind parse_detector_kind(std::string_view name);

// Canonical comparison-table spelling.
std::string_view detector_label(DetectorKind kind);

const std::vector<DetectorKind>& all_detector_kinds();

struct DetectorConfig {
  DetectorKind kind = DetectorKind::Adwin;
  AdwinParams adwin{};
  // Looser ADWIN whose cuts are reported as warnings.
  AdwinParams adwin_warning{.delta = 0.01};
  DdmParams ddm{};
  EddmParams eddm{};
  HddmParams hddm{};
  PageHinkleyParams page_hinkley{};
  KswinParams kswin{};
};

// ADWIN yields the two-sensitivity warning wrapper; the rest map directly.
std::unique_ptr<DriftDetector> make_detector(const DetectorConfig& config);

// Same, with the KSWIN sampling seed replaced (used to give each owner of a
// detector its own stream).
std::unique_ptr<DriftDetector> make_detector(const DetectorConfig& config, std::uint64_t seed);

}  // namespace hids::drift
