#include "hids/drift/factory.hpp"

#include <algorithm>
#include <cctype>

#include "hids/common/error.hpp"

namespace hids::drift {
namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

}  // namespace

DetectorKind parse_detector_kind(std::string_view name) {
  const auto key = upper(name);
  if (key == "ADWIN") return DetectorKind::Adwin;
  if (key == "DDM") return DetectorKind::Ddm;
  if (key == "EDDM") return DetectorKind::Eddm;
  if (key == "HDDM_A") return DetectorKind::HddmA;
  if (key == "HDDM_W") return DetectorKind::HddmW;
  if (key == "PAGEHINKLE" || key == "PAGEHINKLEY") return DetectorKind::PageHinkley;
  if (key == "KSWIN") return DetectorKind::Kswin;
  throw ConfigError("unknown drift detector '" + std::string(name) + "'");
}

std::string_view detector_label(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::Adwin:
      return "ADWIN";
    case DetectorKind::Ddm:
      return "DDM";
    case DetectorKind::Eddm:
      return "EDDM";
    case DetectorKind::HddmA:
      return "HDDM_A";
    case DetectorKind::HddmW:
      return "HDDM_W";
    case DetectorKind::PageHinkley:
      return "PageHinkle";
    case DetectorKind::Kswin:
      return "KSWIN";
  }
  return "?";
}

const std::vector<DetectorKind>& all_detector_kinds() {
  static const std::vector<DetectorKind> kinds{
      DetectorKind::Adwin, DetectorKind::Ddm,         DetectorKind::Eddm, DetectorKind::HddmA,
      DetectorKind::HddmW, DetectorKind::PageHinkley, DetectorKind::Kswin};
  return kinds;
}

std::unique_ptr<DriftDetector> make_detector(const DetectorConfig& config) {
  switch (config.kind) {
    case DetectorKind::Adwin:
      return std::make_unique<AdwinWarningWrapper>(config.adwin, config.adwin_warning);
    case DetectorKind::Ddm:
      return std::make_unique<Ddm>(config.ddm);
    case DetectorKind::Eddm:
      return std::make_unique<Eddm>(config.eddm);
    case DetectorKind::HddmA:
      return std::make_unique<HddmA>(config.hddm);
    case DetectorKind::HddmW:
      return std::make_unique<HddmW>(config.hddm);
    case DetectorKind::PageHinkley:
      return std::make_unique<PageHinkley>(config.page_hinkley);
    case DetectorKind::Kswin:
      return std::make_unique<Kswin>(config.kswin);
  }
  throw ConfigError("unhandled detector kind");
}

std::unique_ptr<DriftDetector> make_detector(const DetectorConfig& config, std::uint64_t seed) {
  auto copy = config;
  copy.kswin.seed = seed;
  return make_detector(copy);
}

}  // namespace hids::drift
