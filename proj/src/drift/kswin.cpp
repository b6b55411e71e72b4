#include "hids/drift/kswin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "hids/common/error.hpp"

namespace hids::drift {

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error("KS statistic needs two non-empty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

double ks_p_value(double d, std::size_t n, std::size_t m) {
  const double ne = static_cast<double>(n) * static_cast<double>(m) / static_cast<double>(n + m);
  const double sq = std::sqrt(ne);
  const double lambda = (sq + 0.12 + 0.11 / sq) * d;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_critical_value(double alpha, std::size_t n, std::size_t m) {
  const double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);
  return c * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * static_cast<double>(m)));
}

Kswin::Kswin(KswinParams params)
    : params_(params), rng_(params.seed), critical_(0.0) {
  if (!(params_.alpha > 0.0 && params_.alpha < 1.0)) throw ConfigError("KSWIN alpha must lie in (0, 1)");
  if (params_.stat_size == 0 || 2 * params_.stat_size > params_.window) {
    throw ConfigError("KSWIN needs 0 < 2 * stat_size <= window");
  }
  critical_ = ks_critical_value(params_.alpha, params_.stat_size, params_.stat_size);
}

void Kswin::reset() {
  rng_.seed(params_.seed);
  window_.clear();
  last_statistic_ = 0.0;
}

DriftStatus Kswin::update(double value) {
  if (!std::isfinite(value)) throw Error("KSWIN input must be finite");
  window_.push_back(value);
  if (window_.size() > params_.window) window_.pop_front();
  if (window_.size() < params_.window) return DriftStatus::InControl;

  const std::size_t older = params_.window - params_.stat_size;
  std::vector<std::size_t> pool(older);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::vector<double> sampled;
  sampled.reserve(params_.stat_size);
  for (std::size_t i = 0; i < params_.stat_size; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, older - 1);
    std::swap(pool[i], pool[pick(rng_)]);
    sampled.push_back(window_[pool[i]]);
  }
  std::vector<double> recent(window_.end() - static_cast<std::ptrdiff_t>(params_.stat_size),
                             window_.end());
  last_statistic_ = ks_statistic(sampled, recent);
  if (last_statistic_ > critical_) {
    reset();
    return DriftStatus::Drift;
  }
  return DriftStatus::InControl;
}

}  // namespace hids::drift
