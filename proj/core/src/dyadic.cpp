#include "kolmo/dyadic.hpp"

#include <cmath>
#include <stdexcept>

namespace kolmo {

double DyadicRational::value() const { return std::ldexp(static_cast<double>(k), -n); }

std::string DyadicRational::to_string() const {
  if (n == 0) return std::to_string(k);
  return std::to_string(k) + "/" + std::to_string(std::int64_t{1} << n);
}

DyadicRational canonicalize(std::int64_t k, int n) {
  if (k < 0 || n < 0) throw std::invalid_argument("canonicalize: negative input");
  if (n > kMaxDyadicLevel) throw std::invalid_argument("canonicalize: level beyond cap");
  while (n > 0 && k % 2 == 0) {
    k /= 2;
    --n;
  }
  return {k, n};
}

DyadicGrid::DyadicGrid(int level, double horizon) : level_(level), horizon_(horizon) {
  if (level < 0 || level > kMaxDyadicLevel) {
    throw std::invalid_argument("DyadicGrid: level outside [0, 40]");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("DyadicGrid: horizon must be > 0");
  }
  count_ = static_cast<std::int64_t>(std::floor(std::ldexp(horizon, level))) + 1;
}

double DyadicGrid::spacing() const { return std::ldexp(1.0, -level_); }

DyadicRational DyadicGrid::point(std::int64_t index) const {
  if (index < 0 || index >= count_) throw std::out_of_range("DyadicGrid::point: index");
  return canonicalize(index, level_);
}

double DyadicGrid::time(std::int64_t index) const {
  if (index < 0 || index >= count_) throw std::out_of_range("DyadicGrid::time: index");
  return std::ldexp(static_cast<double>(index), -level_);
}

std::vector<double> DyadicGrid::times() const {
  std::vector<double> out(static_cast<std::size_t>(count_));
  for (std::int64_t i = 0; i < count_; ++i) out[static_cast<std::size_t>(i)] = time(i);
  return out;
}

NearestDyadic nearest_dyadic(double t, const DyadicGrid& grid) {
  if (!(t >= 0.0) || t > grid.horizon()) {
    throw std::invalid_argument("nearest_dyadic: t outside [0, horizon]");
  }
  // ceil(x - 1/2) rounds halves down, implementing the smaller-point tie rule.
  const double scaled = std::ldexp(t, grid.level());
  std::int64_t i = static_cast<std::int64_t>(std::ceil(scaled - 0.5));
  if (i < 0) i = 0;
  if (i >= grid.count()) i = grid.count() - 1;
  const double point_time = grid.time(i);
  return {grid.point(i), std::abs(t - point_time), i};
}

}  // namespace kolmo
