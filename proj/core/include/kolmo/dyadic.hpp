#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kolmo {

// Levels are capped well below every tolerance in the suite while keeping
// k = 2^n * T inside an int64 with room to spare.
inline constexpr int kMaxDyadicLevel = 40;

// k / 2^n in canonical form: k odd or n = 0. Nonnegative only.
struct DyadicRational {
  std::int64_t k = 0;
  int n = 0;

  double value() const;
  std::string to_string() const;  // "k/2^n" rendered as e.g. "3/8", integers plain

  friend bool operator==(const DyadicRational&, const DyadicRational&) = default;
  friend bool operator<(const DyadicRational& a, const DyadicRational& b) {
    return a.value() < b.value();
  }
};

// Reduce k/2^n to canonical form. Rejects negative k or n and n beyond the cap.
DyadicRational canonicalize(std::int64_t k, int n);

// The grid D_n(T) = {k/2^n : 0 <= k <= floor(2^n * T)}. Points are produced on
// demand; only the count is stored, so fine grids stay cheap to carry around.
class DyadicGrid {
 public:
  DyadicGrid(int level, double horizon);

  int level() const { return level_; }
  double horizon() const { return horizon_; }
  std::int64_t count() const { return count_; }
  double spacing() const;

  DyadicRational point(std::int64_t index) const;  // canonical form of index/2^level
  double time(std::int64_t index) const;           // exact double, index * 2^-level
  std::vector<double> times() const;

  friend bool operator==(const DyadicGrid& a, const DyadicGrid& b) {
    return a.level_ == b.level_ && a.count_ == b.count_ && a.horizon_ == b.horizon_;
  }

 private:
  int level_;
  double horizon_;
  std::int64_t count_;  // floor(2^level * horizon) + 1
};

inline DyadicGrid dyadic_grid(int level, double horizon) { return DyadicGrid(level, horizon); }

struct NearestDyadic {
  DyadicRational point;
  double dist = 0.0;
  std::int64_t index = 0;  // position of the point in the grid
};

// Closest grid point to t; ties break toward the smaller point.
NearestDyadic nearest_dyadic(double t, const DyadicGrid& grid);

}  // namespace kolmo
