#include "nns/union_volume.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace nns {

double interval_union_length(std::span<const Interval> intervals) {
  std::vector<Interval> sorted(intervals.begin(), intervals.end());
  std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  double total = 0.0;
  bool open = false;
  double lo = 0.0, hi = 0.0;
  for (const auto& iv : sorted) {
    if (!open) {
      lo = iv.lo;
      hi = iv.hi;
      open = true;
    } else if (iv.lo <= hi) {
      hi = std::max(hi, iv.hi);
    } else {
      total += hi - lo;
      lo = iv.lo;
      hi = iv.hi;
    }
  }
  if (open) total += hi - lo;
  return total;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Green's contribution of the arc [a, b] (radians, a <= b) of disk c.
double arc_term(const Disk& c, double a, double b) {
  return 0.5 * (c.r * c.r * (b - a) + c.r * (c.x * (std::sin(b) - std::sin(a)) - c.y * (std::cos(b) - std::cos(a))));
}

}  // namespace

double disk_union_area(std::span<const Disk> disks) {
  const std::size_t n = disks.size();
  double area = 0.0;
  std::vector<std::pair<double, double>> covered;
  for (std::size_t i = 0; i < n; ++i) {
    const Disk& c = disks[i];
    if (!(c.r > 0.0)) continue;
    covered.clear();
    bool hidden = false;
    for (std::size_t j = 0; j < n && !hidden; ++j) {
      if (j == i) continue;
      const Disk& o = disks[j];
      if (!(o.r > 0.0)) continue;
      const double dx = o.x - c.x, dy = o.y - c.y;
      const double dist = std::hypot(dx, dy);
      // Identical disks: only the lowest index keeps its boundary.
      if (dist == 0.0 && o.r == c.r) {
        hidden = j < i;
        continue;
      }
      if (dist >= c.r + o.r) continue;      // disjoint
      if (dist + c.r <= o.r) {              // c inside o
        hidden = true;
        continue;
      }
      if (dist + o.r <= c.r) continue;      // o inside c
      const double phi = std::atan2(dy, dx);
      const double cos_half = (c.r * c.r + dist * dist - o.r * o.r) / (2.0 * c.r * dist);
      const double half = std::acos(std::clamp(cos_half, -1.0, 1.0));
      double a = phi - half, b = phi + half;
      // Normalize into [0, 2pi), splitting arcs that wrap.
      a = std::fmod(a + 2.0 * kTwoPi, kTwoPi);
      b = a + 2.0 * half;
      if (b > kTwoPi) {
        covered.emplace_back(a, kTwoPi);
        covered.emplace_back(0.0, b - kTwoPi);
      } else {
        covered.emplace_back(a, b);
      }
    }
    if (hidden) continue;
    std::sort(covered.begin(), covered.end());
    double cursor = 0.0;
    for (const auto& [a, b] : covered) {
      if (a > cursor) area += arc_term(c, cursor, a);
      cursor = std::max(cursor, b);
    }
    if (cursor < kTwoPi) area += arc_term(c, cursor, kTwoPi);
  }
  return area;
}

}  // namespace nns
