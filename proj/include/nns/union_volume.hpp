#pragma once

#include <span>

namespace nns {

struct Interval {
  double lo, hi;
};

/// Total length of a union of closed intervals (sort and merge).
double interval_union_length(std::span<const Interval> intervals);

struct Disk {
  double x, y, r;
};

/// Exact area of a union of disks: sum over the uncovered boundary arcs of
/// the Green's theorem line integral (1/2) \oint (x dy - y dx).
double disk_union_area(std::span<const Disk> disks);

}  // namespace nns
