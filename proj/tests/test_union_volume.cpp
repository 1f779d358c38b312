#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "nns/rng.hpp"
#include "nns/union_volume.hpp"

using namespace nns;

namespace {

// Oracle: midpoint-rule hit count on a fine grid over the bounding box.
double grid_area(const std::vector<Disk>& disks, int resolution) {
  double x0 = 1e9, x1 = -1e9, y0 = 1e9, y1 = -1e9;
  for (const auto& d : disks) {
    x0 = std::min(x0, d.x - d.r);
    x1 = std::max(x1, d.x + d.r);
    y0 = std::min(y0, d.y - d.r);
    y1 = std::max(y1, d.y + d.r);
  }
  const double hx = (x1 - x0) / resolution, hy = (y1 - y0) / resolution;
  std::size_t hits = 0;
  for (int i = 0; i < resolution; ++i)
    for (int j = 0; j < resolution; ++j) {
      const double x = x0 + (i + 0.5) * hx, y = y0 + (j + 0.5) * hy;
      for (const auto& d : disks)
        if ((x - d.x) * (x - d.x) + (y - d.y) * (y - d.y) <= d.r * d.r) {
          ++hits;
          break;
        }
    }
  return static_cast<double>(hits) * hx * hy;
}

}  // namespace

TEST_CASE("interval unions") {
  const std::vector<Interval> a{{0, 1}, {0.5, 2}, {3, 4}};
  CHECK(interval_union_length(a) == doctest::Approx(3.0));
  const std::vector<Interval> nested{{0, 4}, {1, 2}};
  CHECK(interval_union_length(nested) == doctest::Approx(4.0));
  CHECK(interval_union_length(std::vector<Interval>{}) == 0.0);
}

TEST_CASE("disk unions: closed forms") {
  const double pi = std::numbers::pi;
  CHECK(disk_union_area(std::vector<Disk>{{0.3, -0.2, 1.5}}) == doctest::Approx(pi * 2.25).epsilon(1e-12));
  CHECK(disk_union_area(std::vector<Disk>{{0, 0, 1}, {5, 0, 2}}) == doctest::Approx(5 * pi).epsilon(1e-12));
  CHECK(disk_union_area(std::vector<Disk>{{0, 0, 2}, {0.5, 0.5, 1}}) == doctest::Approx(4 * pi).epsilon(1e-12));
  CHECK(disk_union_area(std::vector<Disk>{{1, 1, 1}, {1, 1, 1}}) == doctest::Approx(pi).epsilon(1e-12));
  // Two unit disks at distance 1: lens area 2pi/3 - sqrt(3)/2.
  const double lens = 2 * pi / 3 - std::sqrt(3.0) / 2;
  CHECK(disk_union_area(std::vector<Disk>{{0, 0, 1}, {1, 0, 1}}) == doctest::Approx(2 * pi - lens).epsilon(1e-12));
}

TEST_CASE("disk unions: grid oracle on random configurations") {
  Rng gen(4);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Disk> disks;
    const int m = 2 + static_cast<int>(gen.below(4));
    for (int i = 0; i < m; ++i) {
      // Balls through the origin, as in the limit-constant integrand.
      const double x = 2 * gen.uniform() - 1, y = 2 * gen.uniform() - 1;
      disks.push_back({x, y, std::hypot(x, y)});
    }
    const double exact = disk_union_area(disks);
    const double approx = grid_area(disks, 1200);
    CHECK(exact == doctest::Approx(approx).epsilon(2e-3));
  }
}
