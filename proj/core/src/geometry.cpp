#include "obdwf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace obdwf {

namespace {

constexpr double kEdgeTolerance = 1e-12;
constexpr double kAreaRelTolerance = 1e-9;
constexpr int kMaxBisectionSteps = 200;

}  // namespace

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

DiskGeometry::DiskGeometry(double radius, int num_regions)
    : radius_(radius),
      num_regions_(num_regions),
      center_{radius, 0.0},
      source_{0.0, 0.0},
      destination_{2.0 * radius, 0.0},
      boundaries_(compute_region_boundaries(radius, num_regions)) {}

bool DiskGeometry::contains(const Point& p) const {
  const double dx = p.x - center_.x;
  const double dy = p.y - center_.y;
  return dx * dx + dy * dy <= radius_ * radius_ * (1.0 + 1e-12);
}

double DiskGeometry::area() const {
  return std::numbers::pi * radius_ * radius_;
}

double DiskGeometry::segment_area(double x) const {
  const double r = radius_;
  const double u = std::clamp(center_.x - x, -r, r);
  return r * r * std::acos(u / r) - u * std::sqrt(std::max(0.0, r * r - u * u));
}

std::vector<double> compute_region_boundaries(double radius, int num_regions) {
  if (!(radius > 0.0)) {
    throw std::invalid_argument("disk radius must be positive");
  }
  if (num_regions < 1) {
    throw std::invalid_argument("number of regions must be at least 1");
  }
  const double r = radius;
  const double c = radius;
  const auto area_left = [r, c](double x) {
    const double u = std::clamp(c - x, -r, r);
    return r * r * std::acos(u / r) - u * std::sqrt(std::max(0.0, r * r - u * u));
  };
  const double total = std::numbers::pi * r * r;
  const int m = num_regions;

  std::vector<double> edges(static_cast<std::size_t>(m) + 1);
  edges.front() = 0.0;
  edges.back() = 2.0 * r;
  for (int i = 1; i < m; ++i) {
    const double target = total * i / m;
    // Exact by symmetry.
    if (2 * i == m) {
      edges[i] = c;
      continue;
    }
    double lo = edges[i - 1];
    double hi = 2.0 * r;
    int steps = 0;
    while (hi - lo > kEdgeTolerance && steps < kMaxBisectionSteps) {
      const double mid = 0.5 * (lo + hi);
      if (area_left(mid) < target) {
        lo = mid;
      } else {
        hi = mid;
      }
      ++steps;
    }
    edges[i] = 0.5 * (lo + hi);
    if (std::abs(area_left(edges[i]) - target) > kAreaRelTolerance * target) {
      throw std::runtime_error("region boundary bisection did not converge for edge " +
                               std::to_string(i));
    }
  }
  return edges;
}

int region_of(const DiskGeometry& geometry, const Point& point) {
  if (!geometry.contains(point)) {
    throw std::domain_error("point lies outside the disk");
  }
  const auto& edges = geometry.boundaries();
  // First edge strictly greater than x; ties go right.
  const auto it = std::upper_bound(edges.begin() + 1, edges.end() - 1, point.x);
  return static_cast<int>(it - edges.begin());
}

RelayPosition sample_uniform_disk(const DiskGeometry& geometry,
                                  CounterRng& rng) {
  const double r = geometry.radius();
  const Point& c = geometry.center();
  for (;;) {
    const double x = (2.0 * uniform01(rng) - 1.0) * r;
    const double y = (2.0 * uniform01(rng) - 1.0) * r;
    if (x * x + y * y <= r * r) {
      const Point p{c.x + x, c.y + y};
      return {region_of(geometry, p), p};
    }
  }
}

RelayPosition sample_uniform_in_region(const DiskGeometry& geometry,
                                       int region, CounterRng& rng) {
  if (region < 1 || region > geometry.num_regions()) {
    throw std::out_of_range("region index out of range");
  }
  const auto& edges = geometry.boundaries();
  const double left = edges[region - 1];
  const double right = edges[region];
  const double r = geometry.radius();
  const double cx = geometry.center().x;
  // Tallest chord inside the strip.
  const double nearest =
      (left <= cx && cx <= right) ? cx : (right < cx ? right : left);
  const double u = nearest - cx;
  const double half_height = std::sqrt(std::max(0.0, r * r - u * u));
  for (;;) {
    const double x = left + (right - left) * uniform01(rng);
    const double y = (2.0 * uniform01(rng) - 1.0) * half_height;
    const double dx = x - cx;
    if (dx * dx + y * y <= r * r) {
      return {region, Point{x, y}};
    }
  }
}

int step_random_walk(int region, double q, int num_regions, CounterRng& rng) {
  if (num_regions <= 1) {
    return region;
  }
  const double u = uniform01(rng);
  if (region == 1) {
    return u < q ? 2 : 1;
  }
  if (region == num_regions) {
    return u < q ? num_regions - 1 : num_regions;
  }
  if (u < q) {
    return region - 1;
  }
  if (u < 2.0 * q) {
    return region + 1;
  }
  return region;
}

namespace {

int draw_pause(const RandomWaypoint& model, CounterRng& rng) {
  if (model.pause_set.empty()) {
    return 0;
  }
  return model.pause_set[uniform_below(rng, model.pause_set.size())];
}

double draw_speed(const RandomWaypoint& model, CounterRng& rng) {
  return model.speed_min + (model.speed_max - model.speed_min) * uniform01(rng);
}

}  // namespace

WaypointState initial_waypoint(const DiskGeometry& geometry,
                               const RandomWaypoint& model, CounterRng& rng) {
  WaypointState s;
  s.point = sample_uniform_disk(geometry, rng).point;
  s.target = sample_uniform_disk(geometry, rng).point;
  s.speed = draw_speed(model, rng);
  s.pause = 0;
  return s;
}

WaypointState step_waypoint(const WaypointState& state,
                            const DiskGeometry& geometry,
                            const RandomWaypoint& model, CounterRng& rng) {
  WaypointState next = state;
  if (next.pause > 0) {
    --next.pause;
    return next;
  }
  const double dx = next.target.x - next.point.x;
  const double dy = next.target.y - next.point.y;
  const double remaining = std::hypot(dx, dy);
  if (remaining <= next.speed) {
    next.point = next.target;
    next.pause = draw_pause(model, rng);
    next.target = sample_uniform_disk(geometry, rng).point;
    next.speed = draw_speed(model, rng);
    return next;
  }
  const double f = next.speed / remaining;
  next.point.x += f * dx;
  next.point.y += f * dy;
  return next;
}

void validate(const MobilityModel& model) {
  if (const auto* walk = std::get_if<RandomWalk>(&model)) {
    if (!(walk->q > 0.0 && walk->q <= 0.5)) {
      throw std::invalid_argument("random walk q must lie in (0, 1/2]");
    }
    return;
  }
  const auto& wp = std::get<RandomWaypoint>(model);
  if (!(wp.speed_min >= 0.0 && wp.speed_min <= wp.speed_max)) {
    throw std::invalid_argument("waypoint speeds must satisfy 0 <= min <= max");
  }
  for (int p : wp.pause_set) {
    if (p < 0) {
      throw std::invalid_argument("waypoint pauses must be nonnegative");
    }
  }
}

}  // namespace obdwf
