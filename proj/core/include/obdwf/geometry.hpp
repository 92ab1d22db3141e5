#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "obdwf/rng.hpp"

namespace obdwf {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

/// Disk of radius r with the source and destination at the two ends of the
/// horizontal diameter, split into M vertical strips of equal area.
class DiskGeometry {
 public:
  /// Source at (0, 0), destination at (2r, 0).
  DiskGeometry(double radius, int num_regions);

  double radius() const { return radius_; }
  int num_regions() const { return num_regions_; }
  const Point& center() const { return center_; }
  const Point& source() const { return source_; }
  const Point& destination() const { return destination_; }
  /// M + 1 strip edges along the source-destination axis.
  const std::vector<double>& boundaries() const { return boundaries_; }

  bool contains(const Point& p) const;
  double area() const;
  /// Area of the disk to the left of the vertical line at x.
  double segment_area(double x) const;

 private:
  double radius_;
  int num_regions_;
  Point center_;
  Point source_;
  Point destination_;
  std::vector<double> boundaries_;
};

struct RandomWalk {
  double q = 0.2;
};

struct RandomWaypoint {
  double speed_min = 0.1;
  double speed_max = 0.6;
  std::vector<int> pause_set;  // frames; empty means no pause
};

using MobilityModel = std::variant<RandomWalk, RandomWaypoint>;

/// Throws std::invalid_argument when the model's parameters are out of range.
void validate(const MobilityModel& model);

struct RelayPosition {
  int region = 1;  // 1-based
  Point point;

  friend bool operator==(const RelayPosition&, const RelayPosition&) = default;
};

struct WaypointState {
  Point point;
  Point target;
  double speed = 0.0;
  int pause = 0;

  friend bool operator==(const WaypointState&, const WaypointState&) = default;
};

/// Strip edges solving segment_area(x_i) = i * pi r^2 / M by bisection.
/// Throws std::runtime_error if an edge misses the area tolerance.
std::vector<double> compute_region_boundaries(double radius, int num_regions);

/// Region index in [1, M]; a point exactly on an interior edge belongs to
/// the strip on its right. Throws std::domain_error outside the disk.
int region_of(const DiskGeometry& geometry, const Point& point);

RelayPosition sample_uniform_disk(const DiskGeometry& geometry,
                                  CounterRng& rng);

/// Rejection sampling from the strip's bounding box.
RelayPosition sample_uniform_in_region(const DiskGeometry& geometry,
                                       int region, CounterRng& rng);

/// One step of the birth-death region chain: interior regions move left or
/// right with probability q each; the end regions reflect.
int step_random_walk(int region, double q, int num_regions, CounterRng& rng);

/// Advance one frame under the random waypoint model.
WaypointState step_waypoint(const WaypointState& state,
                            const DiskGeometry& geometry,
                            const RandomWaypoint& model, CounterRng& rng);

/// Fresh waypoint state: uniform position, target, and speed, no pause.
WaypointState initial_waypoint(const DiskGeometry& geometry,
                               const RandomWaypoint& model, CounterRng& rng);

}  // namespace obdwf
