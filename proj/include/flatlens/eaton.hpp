#pragma once
#include <vector>

#include "flatlens/planar.hpp"

namespace flatlens {

struct EatonLens {
  Vec2 center{0, 0};
  double radius = 1;
};

struct LensTransit {
  Vec2 entry, exit, entry_dir, exit_dir;
  double transit_time = 0;  // delay over the straight chord: pi R
  double metric_time = 0;   // optical length inside the disk: pi R + chord
  double s = 0;
};

inline constexpr double kGrazeTol = 1e-9;

LensTransit lens_retroreflect(const EatonLens& lens, const Vec2& entry, const Vec2& dir);

// elapsed optical time from entry to the point at radius r on the incoming half
double lens_time_of_r(double R, double s, double r);

struct PolarPoint {
  double r, phi;
};
// t in [0, pi R / 2 + sqrt(R^2 - s^2)]: incoming half, entry to perihelion
PolarPoint lens_arc_point(double R, double s, double t);
inline double lens_perihelion_time(double R, double s) { return 0.5 * M_PI * R + std::sqrt(R * R - s * s); }

double invariant_density(double R, double x, double y);

struct OdeSample {
  double time;
  Vec2 pos;
};
struct OdeTrace {
  std::vector<OdeSample> samples;
  Vec2 exit, exit_dir;
  double metric_time = 0;
  bool near_tangent = false;
};
OdeTrace geodesic_ode_trace(const EatonLens& lens, const Vec2& entry, const Vec2& dir, double step);

}  // namespace flatlens
