#pragma once
#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <optional>

#include "flatlens/error.hpp"

namespace flatlens {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Cell = std::array<long long, 2>;

inline constexpr double kEpsGeom = 1e-12;

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }
inline Vec2 perp(const Vec2& v) { return Vec2(-v.y(), v.x()); }
inline Vec2 unit_dir(double theta) { return Vec2(std::cos(theta), std::sin(theta)); }

struct Lattice {
  Vec2 g1{1, 0};
  Vec2 g2{0, 1};
  bool reduced = false;

  Mat2 basis() const {
    Mat2 m;
    m.col(0) = g1;
    m.col(1) = g2;
    return m;
  }
  double det() const { return cross(g1, g2); }
  // real coordinates of p in the basis
  Vec2 coords(const Vec2& p) const { return basis().inverse() * p; }
  Vec2 point(double i, double j) const { return i * g1 + j * g2; }
  Vec2 point(const Cell& c) const { return point(double(c[0]), double(c[1])); }
  Cell cell_of(const Vec2& p) const {
    Vec2 c = coords(p);
    return {(long long)std::floor(c.x()), (long long)std::floor(c.y())};
  }
};

Lattice make_lattice(const Vec2& g1, const Vec2& g2);
Lattice lattice_reduce(const Vec2& g1, const Vec2& g2);
double lattice_min_dist(const Lattice& lat, const Vec2& p, bool exclude_zero);
// p reduced to the fundamental parallelogram [0,1)^2 in lattice coordinates
Vec2 lattice_wrap(const Lattice& lat, const Vec2& p);
// true when d is (within tol) a lattice vector; the integer coefficients go to out
bool lattice_member(const Lattice& lat, const Vec2& d, Cell* out = nullptr, double tol = 1e-9);

struct Segment {
  Vec2 a{0, 0};
  Vec2 b{1, 0};
  Segment() = default;
  Segment(const Vec2& a_, const Vec2& b_);
  Vec2 center() const { return 0.5 * (a + b); }
  double half_length() const { return 0.5 * (b - a).norm(); }
  Vec2 direction() const { return (b - a).normalized(); }
};

enum class HitKind { Miss, Hit, Grazing };

struct RayHit {
  HitKind kind = HitKind::Miss;
  double t = 0;
  double u = 0;
};

// origin + t*dir on seg with t > t_min; Grazing when the ray runs along the segment's line
RayHit segment_ray_hit(const Segment& seg, const Vec2& origin, const Vec2& dir, double t_min = kEpsGeom);

}  // namespace flatlens
