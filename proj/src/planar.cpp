#include "flatlens/planar.hpp"

#include <algorithm>
#include <limits>

namespace flatlens {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DegenerateLattice: return "DegenerateLattice";
    case Errc::ParallelGrazing: return "ParallelGrazing";
    case Errc::NotOnBoundary: return "NotOnBoundary";
    case Errc::DirectionOutward: return "DirectionOutward";
    case Errc::OutOfTimeRange: return "OutOfTimeRange";
    case Errc::DegenerateImpact: return "DegenerateImpact";
    case Errc::OutsideLens: return "OutsideLens";
    case Errc::CenterSingular: return "CenterSingular";
    case Errc::StepTooLarge: return "StepTooLarge";
    case Errc::NotParallelogram: return "NotParallelogram";
    case Errc::BadChip: return "BadChip";
    case Errc::NotOnFold: return "NotOnFold";
    case Errc::CorrespondenceMissing: return "CorrespondenceMissing";
    case Errc::UnknownName: return "UnknownName";
    case Errc::TravelCapExceeded: return "TravelCapExceeded";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::InvalidWeights: return "InvalidWeights";
    case Errc::LatticeMismatch: return "LatticeMismatch";
    case Errc::NotAdmissible: return "NotAdmissible";
    case Errc::BadSection: return "BadSection";
    case Errc::SaddleConnectionDetected: return "SaddleConnectionDetected";
    case Errc::ExactPeriodicity: return "ExactPeriodicity";
    case Errc::NonIntegerCocycle: return "NonIntegerCocycle";
    case Errc::BadInput: return "BadInput";
    case Errc::DeformationBlocked: return "DeformationBlocked";
    case Errc::ImproperCenters: return "ImproperCenters";
    case Errc::SlitParallelToW: return "SlitParallelToW";
    case Errc::TangentialHit: return "TangentialHit";
    case Errc::DiscontinuityHit: return "DiscontinuityHit";
    case Errc::SectionThroughSingularity: return "SectionThroughSingularity";
  }
  return "Unknown";
}

Lattice make_lattice(const Vec2& g1, const Vec2& g2) {
  double scale = std::max(g1.squaredNorm(), g2.squaredNorm());
  if (!(scale > 0) || std::abs(cross(g1, g2)) < 1e-12 * scale)
    throw Error(Errc::DegenerateLattice, "generators are dependent");
  return Lattice{g1, g2, false};
}

Lattice lattice_reduce(const Vec2& g1_in, const Vec2& g2_in) {
  Lattice in = make_lattice(g1_in, g2_in);
  Vec2 u = in.g1, v = in.g2;
  if (u.squaredNorm() > v.squaredNorm()) std::swap(u, v);
  for (int it = 0; it < 200; ++it) {
    double m = std::round(u.dot(v) / u.squaredNorm());
    v -= m * u;
    if (v.squaredNorm() < u.squaredNorm() * (1 - 1e-14)) {
      std::swap(u, v);
      continue;
    }
    break;
  }
  // canonical sign: keep orientation positive
  if (cross(u, v) < 0) v = -v;
  return Lattice{u, v, true};
}

Vec2 lattice_wrap(const Lattice& lat, const Vec2& p) {
  Vec2 c = lat.coords(p);
  c.x() -= std::floor(c.x());
  c.y() -= std::floor(c.y());
  return lat.point(c.x(), c.y());
}

bool lattice_member(const Lattice& lat, const Vec2& d, Cell* out, double tol) {
  Vec2 c = lat.coords(d);
  double i = std::round(c.x()), j = std::round(c.y());
  Vec2 r = d - lat.point(i, j);
  double scale = std::max({1.0, lat.g1.norm(), lat.g2.norm()});
  if (r.norm() > tol * scale) return false;
  if (out) *out = {(long long)i, (long long)j};
  return true;
}

double lattice_min_dist(const Lattice& lat_in, const Vec2& p, bool exclude_zero) {
  Lattice lat = lat_in.reduced ? lat_in : lattice_reduce(lat_in.g1, lat_in.g2);
  // shift p near the origin first; the ball is then small
  Vec2 c = lat.coords(p);
  Vec2 q = p - lat.point(std::round(c.x()), std::round(c.y()));
  Cell base = {(long long)std::round(c.x()), (long long)std::round(c.y())};
  double radius = q.norm() + 2.0 * lat.g2.norm();
  Mat2 inv = lat.basis().inverse();
  int ni = (int)std::ceil(radius * inv.row(0).norm()) + 1;
  int nj = (int)std::ceil(radius * inv.row(1).norm()) + 1;
  double best = std::numeric_limits<double>::infinity();
  for (int i = -ni; i <= ni; ++i)
    for (int j = -nj; j <= nj; ++j) {
      // p + v with v = (i,j) - base
      if (exclude_zero && i == base[0] && j == base[1]) continue;
      best = std::min(best, (q + lat.point(i, j)).norm());
    }
  return best;
}

Segment::Segment(const Vec2& a_, const Vec2& b_) : a(a_), b(b_) {
  if ((b - a).norm() <= kEpsGeom) throw Error(Errc::BadInput, "segment endpoints coincide");
}

RayHit segment_ray_hit(const Segment& seg, const Vec2& o, const Vec2& d, double t_min) {
  Vec2 e = seg.b - seg.a;
  double L = e.norm();
  double den = cross(d, e);
  Vec2 w = seg.a - o;
  if (std::abs(den) <= kEpsGeom * L) {
    // parallel: grazing only if collinear and ahead
    if (std::abs(cross(w, d)) <= 1e-9 * std::max(1.0, L)) {
      double ta = w.dot(d), tb = (seg.b - o).dot(d);
      if (std::max(ta, tb) > t_min) return RayHit{HitKind::Grazing, std::max(t_min, std::min(ta, tb)), 0};
    }
    return {};
  }
  double t = cross(w, e) / den;
  double s = cross(w, d) / den;  // fraction along seg
  if (t <= t_min || s < 0 || s > 1) return {};
  return RayHit{HitKind::Hit, t, (s - 0.5) * L};
}

}  // namespace flatlens
