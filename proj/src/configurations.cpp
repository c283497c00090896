#include "flatlens/configurations.hpp"

#include <array>
#include <numeric>
#include <algorithm>
#include <cmath>

namespace flatlens {

LensConfiguration make_configuration(const Lattice& lat, const std::vector<EatonLens>& lenses) {
  LensConfiguration cfg{lat, {}};
  // radii at rounding level count as zero
  double scale = std::sqrt(std::abs(lat.det()));
  for (const auto& l : lenses)
    if (l.radius > 1e-12 * scale) cfg.lenses.push_back(l);
  return cfg;
}

namespace {
double lfun(double theta) {
  double ct = 1.0 / std::tan(theta);
  return 2 - ct * (1 - ct);
}
LensConfiguration three(const Vec2& g2, double r0, const Vec2& cp, double rp) {
  LensConfiguration cfg;
  cfg.lattice = make_lattice(Vec2(0, 4), g2);
  cfg.lenses = {{Vec2(0, 0), std::abs(r0)}, {cp, std::abs(rp)}, {-cp, std::abs(rp)}};
  return cfg;
}
}  // namespace

LensConfiguration gamma_w_branch(int k, double t) {
  double s = std::sin(t), c = std::cos(t);
  switch (k) {
    case 1: return three(Vec2(4, 2), 2 * s, Vec2(1, 1 + std::tan(t)), c);
    case 2: {
      double l = lfun(t);
      return three(Vec2(2 * l, 2), l * s, Vec2(c / s, 2), c);
    }
    case 3: {
      // mirror image of the second branch
      double l = lfun(M_PI - t);
      return three(Vec2(2 * l, 2), l * s, Vec2(-c / s, 2), -c);
    }
    case 4: return three(Vec2(4, 2), 2 * s, Vec2(-1, 1 - std::tan(t)), -c);
  }
  throw Error(Errc::BadInput, "branch index must be 1..4");
}

LensConfiguration gamma_w_raw(double theta) {
  double t = std::fmod(theta, M_PI);
  if (t < 0) t += M_PI;
  int k = t <= M_PI / 4 ? 1 : t <= M_PI / 2 ? 2 : t <= 3 * M_PI / 4 ? 3 : 4;
  return gamma_w_branch(k, t);
}

LensConfiguration gamma_w(double theta) {
  auto raw = gamma_w_raw(theta);
  return make_configuration(raw.lattice, raw.lenses);
}

bool is_proper(const LensConfiguration& cfg) {
  for (size_t i = 0; i < cfg.lenses.size(); ++i)
    for (size_t j = i + 1; j < cfg.lenses.size(); ++j)
      if (lattice_member(cfg.lattice, cfg.lenses[i].center - cfg.lenses[j].center)) return false;
  return true;
}

Admissibility is_admissible(const LensConfiguration& cfg, double tol) {
  if (!is_proper(cfg)) throw Error(Errc::ImproperCenters, "two lens centers coincide modulo the lattice");
  Lattice red = lattice_reduce(cfg.lattice.g1, cfg.lattice.g2);
  Admissibility a;
  bool first = true;
  for (size_t i = 0; i < cfg.lenses.size(); ++i)
    for (size_t j = i; j < cfg.lenses.size(); ++j) {
      const auto& L = cfg.lenses[i];
      const auto& M = cfg.lenses[j];
      double d = lattice_min_dist(red, L.center - M.center, i == j);
      double gap = d - (L.radius + M.radius);
      if (first || gap < a.worst_gap) {
        a.worst_gap = gap;
        a.worst_i = (int)i;
        a.worst_j = (int)j;
        first = false;
      }
    }
  a.ok = first || a.worst_gap >= -tol;
  return a;
}

SlitConfiguration lens_to_slits(const LensConfiguration& cfg, double theta) {
  SlitConfiguration s;
  s.lattice = cfg.lattice;
  s.v = perp(unit_dir(theta));
  for (const auto& l : cfg.lenses) {
    s.centers.push_back(l.center);
    s.radii.push_back(l.radius);
  }
  return s;
}

Skeleton to_skeleton(const SlitConfiguration& s) {
  Skeleton sk;
  sk.lattice = s.lattice;
  for (size_t i = 0; i < s.centers.size(); ++i)
    sk.folds.push_back(SlitFold{Segment(s.centers[i] - s.radii[i] * s.v, s.centers[i] + s.radii[i] * s.v)});
  return sk;
}

bool is_separated(const SlitConfiguration& s, const Vec2& w) {
  Cell k;
  if (!lattice_member(s.lattice, w, &k) || w.norm() < 1e-12) throw Error(Errc::BadInput, "w must be a nonzero lattice vector");
  if (std::abs(cross(s.v, w.normalized())) < 1e-12) throw Error(Errc::SlitParallelToW, "slits are parallel to w");
  long long g = std::gcd(std::llabs(k[0]), std::llabs(k[1]));
  Vec2 w0 = w / double(g);
  Vec2 nu = perp(w0.normalized());
  double h = std::abs(s.lattice.det()) / w0.norm();
  double sv = std::abs(s.v.dot(nu));
  auto wrap = [&](double x) {
    x = std::fmod(x, h);
    return x < 0 ? x + h : x;
  };
  const double eps = 1e-12 * h;
  for (size_t i = 0; i < s.centers.size(); ++i)
    if (2 * s.radii[i] * sv >= h - eps) return false;
  for (size_t i = 0; i < s.centers.size(); ++i)
    for (size_t j = i + 1; j < s.centers.size(); ++j) {
      double di = wrap(s.centers[j].dot(nu) - s.centers[i].dot(nu));
      double dist = std::min(di, h - di);
      if (dist <= eps) continue;  // same loop parallel to w
      if (dist < (s.radii[i] + s.radii[j]) * sv - eps) return false;
    }
  return true;
}

namespace {

using Poly = std::vector<Vec2>;

bool polys_overlap(const Poly& P, const Poly& Q) {
  std::vector<Vec2> axes;
  auto add = [&](const Poly& X) {
    for (size_t i = 0; i < X.size(); ++i) {
      Vec2 e = X[(i + 1) % X.size()] - X[i];
      if (e.norm() < 1e-14) continue;
      axes.push_back(perp(e).normalized());
      axes.push_back(e.normalized());
    }
  };
  add(P);
  add(Q);
  for (const auto& ax : axes) {
    double pmin = 1e300, pmax = -1e300, qmin = 1e300, qmax = -1e300;
    for (auto& p : P) pmin = std::min(pmin, p.dot(ax)), pmax = std::max(pmax, p.dot(ax));
    for (auto& q : Q) qmin = std::min(qmin, q.dot(ax)), qmax = std::max(qmax, q.dot(ax));
    if (pmax < qmin - 1e-12 || qmax < pmin - 1e-12) return false;
  }
  return true;
}

}  // namespace

RescaleResult railed_rescale(const SlitConfiguration& s, double theta, double xi) {
  double delta = theta - xi;
  delta = std::remainder(delta, M_PI);
  if (std::abs(delta) >= M_PI / 2 - 1e-12) throw Error(Errc::BadInput, "|theta - xi| must be below pi/2");
  double sec = 1.0 / std::cos(delta);
  double tn = std::tan(delta);
  Vec2 et = unit_dir(theta);
  auto rot = [&](double a, double b) { return Vec2(et.x() * a - et.y() * b, et.y() * a + et.x() * b); };
  // each region is two triangles with apex at the center
  std::vector<std::array<Poly, 2>> regions;
  std::vector<double> reach;
  for (size_t j = 0; j < s.centers.size(); ++j) {
    Vec2 c = s.centers[j];
    double r = s.radii[j];
    Vec2 p0 = r * rot(0, 1), p1 = r * rot(tn, 1);
    regions.push_back({Poly{c, c + p0, c + p1}, Poly{c, c - p0, c - p1}});
    reach.push_back(std::max(p0.norm(), p1.norm()));
  }
  Lattice red = lattice_reduce(s.lattice.g1, s.lattice.g2);
  RescaleResult res;
  for (size_t i = 0; i < regions.size(); ++i)
    for (size_t j = i; j < regions.size(); ++j) {
      Vec2 dc = s.centers[j] - s.centers[i];
      double R = reach[i] + reach[j] + 1e-9;
      Mat2 inv = red.basis().inverse();
      Vec2 base = red.coords(-dc);
      int ni = (int)std::ceil(R * inv.row(0).norm()) + 1, nj = (int)std::ceil(R * inv.row(1).norm()) + 1;
      for (int a = -ni; a <= ni; ++a)
        for (int b = -nj; b <= nj; ++b) {
          Vec2 lam = red.point(std::round(base.x()) + a, std::round(base.y()) + b);
          if (i == j && lam.norm() < 1e-12) continue;
          if ((dc + lam).norm() > R) continue;
          for (const auto& P : regions[i])
            for (const auto& Q0 : regions[j]) {
              Poly Q = Q0;
              for (auto& q : Q) q += lam;
              if (polys_overlap(P, Q)) {
                res.collide_i = (int)i;
                res.collide_j = (int)j;
                throw Error(Errc::DeformationBlocked,
                            "sweep regions of slits " + std::to_string(i) + " and " + std::to_string(j) + " collide");
              }
            }
        }
    }
  res.slits = s;
  res.slits.v = perp(unit_dir(xi));
  for (auto& r : res.slits.radii) r *= sec;
  return res;
}

LensConfiguration single_lens(const Lattice& lat, double R, const Vec2& c) { return make_configuration(lat, {{c, R}}); }

}  // namespace flatlens
