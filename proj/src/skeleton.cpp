#include "flatlens/skeleton.hpp"

#include <algorithm>
#include <cmath>

namespace flatlens {

std::vector<SlitFold> PillowFold::slit_sides() const {
  return {SlitFold{Segment(a, b)}, SlitFold{Segment(a + ex(), b + ex())}};
}

std::vector<SlitFold> ChipFold::expand() const {
  if (n < 1) throw Error(Errc::BadChip, "chip multiplicity must be positive");
  Vec2 w = d - c;
  Vec2 top0 = b + a - c;
  bool merged = (top0 - c).norm() <= 1e-12 * std::max(1.0, (b - a).norm());
  std::vector<SlitFold> out;
  for (int k = 0; k < n; ++k) {
    Vec2 s = double(k) * w;
    out.push_back({Segment(a + s, b + s)});
    out.push_back({Segment(c + s, d + s)});
    if (!merged) out.push_back({Segment(top0 + s, top0 + w + s)});
  }
  out.push_back({Segment(a + double(n) * w, b + double(n) * w)});
  return out;
}

std::vector<SlitFold> Skeleton::slit_folds() const {
  std::vector<SlitFold> out;
  for (const auto& f : folds) {
    if (auto* s = std::get_if<SlitFold>(&f)) out.push_back(*s);
    else if (auto* c = std::get_if<ChipFold>(&f)) {
      auto e = c->expand();
      out.insert(out.end(), e.begin(), e.end());
    } else if (auto* p = std::get_if<PillowFold>(&f)) {
      // interior subdivisions of an n-pillow are genuine slit folds
      Vec2 w = p->d - p->c;
      for (int k = 0; k <= p->n; ++k) out.push_back({Segment(p->a + double(k) * w, p->b + double(k) * w)});
    }
  }
  return out;
}

std::vector<PillowFold> Skeleton::pillows() const {
  std::vector<PillowFold> out;
  for (const auto& f : folds)
    if (auto* p = std::get_if<PillowFold>(&f)) out.push_back(*p);
  return out;
}

CrossResult slit_cross(const SlitFold& fold, const Vec2& hit, int dir_sign, double theta) {
  const Segment& s = fold.seg;
  Vec2 e = s.b - s.a;
  double L = e.norm();
  double off = std::abs(cross(e, hit - s.a)) / L;
  double along = (hit - s.a).dot(e) / (L * L);
  double tol = 1e-9 * std::max(1.0, L);
  if (off > tol || along < -1e-9 || along > 1 + 1e-9) throw Error(Errc::NotOnFold, "hit point is not on the fold");
  if (std::abs(cross(unit_dir(theta), e / L)) < 1e-12) throw Error(Errc::ParallelGrazing, "trajectory runs along the fold");
  return {2.0 * s.center() - hit, -dir_sign};
}

CrossResult pillow_edge_cross(const PillowFold& fold, const Vec2& hit, int dir_sign) {
  auto on = [&](const Segment& s) {
    Vec2 e = s.b - s.a;
    double L = e.norm();
    double t = (hit - s.a).dot(e) / (L * L);
    return std::abs(cross(e, hit - s.a)) / L <= 1e-9 * std::max(1.0, L) && t >= -1e-9 && t <= 1 + 1e-9;
  };
  if (on(fold.bottom())) return {hit + fold.shift(), dir_sign};
  if (on(fold.top())) return {hit - fold.shift(), dir_sign};
  throw Error(Errc::NotOnFold, "hit point is not on a translation side");
}

std::vector<SlitFold> pillow_to_chip(const PillowFold& f, double theta) {
  Vec2 ex = f.ex(), ey = f.ey();
  double A = ex.norm(), B = ey.norm();
  Vec2 ux = ex / A, uy = ey / B;
  Mat2 M;
  M.col(0) = ux;
  M.col(1) = uy;
  Vec2 ab = M.inverse() * unit_dir(theta);
  double al = ab.x(), be = ab.y();
  auto vert = [&](double x) { return SlitFold{Segment(f.a + x * ux, f.a + x * ux + ey)}; };
  std::vector<SlitFold> out;
  if (std::abs(al) <= 1e-12 * (std::abs(al) + std::abs(be))) {
    out.push_back(vert(0));
    out.push_back(vert(A));
    return out;
  }
  double m = std::abs(be / al);
  int n = 1;
  if (m > (B / A) * (1 + 1e-12)) n = (int)std::ceil(m * A / B - 1e-9);
  double w = A / n;
  double h = m * w / 2;
  for (int j = 0; j <= n; ++j) out.push_back(vert(j * w));
  if (h <= 1e-12 * B) return out;
  for (int k = 0; k < n; ++k) {
    Vec2 p = f.a + (k * w) * ux;
    if (std::abs(h - B / 2) <= 1e-9 * B) {
      out.push_back({Segment(p + (B / 2) * uy, p + (B / 2) * uy + w * ux)});
    } else {
      out.push_back({Segment(p + h * uy, p + h * uy + w * ux)});
      out.push_back({Segment(p + (B - h) * uy, p + (B - h) * uy + w * ux)});
    }
  }
  return out;
}

namespace {

bool same_lattice(const std::optional<Lattice>& a, const std::optional<Lattice>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return lattice_member(*a, b->g1) && lattice_member(*a, b->g2) && lattice_member(*b, a->g1) && lattice_member(*b, a->g2);
}

// proper or touching intersection of the open connector with a closed segment
bool connector_blocked(const Segment& con, const Segment& s) {
  Vec2 d = con.b - con.a, e = s.b - s.a;
  double L = d.norm();
  double den = cross(d, e);
  Vec2 w = s.a - con.a;
  const double eps = 1e-9;
  if (std::abs(den) <= 1e-12 * L * e.norm()) {
    if (std::abs(cross(w, d)) > eps * std::max(1.0, L)) return false;
    // collinear: overlap of the open connector with the segment
    double t0 = w.dot(d) / (L * L), t1 = (s.b - con.a).dot(d) / (L * L);
    double lo = std::max(std::min(t0, t1), 0.0), hi = std::min(std::max(t0, t1), 1.0);
    return hi - lo > eps;
  }
  double t = cross(w, e) / den;
  double u = cross(w, d) / den;
  return t > eps && t < 1 - eps && u >= -eps && u <= 1 + eps;
}

}  // namespace

RailedCertificate railed_equivalent(const Skeleton& A, const Skeleton& B, double theta,
                                    const std::vector<int>& corr_in) {
  RailedCertificate cert;
  auto fa = A.slit_folds(), fb = B.slit_folds();
  std::vector<int> corr = corr_in;
  if (corr.empty()) {
    if (fa.size() != fb.size()) throw Error(Errc::CorrespondenceMissing, "fold counts differ and no correspondence given");
    for (size_t i = 0; i < fa.size(); ++i) corr.push_back((int)i);
  }
  if (corr.size() != fa.size()) throw Error(Errc::CorrespondenceMissing, "correspondence does not cover every fold");
  if (!same_lattice(A.lattice, B.lattice)) {
    cert.reason = "lattices differ";
    return cert;
  }
  Vec2 u = unit_dir(theta);
  int R = A.lattice ? 3 : 0;
  for (size_t i = 0; i < fa.size(); ++i) {
    if (corr[i] < 0 || corr[i] >= (int)fb.size()) throw Error(Errc::CorrespondenceMissing, "correspondence index out of range");
    const Segment& s = fa[i].seg;
    const Segment& t = fb[corr[i]].seg;
    double best = -1;
    Segment c1, c2;
    for (int sw = 0; sw < 2; ++sw)
      for (int li = -R; li <= R; ++li)
        for (int lj = -R; lj <= R; ++lj) {
          Vec2 lam = A.lattice ? A.lattice->point(li, lj) : Vec2(0, 0);
          Vec2 q1 = (sw ? t.b : t.a) + lam, q2 = (sw ? t.a : t.b) + lam;
          Vec2 v1 = q1 - s.a, v2 = q2 - s.b;
          if (std::abs(cross(v1, u)) > 1e-9 * std::max(1.0, v1.norm())) continue;
          if (std::abs(cross(v2, u)) > 1e-9 * std::max(1.0, v2.norm())) continue;
          double len = v1.norm() + v2.norm();
          if (best < 0 || len < best) {
            best = len;
            c1 = Segment();
            c1.a = s.a;
            c1.b = q1;
            c2.a = s.b;
            c2.b = q2;
          }
        }
    if (best < 0) {
      cert.reason = "fold " + std::to_string(i) + " endpoints are not on common leaves";
      return cert;
    }
    cert.connectors.push_back(c1);
    cert.connectors.push_back(c2);
  }
  // no connector may cross any fold of either skeleton
  std::vector<Segment> all;
  for (auto& f : fa) all.push_back(f.seg);
  for (auto& f : fb) all.push_back(f.seg);
  for (const auto& con : cert.connectors) {
    if ((con.b - con.a).norm() <= 1e-12) continue;
    int r = 0;
    Vec2 ci{0, 0};
    if (A.lattice) {
      Lattice red = lattice_reduce(A.lattice->g1, A.lattice->g2);
      double span = (con.b - con.a).norm();
      for (auto& s : all) span = std::max(span, (s.b - s.a).norm());
      double lmin = red.g1.norm();
      r = (int)std::ceil(3 * span / lmin + 2);
      ci = A.lattice->coords(con.center());
    }
    for (int li = -r; li <= r; ++li)
      for (int lj = -r; lj <= r; ++lj) {
        Vec2 lam = A.lattice ? A.lattice->point(std::round(ci.x()) + li, std::round(ci.y()) + lj) : Vec2(0, 0);
        for (const auto& s : all) {
          Segment st;
          st.a = s.a + lam;
          st.b = s.b + lam;
          if (connector_blocked(con, st)) {
            cert.reason = "connector crosses a fold";
            return cert;
          }
        }
      }
  }
  cert.equivalent = true;
  return cert;
}

Skeleton builtin_skeleton(const std::string& name) {
  auto slit = [](double ax, double ay, double bx, double by) { return Fold{SlitFold{Segment(Vec2(ax, ay), Vec2(bx, by))}}; };
  Skeleton sk;
  if (name == "wollmilchsau") {
    sk.lattice = make_lattice(Vec2(0, 4), Vec2(4, 2));
    sk.folds = {slit(-2, 0, 2, 0), slit(0, 0, 0, 2), slit(0, 0, 0, -2)};
  } else if (name == "x2") {
    sk.lattice = make_lattice(Vec2(0, 8), Vec2(4, 4));
    sk.folds = {slit(-2, 0, 2, 0), slit(2, -1, 2, 1), slit(-4, -4, 8, 2)};
  } else if (name == "x4" || name == "c6_3_1") {
    sk.lattice = make_lattice(Vec2(0, 6), Vec2(6, 3));
    sk.folds = {slit(-2, 0, 2, 0), slit(0, 0, 0, 4), slit(-2, 0, -2, 1), slit(-2, 0.5, 0, 1.5)};
    if (name == "c6_3_1")
      sk.folds.push_back(PillowFold{Vec2(0.5, -2), Vec2(0.5, -1), Vec2(0.5, -2), Vec2(1.5, -2), 1});
  } else {
    throw Error(Errc::UnknownName, "no builtin skeleton named '" + name + "'");
  }
  return sk;
}

namespace {

struct Strand {
  double angle;
  Vec2 center;
};

double wrap2pi(double a) {
  a = std::fmod(a, 2 * M_PI);
  if (a < 0) a += 2 * M_PI;
  return a;
}

class CensusWalker {
 public:
  explicit CensusWalker(const Skeleton& sk) : lat_(sk.lattice) {
    for (auto& f : sk.slit_folds()) segs_.push_back(f.seg);
  }

  bool same_point(const Vec2& p, const Vec2& q) const {
    if (lat_) return lattice_member(*lat_, p - q, nullptr, 1e-9);
    return (p - q).norm() <= 1e-9;
  }

  std::vector<Strand> strands(const Vec2& q) const {
    std::vector<Strand> out;
    for (const auto& s : segs_) {
      std::vector<Vec2> shifts;
      if (lat_) {
        Vec2 c = lat_->coords(q - s.center());
        for (int i = -2; i <= 2; ++i)
          for (int j = -2; j <= 2; ++j) shifts.push_back(lat_->point(std::round(c.x()) + i, std::round(c.y()) + j));
      } else {
        shifts.push_back(Vec2(0, 0));
      }
      for (const auto& lam : shifts) {
        Vec2 a = s.a + lam, b = s.b + lam;
        Vec2 e = b - a;
        double L = e.norm();
        Vec2 w = q - a;
        if (w.norm() <= 1e-9) out.push_back({std::atan2(e.y(), e.x()), 0.5 * (a + b)});
        else if ((q - b).norm() <= 1e-9) out.push_back({std::atan2(-e.y(), -e.x()), 0.5 * (a + b)});
        else if (std::abs(cross(e, w)) <= 1e-9 * L) {
          double t = w.dot(e) / (L * L);
          if (t > 0 && t < 1) {
            out.push_back({std::atan2(e.y(), e.x()), 0.5 * (a + b)});
            out.push_back({std::atan2(-e.y(), -e.x()), 0.5 * (a + b)});
          }
        }
      }
    }
    for (auto& s : out) s.angle = wrap2pi(s.angle);
    return out;
  }

  struct Germ {
    Vec2 p;
    double phi;
  };

  bool same_germ(const Germ& g, const Germ& h) const {
    double d = std::abs(wrap2pi(g.phi - h.phi));
    d = std::min(d, 2 * M_PI - d);
    return d < 1e-7 && same_point(g.p, h.p);
  }

  std::vector<double> run() {
    std::vector<Vec2> pts;
    for (const auto& s : segs_) {
      pts.push_back(s.a);
      pts.push_back(s.b);
      pts.push_back(s.center());
    }
    std::vector<Germ> seen;
    std::vector<double> res;
    for (const auto& p : pts) {
      for (const auto& st0 : strands(p)) {
        Germ g0{p, st0.angle};
        bool dup = false;
        for (const auto& g : seen)
          if (same_germ(g, g0)) {
            dup = true;
            break;
          }
        if (dup) continue;
        Vec2 cur = p;
        double phi = st0.angle, tot = 0;
        std::vector<Germ> germs;
        for (int guard = 0;; ++guard) {
          if (guard > 400) throw Error(Errc::BadInput, "census walk did not close");
          germs.push_back({cur, phi});
          auto ds = strands(cur);
          double bestd = 1e300;
          Strand best{};
          for (const auto& s : ds) {
            double d = wrap2pi(s.angle - phi);
            if (d < 1e-10) d += 2 * M_PI;
            if (d < bestd) {
              bestd = d;
              best = s;
            }
          }
          tot += bestd;
          cur = 2.0 * best.center - cur;
          phi = wrap2pi(best.angle + M_PI);
          if (same_germ(Germ{cur, phi}, germs.front())) break;
        }
        seen.insert(seen.end(), germs.begin(), germs.end());
        double k = std::round(tot / M_PI * 1e6) / 1e6;
        if (std::abs(k - 2) > 1e-6) res.push_back(k);
      }
    }
    std::sort(res.begin(), res.end());
    return res;
  }

 private:
  std::optional<Lattice> lat_;
  std::vector<Segment> segs_;
};

}  // namespace

std::vector<double> singularity_census(const Skeleton& sk) { return CensusWalker(sk).run(); }

}  // namespace flatlens
