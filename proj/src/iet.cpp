#include "flatlens/iet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace flatlens {

int IetWithCocycle::locate(double z) const {
  if (intervals.empty() || z < intervals.front().left || z >= total()) return -1;
  auto it = std::upper_bound(intervals.begin(), intervals.end(), z, [](double v, const IetInterval& iv) { return v < iv.left; });
  return int(it - intervals.begin()) - 1;
}

double IetWithCocycle::map(double z) const {
  int k = locate(z);
  if (k < 0) throw Error(Errc::BadInput, "point outside the section");
  return z + intervals[k].offset;
}

namespace {

long long ext_gcd(long long a, long long b, long long& x, long long& y) {
  if (b == 0) {
    x = a >= 0 ? 1 : -1;
    y = 0;
    return std::abs(a);
  }
  long long x1, y1;
  long long g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

// z and deck for a point on section line k crossed with forward sign
Crossing crossing_at(const SectionFrame& f, const Vec2& pos, int sign, long long k, double path) {
  double t = (f.inv * (pos - f.sec.origin)).x();
  Crossing c;
  c.path = path;
  long long fl;
  double s;
  if (sign == f.plus_sign) {
    fl = (long long)std::floor(t);
    s = t - double(fl);
    c.z = s * f.L;
  } else {
    fl = (long long)std::ceil(t) - 1;
    s = t - double(fl);
    c.z = f.L + (1 - s) * f.L;
    if (c.z >= 2 * f.L) c.z = f.L;
  }
  c.deck = {fl * f.w_coords[0] + k * f.w2_coords[0], fl * f.w_coords[1] + k * f.w2_coords[1]};
  return c;
}

// forward flow from (pos, sign); reports crossings until cb returns false
void walk_from(const Model& m, const SectionFrame& f, Vec2 pos, int sign, double cap, const std::function<bool(const Crossing&)>& cb) {
  const double ru = (f.inv * unit_dir(f.theta)).y();
  FlowState st{pos, sign, f.theta, 0};
  double path = 0;
  for (;;) {
    double c2 = (f.inv * (st.pos - f.sec.origin)).y();
    double r = st.sign * ru;
    long long kn = r > 0 ? (long long)std::floor(c2 + 1e-9) + 1 : (long long)std::ceil(c2 - 1e-9) - 1;
    double tsec = (double(kn) - c2) / r;
    Event ev = m.next_event(st, tsec);
    if (ev.kind == EventKind::None) {
      st.pos += tsec * st.velocity();
      path += tsec;
      if (!cb(crossing_at(f, st.pos, st.sign, kn, path))) return;
    } else if (ev.kind == EventKind::Singular) {
      throw Error(Errc::DiscontinuityHit, "leaf runs into a singular point");
    } else {
      path += ev.t + ev.extra_path;
      st.pos = ev.new_pos;
      st.sign = ev.new_sign;
    }
    if (path > cap) throw Error(Errc::TravelCapExceeded, "no section crossing within the travel cap");
  }
}

double cap_for(const SectionFrame& f, double cells) { return cells * (f.lat.g1.norm() + f.lat.g2.norm()); }

}  // namespace

SectionFrame make_frame(const Lattice& lat, const SectionSpec& sec, double theta) {
  SectionFrame f;
  f.lat = lat;
  f.sec = sec;
  f.theta = theta;
  Cell wc;
  if (!lattice_member(lat, sec.w, &wc)) throw Error(Errc::BadSection, "section vector is not a lattice vector");
  long long x, y;
  if (ext_gcd(wc[0], wc[1], x, y) != 1) throw Error(Errc::BadSection, "section vector is not primitive");
  // p*x + q*y = 1, so (p, q) and (-y, x) span with determinant 1
  f.w_coords = wc;
  f.w2_coords = {-y, x};
  Vec2 w2 = lat.point(f.w2_coords);
  Mat2 B;
  B.col(0) = sec.w;
  B.col(1) = w2;
  f.inv = B.inverse();
  f.L = sec.w.norm();
  double cr = cross(sec.w, unit_dir(theta));
  if (std::abs(cr) < 1e-12 * f.L) throw Error(Errc::BadSection, "section parallel to the flow");
  f.plus_sign = cr > 0 ? 1 : -1;
  return f;
}

SectionPoint section_point(const SectionFrame& f, double z) {
  if (z < 0 || z >= 2 * f.L) throw Error(Errc::BadInput, "z outside the doubled section");
  if (z < f.L) return {f.sec.origin + (z / f.L) * f.sec.w, f.plus_sign};
  double s = 1 - (z - f.L) / f.L;
  return {f.sec.origin + s * f.sec.w, -f.plus_sign};
}

void section_walk(const Model& m, const SectionFrame& f, double z, double cap, const std::function<bool(const Crossing&)>& cb) {
  auto sp = section_point(f, z);
  walk_from(m, f, sp.pos, sp.sign, cap, cb);
}

ReturnData flow_return(const Model& m, const SectionFrame& f, double z, double cap) {
  ReturnData r{};
  section_walk(m, f, z, cap, [&](const Crossing& c) {
    r = {c.z, c.path, c.deck};
    return false;
  });
  return r;
}

SectionSpec default_section(const Skeleton& sk) {
  if (!sk.lattice) throw Error(Errc::BadSection, "skeleton has no lattice");
  Lattice red = lattice_reduce(sk.lattice->g1, sk.lattice->g2);
  SectionSpec s;
  s.w = red.g1;
  s.origin = 0.1234567891 * red.g1 + 0.3141592653 * red.g2;
  return s;
}

IetWithCocycle extract_iet(const Skeleton& sk, double theta, const SectionSpec& sec, const ExtractOptions& opt) {
  if (!sk.lattice) throw Error(Errc::BadSection, "IET extraction needs a torus skeleton");
  SectionFrame f = make_frame(*sk.lattice, sec, theta);
  Model m(sk);
  m.end_tol = opt.end_tol;
  const double cap = cap_for(f, opt.cap_cells);
  const double L = f.L;
  Vec2 u = unit_dir(theta);

  // each fold side with the translation carrying a hit to its exit point
  struct Side {
    Segment seg;
    std::function<Vec2(const Vec2&)> exit;
  };
  std::vector<Side> segs;
  for (auto& s : sk.slit_folds()) segs.push_back({s.seg, [c = s.seg.center()](const Vec2& p) -> Vec2 { return 2.0 * c - p; }});
  for (auto& p : sk.pillows()) {
    Vec2 sh = p.shift();
    segs.push_back({p.bottom(), [sh](const Vec2& q) -> Vec2 { return q + sh; }});
    segs.push_back({p.top(), [sh](const Vec2& q) -> Vec2 { return q - sh; }});
  }

  Mat2 basis;
  basis.col(0) = f.lat.g1;
  basis.col(1) = f.lat.g2;
  const Mat2 basis_inv = basis.inverse();
  std::vector<double> fixed{0.0, L, 2 * L};
  std::vector<Vec2> anchors{sec.origin};  // points whose backward leaves end at breakpoints
  auto on_line = [&](const Vec2& p) {
    double c2 = (f.inv * (p - sec.origin)).y();
    return std::abs(c2 - std::round(c2)) < 1e-9;
  };
  for (const auto& side : segs) {
    const Segment& sg = side.seg;
    for (const Vec2& e : {sg.a, sg.b}) {
      if (on_line(e)) throw Error(Errc::SectionThroughSingularity, "fold endpoint on the section");
      anchors.push_back(e);
      // endpoints sitting on another fold side also emerge from it
      for (const auto& other : segs) {
        if (&other == &side) continue;
        Vec2 k = basis_inv * (other.seg.center() - e);
        long long w = 1 + (long long)std::ceil(other.seg.half_length() * basis_inv.norm());
        for (long long i = (long long)std::floor(k.x()) - w; i <= (long long)std::ceil(k.x()) + w; ++i)
          for (long long j = (long long)std::floor(k.y()) - w; j <= (long long)std::ceil(k.y()) + w; ++j) {
            Vec2 v = double(i) * f.lat.g1 + double(j) * f.lat.g2;
            Vec2 p = e + v;
            const Segment& o = other.seg;
            Vec2 d = o.b - o.a;
            double t = (p - o.a).dot(d) / d.squaredNorm();
            if (t < -1e-12 || t > 1 + 1e-12 || std::abs(cross(d, p - o.a)) / d.norm() > 1e-9) continue;
            anchors.push_back(other.exit(p) - v);
          }
      }
    }
    Vec2 ca = f.inv * (sg.a - sec.origin), cb = f.inv * (sg.b - sec.origin);
    double lo = std::min(ca.y(), cb.y()), hi = std::max(ca.y(), cb.y());
    for (long long k = (long long)std::ceil(lo); k <= (long long)std::floor(hi); ++k) {
      Vec2 X = sg.a + ((double(k) - ca.y()) / (cb.y() - ca.y())) * (sg.b - sg.a);
      for (int sg2 : {1, -1}) fixed.push_back(crossing_at(f, X, sg2, k, 0).z);
      anchors.push_back(X);
      anchors.push_back(side.exit(X));  // leaves entering the fold there come out at X
    }
  }

  auto in_pillow = [&](const Vec2& p) {
    for (const auto& pl : sk.pillows()) {
      Mat2 P;
      P.col(0) = pl.ex();
      P.col(1) = pl.ey();
      Vec2 k = basis_inv * (p - pl.a);
      for (long long i = (long long)std::floor(k.x()) - 2; i <= (long long)std::ceil(k.x()) + 2; ++i)
        for (long long j = (long long)std::floor(k.y()) - 2; j <= (long long)std::ceil(k.y()) + 2; ++j) {
          Vec2 c = P.inverse() * (p - pl.a - double(i) * f.lat.g1 - double(j) * f.lat.g2);
          if (c.x() > 0 && c.x() < 1 && c.y() > 0 && c.y() < 1) return true;
        }
    }
    return false;
  };

  IetWithCocycle iet;
  iet.section = sec;
  iet.L = L;
  // start a little behind each anchor on its own leaf and follow that leaf backwards
  std::vector<double> bp = fixed;
  for (const Vec2& q : anchors) {
    for (int fwd : {1, -1}) {
      try {
        walk_from(m, f, q - (fwd * opt.eps) * u, -fwd, cap, [&](const Crossing& c) {
          // the crossing was made with the backward sign: mirror onto the forward copy
          double z = c.z < L ? L + (L - c.z) : L - (c.z - L);
          bp.push_back(std::clamp(z, 0.0, 2 * L));
          return false;
        });
      } catch (const Error& e) {
        if (e.code != Errc::DiscontinuityHit && e.code != Errc::TravelCapExceeded) throw;
        if (e.code == Errc::TravelCapExceeded && in_pillow(q - (fwd * opt.eps) * u)) continue;  // trapped away from the section
        if (opt.strict) throw Error(Errc::SaddleConnectionDetected, "backward separatrix meets a singular point");
        ++iet.saddle_connections;
      }
    }
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end(), [&](double x, double y) { return y - x < opt.merge_tol; }), bp.end());
  bp.front() = 0;
  if (bp.back() < 2 * L - opt.merge_tol) bp.push_back(2 * L);
  bp.back() = 2 * L;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    double l = bp[i], r = bp[i + 1];
    if (r - l < opt.merge_tol) continue;
    double mid = 0.5 * (l + r);
    ReturnData rd = flow_return(m, f, mid, cap);
    IetInterval iv{l, r - l, rd.z - mid, rd.tau, rd.xi};
    if (!iet.intervals.empty()) {
      auto& pv = iet.intervals.back();
      if (std::abs(pv.offset - iv.offset) < 1e-9 && pv.xi == iv.xi && std::abs(pv.tau - iv.tau) < 1e-9 &&
          std::abs(pv.left + pv.length - l) < 1e-12) {
        pv.length = r - pv.left;
        continue;
      }
    }
    iet.intervals.push_back(iv);
  }
  return iet;
}

PsiTable cocycle(const IetWithCocycle& iet, const std::vector<Cell>& gammas) {
  PsiTable t;
  for (const auto& iv : iet.intervals) {
    std::vector<long long> row;
    for (const auto& g : gammas) row.push_back(g[0] * iv.xi[0] + g[1] * iv.xi[1]);
    t.push_back(row);
  }
  return t;
}

PsiTable standard_cocycle(const IetWithCocycle& iet) { return cocycle(iet, {Cell{1, 0}, Cell{0, 1}}); }

SkewOrbit skew_orbit(const IetWithCocycle& iet, const PsiTable& psi, double x0, int N) {
  std::size_t d = psi.empty() ? 0 : psi.front().size();
  SkewOrbit o;
  double x = x0;
  std::vector<long long> g(d, 0);
  o.x.push_back(x);
  o.g.push_back(g);
  for (int n = 0; n < N; ++n) {
    int k = iet.locate(x);
    if (k < 0) throw Error(Errc::BadInput, "orbit left the section");
    const auto& iv = iet.intervals[k];
    if (x - iv.left < 1e-12 && x != iv.left) throw Error(Errc::DiscontinuityHit, "orbit point on a discontinuity");
    for (std::size_t i = 0; i < d; ++i) g[i] += psi[k][i];
    x += iv.offset;
    if (x < 0 && x > -1e-12) x = 0;
    if (x >= iet.total()) x = std::max(0.0, x - 1e-12);
    o.x.push_back(x);
    o.g.push_back(g);
  }
  return o;
}

DeckCheck deck_consistency(const IetWithCocycle& iet, const Skeleton& sk, double theta, double x0, int N) {
  SectionFrame f = make_frame(*sk.lattice, iet.section, theta);
  Model m(sk);
  SkewOrbit orb = skew_orbit(iet, standard_cocycle(iet), x0, N);
  DeckCheck dc;
  if (N == 0) return dc;
  section_walk(m, f, x0, cap_for(f, 1e3) * (N + 1), [&](const Crossing& c) {
    ++dc.steps;
    const auto& g = orb.g[dc.steps];
    if (c.deck[0] != g[0] || c.deck[1] != g[1]) dc.ok = false;
    dc.max_z_error = std::max(dc.max_z_error, std::abs(c.z - orb.x[dc.steps]));
    return dc.steps < N && dc.ok;
  });
  return dc;
}

std::vector<InducedInterval> induce(const IetWithCocycle& iet, double a, double b) {
  if (!(a < b) || a < 0 || b > iet.total()) throw Error(Errc::BadInput, "bad inducing interval");
  struct Piece {
    double lo, hi, off;
    long long h;
    Cell g;
  };
  std::vector<Piece> work{{a, b, 0, 0, {0, 0}}};
  std::vector<InducedInterval> out;
  const double sliver = 1e-13;
  long long guard = 0;
  while (!work.empty()) {
    Piece p = work.back();
    work.pop_back();
    if (++guard > 5000000) throw Error(Errc::TravelCapExceeded, "inducing did not terminate");
    int k = std::max(0, iet.locate(p.lo));
    for (; k < (int)iet.intervals.size() && iet.intervals[k].left < p.hi; ++k) {
      const auto& iv = iet.intervals[k];
      double sl = std::max(p.lo, iv.left), sr = std::min(p.hi, iv.left + iv.length);
      if (sr - sl <= sliver) continue;
      double off = p.off + iv.offset;
      double il = sl + iv.offset, ir = sr + iv.offset;
      Cell g{p.g[0] + iv.xi[0], p.g[1] + iv.xi[1]};
      long long h = p.h + 1;
      double ml = std::max(il, a), mr = std::min(ir, b);
      if (mr - ml > sliver) out.push_back({ml - off, mr - ml, off, h, g});
      if (std::min(ir, a) - il > sliver) work.push_back({il, std::min(ir, a), off, h, g});
      if (ir - std::max(il, b) > sliver) work.push_back({std::max(il, b), ir, off, h, g});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.left < y.left; });
  return out;
}

TowerReport tower_constancy(const IetWithCocycle& iet, const Skeleton& sk, double theta, double a, double b, int samples) {
  SectionFrame f = make_frame(*sk.lattice, iet.section, theta);
  Model m(sk);
  auto ind = induce(iet, a, b);
  TowerReport rep;
  rep.intervals = (int)ind.size();
  for (const auto& iv : ind) {
    if (iv.length < 1e-7) continue;
    for (int s = 0; s < samples; ++s) {
      double x = iv.left + iv.length * (s + 0.5) / samples;
      long long h = 0;
      Crossing last{};
      try {
        section_walk(m, f, x, cap_for(f, 1e3) * double(iv.h + 1), [&](const Crossing& c) {
          ++h;
          last = c;
          return !(c.z >= a && c.z < b);
        });
      } catch (const Error&) {
        continue;
      }
      ++rep.checked;
      if (h != iv.h || last.deck != iv.xi || std::abs(last.z - (x + iv.offset)) > 1e-8) ++rep.mismatches;
    }
  }
  return rep;
}

std::vector<std::vector<long long>> hermite_rows(std::vector<std::vector<long long>> rows) {
  rows.erase(std::remove_if(rows.begin(), rows.end(), [](const auto& r) { return std::all_of(r.begin(), r.end(), [](long long v) { return v == 0; }); }),
             rows.end());
  if (rows.empty()) return rows;
  std::size_t d = rows.front().size();
  std::size_t r = 0;
  for (std::size_t col = 0; col < d && r < rows.size(); ++col) {
    for (;;) {
      std::size_t piv = rows.size();
      for (std::size_t i = r; i < rows.size(); ++i)
        if (rows[i][col] != 0 && (piv == rows.size() || std::abs(rows[i][col]) < std::abs(rows[piv][col]))) piv = i;
      if (piv == rows.size()) break;
      std::swap(rows[r], rows[piv]);
      bool done = true;
      for (std::size_t i = r + 1; i < rows.size(); ++i) {
        long long q = rows[i][col] / rows[r][col];
        for (std::size_t c = 0; c < d; ++c) rows[i][c] -= q * rows[r][c];
        if (rows[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[r][col] == 0) continue;
    if (rows[r][col] < 0)
      for (auto& v : rows[r]) v = -v;
    for (std::size_t i = 0; i < r; ++i) {
      long long q = rows[i][col] / rows[r][col];
      if (rows[i][col] - q * rows[r][col] < 0) --q;
      for (std::size_t c = 0; c < d; ++c) rows[i][c] -= q * rows[r][c];
    }
    ++r;
  }
  rows.resize(r);
  return rows;
}

RigidityResult rigidity_scan(const IetWithCocycle& iet, const PsiTable& psi, long long h_max, double rigid_tol, double measure_floor,
                             int samples) {
  const std::size_t d = psi.empty() ? 0 : psi.front().size();
  const double T = iet.total();
  std::vector<double> x0(samples), cur(samples);
  std::vector<std::vector<long long>> g(samples, std::vector<long long>(d, 0));
  for (int i = 0; i < samples; ++i) x0[i] = cur[i] = T * (i + 0.5) / samples;
  RigidityResult res;
  std::vector<std::vector<long long>> gens;
  std::vector<char> rigid(samples);
  for (long long h = 1; h <= h_max; ++h) {
    bool all_back = true;
    for (int i = 0; i < samples; ++i) {
      int k = iet.locate(cur[i]);
      if (k < 0) k = cur[i] < 0 ? 0 : (int)iet.intervals.size() - 1;
      for (std::size_t c = 0; c < d; ++c) g[i][c] += psi[k][c];
      cur[i] += iet.intervals[k].offset;
      double dist = std::abs(cur[i] - x0[i]);
      rigid[i] = dist < rigid_tol;
      if (dist > 1e-12) all_back = false;
    }
    if (all_back) throw Error(Errc::ExactPeriodicity, "base returns exactly at time " + std::to_string(h));
    std::map<std::vector<long long>, std::pair<int, double>> groups;
    for (int i = 1; i + 1 < samples; ++i) {
      if (!rigid[i] || !rigid[i - 1] || !rigid[i + 1] || g[i - 1] != g[i] || g[i + 1] != g[i]) continue;
      auto& e = groups[g[i]];
      e.first++;
      e.second = std::max(e.second, std::abs(cur[i] - x0[i]));
    }
    for (auto& [val, e] : groups) {
      double meas = double(e.first) / samples;
      if (meas < measure_floor) continue;
      res.candidates.push_back({val, h, meas, e.second});
      gens.push_back(val);
    }
  }
  res.subgroup_basis = hermite_rows(gens);
  if (res.subgroup_basis.size() == d && d > 0) {
    long long idx = 1;
    for (std::size_t i = 0; i < d; ++i) idx *= res.subgroup_basis[i][i];
    res.subgroup_index = std::abs(idx);
  }
  return res;
}

std::pair<IetWithCocycle, PsiTable> golden_rotation_control() {
  const double a = 0.5 * (std::sqrt(5.0) - 1);
  IetWithCocycle iet;
  iet.L = 0.5;
  iet.intervals = {{0, 1 - a, a, 1, {1, 0}}, {1 - a, a - 0.5, -(1 - a), 1, {1, 0}}, {0.5, 0.5, -(1 - a), 1, {-1, 0}}};
  PsiTable psi{{1}, {1}, {-1}};
  return {iet, psi};
}

}  // namespace flatlens
