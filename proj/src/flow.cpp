#include "flatlens/flow.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "flatlens/parallel.hpp"

namespace flatlens {

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::FoldCross: return "fold-cross";
    case EventKind::LensTransit: return "lens-transit";
    case EventKind::PillowJump: return "pillow-jump";
    case EventKind::Singular: return "singular";
    case EventKind::None: return "none";
  }
  return "?";
}

namespace {
constexpr double kTMin = 1e-9;
constexpr double kFootprintPad = 1e-7;
}  // namespace

Model::Model(const Skeleton& sk) : lattice_(sk.lattice) {
  for (auto& f : sk.slit_folds()) slits_.push_back(f.seg);
  pillows_ = sk.pillows();
  build_index();
}

Model::Model(const LensConfiguration& cfg) : lattice_(cfg.lattice), lenses_(cfg.lenses) { build_index(); }

void Model::build_index() {
  if (!lattice_) return;
  binv_ = lattice_->basis().inverse();
  auto add_box = [&](int e, Vec2 lo, Vec2 hi) {
    lo.array() -= kFootprintPad;
    hi.array() += kFootprintPad;
    for (long long i = (long long)std::floor(lo.x()); i <= (long long)std::floor(hi.x()); ++i)
      for (long long j = (long long)std::floor(lo.y()); j <= (long long)std::floor(hi.y()); ++j) index_.push_back({e, i, j});
  };
  auto seg_box = [&](int e, const Vec2& a, const Vec2& b) {
    Vec2 ua = binv_ * a, ub = binv_ * b;
    add_box(e, ua.cwiseMin(ub), ua.cwiseMax(ub));
  };
  int S = slit_count(), P = pillow_count();
  for (int k = 0; k < S; ++k) seg_box(k, slits_[k].a, slits_[k].b);
  for (int p = 0; p < P; ++p) {
    auto bt = pillows_[p].bottom(), tp = pillows_[p].top();
    seg_box(S + 2 * p, bt.a, bt.b);
    seg_box(S + 2 * p + 1, tp.a, tp.b);
  }
  for (int k = 0; k < lens_count(); ++k) {
    Vec2 c = binv_ * lenses_[k].center;
    Vec2 ext(lenses_[k].radius * binv_.row(0).norm(), lenses_[k].radius * binv_.row(1).norm());
    add_box(S + 2 * P + k, c - ext, c + ext);
  }
}

bool Model::inside_lens(const Vec2& p) const {
  for (const auto& l : lenses_) {
    double d = lattice_ ? lattice_min_dist(*lattice_, p - l.center, false) : (p - l.center).norm();
    if (d < l.radius) return true;
  }
  return false;
}

Cell Model::deck_of(const Vec2& p) const {
  if (lattice_) return lattice_->cell_of(p);
  return {(long long)std::floor(p.x()), (long long)std::floor(p.y())};
}

void Model::test_element(int e, const Vec2& lam, const Cell& sc, const Vec2& o, const Vec2& d, Event& best) const {
  const int S = slit_count(), P = pillow_count();
  if (e < S + 2 * P) {
    Vec2 a, b;
    bool pillow = e >= S;
    if (!pillow) {
      a = slits_[e].a + lam;
      b = slits_[e].b + lam;
    } else {
      const auto& pf = pillows_[(e - S) / 2];
      Segment sg = ((e - S) % 2 == 0) ? pf.bottom() : pf.top();
      a = sg.a + lam;
      b = sg.b + lam;
    }
    Vec2 ed = b - a;
    double L = ed.norm();
    double den = cross(d, ed);
    Vec2 w = a - o;
    if (std::abs(den) <= 1e-13 * L) {
      if (std::abs(cross(w, d)) > 1e-9 * std::max(1.0, L)) return;
      double ta = w.dot(d), tb = (b - o).dot(d);
      double t = std::min(ta, tb);
      if (std::max(ta, tb) <= kTMin) return;
      t = std::max(t, kTMin);
      if (t < best.t) {
        best = Event{};
        best.kind = EventKind::Singular;
        best.t = t;
        best.hit = o + t * d;
        best.element = e;
        best.shift = sc;
      }
      return;
    }
    double t = cross(w, ed) / den;
    if (t <= kTMin || t >= best.t) return;
    double s = cross(w, d) / den;
    double tol = end_tol / L;
    if (s < -tol || s > 1 + tol) return;
    Event ev;
    ev.t = t;
    ev.hit = o + t * d;
    ev.element = e;
    ev.shift = sc;
    if (s <= tol || s >= 1 - tol) {
      ev.kind = EventKind::Singular;
    } else if (!pillow) {
      ev.kind = EventKind::FoldCross;
      ev.new_pos = (a + b) - ev.hit;
      ev.new_sign = -1;
    } else {
      const auto& pf = pillows_[(e - S) / 2];
      ev.kind = EventKind::PillowJump;
      ev.new_pos = ev.hit + (((e - S) % 2 == 0) ? 1.0 : -1.0) * pf.shift();
      ev.new_sign = 1;
    }
    best = ev;
    return;
  }
  const auto& lens = lenses_[e - S - 2 * P];
  Vec2 c = lens.center + lam;
  double R = lens.radius;
  Vec2 oc = o - c;
  double bb = oc.dot(d);
  double cc = oc.squaredNorm() - R * R;
  double disc = bb * bb - cc;
  if (disc <= 0) return;
  double t1 = -bb - std::sqrt(disc);
  if (t1 <= kTMin || t1 >= best.t) return;
  double s = std::abs(cross(oc, d));
  if (s >= R * (1 - kGrazeTol)) return;
  Event ev;
  ev.kind = EventKind::LensTransit;
  ev.t = t1;
  ev.hit = o + t1 * d;
  ev.element = e;
  ev.shift = sc;
  auto tr = lens_retroreflect(EatonLens{c, R}, ev.hit, d);
  ev.new_pos = tr.exit;
  ev.new_sign = -1;
  ev.extra_path = tr.transit_time;
  best = ev;
}

Event Model::next_event(const FlowState& st, double horizon) const {
  Vec2 d = st.velocity();
  Event best;
  auto finish = [&](Event ev) {
    if (ev.kind != EventKind::None) ev.new_sign *= st.sign;
    return ev;
  };
  if (!lattice_) {
    for (int e = 0; e < element_count(); ++e) test_element(e, Vec2(0, 0), Cell{0, 0}, st.pos, d, best);
    if (best.kind == EventKind::None && std::isinf(horizon)) throw Error(Errc::TravelCapExceeded, "free flight never meets a fold");
    if (best.t > horizon) return Event{};
    return finish(best);
  }
  Vec2 u = binv_ * st.pos, du = binv_ * d;
  long long ci = (long long)std::floor(u.x()), cj = (long long)std::floor(u.y());
  int sx = du.x() > 0 ? 1 : -1, sy = du.y() > 0 ? 1 : -1;
  const double inf = std::numeric_limits<double>::infinity();
  double tmx = du.x() != 0 ? ((du.x() > 0 ? double(ci + 1) : double(ci)) - u.x()) / du.x() : inf;
  double tmy = du.y() != 0 ? ((du.y() > 0 ? double(cj + 1) : double(cj)) - u.y()) / du.y() : inf;
  double tdx = du.x() != 0 ? std::abs(1.0 / du.x()) : inf, tdy = du.y() != 0 ? std::abs(1.0 / du.y()) : inf;
  double cap = std::isinf(horizon) ? travel_cap : horizon;
  for (;;) {
    for (const auto& en : index_) {
      Cell sc{ci - en.fi, cj - en.fj};
      test_element(en.elem, lattice_->point(sc), sc, st.pos, d, best);
    }
    double texit = std::min(tmx, tmy);
    if (best.t <= texit + 1e-12) break;
    if (texit > cap) {
      if (std::isinf(horizon)) throw Error(Errc::TravelCapExceeded, "free flight exceeded the travel cap");
      break;
    }
    if (tmx < tmy) {
      ci += sx;
      tmx += tdx;
    } else {
      cj += sy;
      tmy += tdy;
    }
  }
  if (best.t > horizon) return Event{};
  return finish(best);
}

namespace {
struct CellHash {
  std::size_t operator()(const Cell& c) const { return std::hash<long long>()(c[0] * 1000003LL ^ c[1]); }
};
}  // namespace

Trajectory trace(const FlowState& start, const Model& model, double max_path, const TraceOptions& opt) {
  if (!(max_path > 0)) throw Error(Errc::BadInput, "max_path must be positive");
  Trajectory tr;
  tr.start = start.pos;
  FlowState st = start;
  st.path_length = 0;
  std::unordered_set<Cell, CellHash> cells;
  auto mark = [&](const Vec2& p) {
    if (opt.count_cells) cells.insert(model.deck_of(p));
  };
  mark(st.pos);
  const int K = std::max(0, opt.checkpoints);
  int next_k = 1;
  auto ck = [&](int k) { return max_path * double(k) / double(K); };
  auto sample = [&](double L, const Vec2& p) {
    tr.sample_path.push_back(L);
    tr.displacement_samples.push_back(p - tr.start);
    tr.deck_samples.push_back(model.deck_of(p));
    mark(p);
  };
  tr.terminated = "max_path";
  for (;;) {
    double remaining = max_path - st.path_length;
    if (remaining <= 0) break;
    if ((std::size_t)tr.event_count >= opt.max_events) {
      tr.terminated = "max_events";
      break;
    }
    Event ev;
    try {
      ev = model.next_event(st, remaining);
    } catch (const Error& e) {
      if (e.code != Errc::TravelCapExceeded) throw;
      ev = Event{};
    }
    double flight = ev.kind == EventKind::None ? remaining : ev.t;
    Vec2 v = st.velocity();
    while (next_k <= K && ck(next_k) <= st.path_length + flight + 1e-12) {
      sample(ck(next_k), st.pos + (ck(next_k) - st.path_length) * v);
      ++next_k;
    }
    if (opt.on_flight) opt.on_flight(st.pos, st.pos + flight * v, st.sign);
    if (ev.kind == EventKind::None) {
      st.pos += flight * v;
      st.path_length = max_path;
      break;
    }
    st.path_length += ev.t;
    ++tr.event_count;
    if (opt.record_events) tr.events.push_back({st.path_length, ev.kind, ev.hit, ev.element, ev.shift});
    if (ev.kind == EventKind::Singular) {
      st.pos = ev.hit;
      tr.terminated = "singular";
      break;
    }
    mark(ev.hit);
    st.path_length += ev.extra_path;
    st.pos = ev.new_pos;
    st.sign = ev.new_sign;
    while (next_k <= K && ck(next_k) <= st.path_length + 1e-12) {
      sample(ck(next_k), st.pos);
      ++next_k;
    }
  }
  tr.final_state = st;
  tr.cell_count = (long long)std::max<std::size_t>(1, cells.size());
  return tr;
}

CompareReport compare_models(const LensConfiguration& lenses, const Skeleton& slits, double theta, int n_rays, double path,
                             unsigned long long seed) {
  Model lm(lenses), sm(slits);
  double rmax = 0;
  for (auto& l : lenses.lenses) rmax = std::max(rmax, l.radius);
  struct Res {
    int status = 0;  // 0 matched, 1 mismatch, 2 singular
  };
  std::vector<Res> res(n_rays);
  parallel_for(n_rays, [&](std::size_t i) {
    std::mt19937_64 rng(seed * 1000003ULL + i);
    std::uniform_real_distribution<double> U(0, 1);
    Vec2 p;
    do {
      p = lenses.lattice.point(U(rng), U(rng));
    } while (lm.inside_lens(p));
    FlowState st{p, 1, theta, 0};
    TraceOptions so;
    so.checkpoints = 0;
    so.count_cells = false;
    Trajectory ts = trace(st, sm, path, so);
    if (ts.terminated == "singular") {
      res[i].status = 2;
      return;
    }
    TraceOptions lo = so;
    lo.max_events = ts.events.size();
    Trajectory tl = trace(st, lm, path + M_PI * rmax * double(ts.events.size() + 1), lo);
    if (tl.terminated == "singular") {
      res[i].status = 2;
      return;
    }
    if (tl.events.size() < ts.events.size()) {
      res[i].status = 1;
      return;
    }
    for (std::size_t k = 0; k < ts.events.size(); ++k)
      if (ts.events[k].element != tl.events[k].element || ts.events[k].shift != tl.events[k].shift) {
        res[i].status = 1;
        return;
      }
  });
  CompareReport rep;
  rep.rays = n_rays;
  for (auto& r : res) {
    if (r.status == 2) {
      ++rep.singular;
      continue;
    }
    ++rep.compared;
    if (r.status == 0) ++rep.matched;
  }
  rep.match_fraction = rep.compared ? double(rep.matched) / rep.compared : 1.0;
  return rep;
}

std::pair<double, Vec2> min_width(const std::vector<Vec2>& pts_in) {
  std::vector<Vec2> pts = pts_in;
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
  pts.erase(std::unique(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) { return (a - b).norm() < 1e-15; }), pts.end());
  if (pts.size() == 1) return {0.0, Vec2(0, 1)};
  std::vector<Vec2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  if (h.size() <= 2) {
    Vec2 e = pts.back() - pts.front();
    return {0.0, perp(e).normalized()};
  }
  double best = std::numeric_limits<double>::infinity();
  Vec2 bn(0, 1);
  for (std::size_t i = 0; i < h.size(); ++i) {
    Vec2 a = h[i], e = h[(i + 1) % h.size()] - a;
    double L = e.norm();
    if (L < 1e-15) continue;
    double w = 0;
    for (const auto& p : h) w = std::max(w, std::abs(cross(e, p - a)) / L);
    if (w < best) {
      best = w;
      bn = perp(e / L);
    }
  }
  return {best, bn};
}

double growth_exponent(const std::vector<double>& L, const std::vector<Vec2>& d, const Vec2& u) {
  if (L.empty()) return 0;
  double lmax = L.back();
  double m = 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < L.size(); ++k) {
    m = std::max(m, std::abs(d[k].dot(u)));
    if (L[k] < lmax / 100 || m <= 0 || L[k] <= 0) continue;
    double x = std::log(L[k]), y = std::log(m);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++n;
  }
  if (n < 3) return 0;
  double den = n * sxx - sx * sx;
  return den > 0 ? (n * sxy - sx * sy) / den : 0;
}

TrapStats trap_stats(const Trajectory& traj) {
  if (traj.displacement_samples.size() < 10) throw Error(Errc::TooFewSamples, "need at least 10 displacement samples");
  std::vector<Vec2> pts = traj.displacement_samples;
  pts.push_back(Vec2(0, 0));
  auto [w, n] = min_width(pts);
  TrapStats ts;
  ts.min_width = w;
  ts.trap_direction = n;
  ts.cell_count = traj.cell_count;
  ts.growth_exponent = growth_exponent(traj.sample_path, traj.displacement_samples, n);
  return ts;
}

}  // namespace flatlens
