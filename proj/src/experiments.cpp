#include "flatlens/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "flatlens/parallel.hpp"

namespace flatlens {

std::vector<double> sample_thetas(int n, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, M_PI);
  std::vector<double> t(n);
  for (auto& x : t) x = U(rng);
  return t;
}

Vec2 random_start(const Model& m, const Lattice& lat, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 100000; ++k) {
    Vec2 p = lat.point(U(rng), U(rng));
    if (!m.inside_lens(p)) return p;
  }
  throw Error(Errc::BadInput, "no start point outside the lenses");
}

std::vector<DirectionRecord> direction_sweep(const ModelFactory& make, const Lattice& start_cell, const SweepConfig& cfg) {
  auto thetas = sample_thetas(cfg.thetas, cfg.seed);
  std::vector<DirectionRecord> out(thetas.size());
  parallel_for(thetas.size(), [&](std::size_t i) {
    DirectionRecord& r = out[i];
    r.theta = thetas[i];
    try {
      auto m = make(thetas[i]);
      std::mt19937_64 rng(cfg.seed * 1000003ULL + i);
      FlowState st{random_start(*m, start_cell, rng), 1, thetas[i], 0};
      TraceOptions opt;
      opt.checkpoints = cfg.checkpoints;
      opt.record_events = false;
      Trajectory tr = trace(st, *m, cfg.path, opt);
      r.events = tr.event_count;
      r.terminated = tr.terminated;
      r.stats = trap_stats(tr);
      r.ok = true;
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  });
  return out;
}

json record_json(const DirectionRecord& r) {
  json j{{"theta", r.theta}, {"ok", r.ok}};
  if (!r.ok) {
    j["error"] = r.error;
    return j;
  }
  j["growth_exponent"] = r.stats.growth_exponent;
  j["min_width"] = r.stats.min_width;
  j["trap_direction"] = to_json(r.stats.trap_direction);
  j["cell_count"] = r.stats.cell_count;
  j["events"] = r.events;
  j["terminated"] = r.terminated;
  return j;
}

json trapping_summary(const std::string& label, const std::vector<DirectionRecord>& recs, double cutoff, double required) {
  json j{{"experiment", "trapping"}, {"model", label}, {"cutoff", cutoff}, {"required_fraction", required}};
  int good = 0, valid = 0;
  j["directions"] = json::array();
  for (const auto& r : recs) {
    j["directions"].push_back(record_json(r));
    if (!r.ok) continue;
    ++valid;
    if (r.stats.growth_exponent <= cutoff) ++good;
  }
  double frac = recs.empty() ? 0 : double(good) / double(recs.size());
  j["valid"] = valid;
  j["bounded"] = good;
  j["fraction"] = frac;
  j["pass"] = frac >= required;
  return j;
}

json ergodic_summary(const std::string& label, const std::vector<DirectionRecord>& recs, double cutoff, long long min_cells,
                     double required) {
  json j{{"experiment", "ergodic"}, {"model", label}, {"cutoff", cutoff}, {"min_cells", min_cells}, {"required_fraction", required}};
  int good = 0, valid = 0;
  j["directions"] = json::array();
  for (const auto& r : recs) {
    j["directions"].push_back(record_json(r));
    if (!r.ok) continue;
    ++valid;
    if (r.stats.growth_exponent >= cutoff || r.stats.cell_count >= min_cells) ++good;
  }
  double frac = recs.empty() ? 0 : double(good) / double(recs.size());
  j["valid"] = valid;
  j["spreading"] = good;
  j["fraction"] = frac;
  j["pass"] = frac >= required;
  return j;
}

SlitConfiguration separated_two_slit() {
  SlitConfiguration s;
  s.lattice = make_lattice(Vec2(1, 0), Vec2(0, 1));
  s.v = Vec2(1, 0);
  s.centers = {Vec2(0.2, 0.25), Vec2(0.6, 0.75)};
  s.radii = {0.1, 0.1};
  return s;
}

LensConfiguration trapping_single_lens() { return single_lens(make_lattice(Vec2(0, 4), Vec2(4, 2)), 1.0); }

std::string model_name_list() { return "single-lens, two-slit, gamma-w, wollmilchsau, x2, x4, c6_3_1"; }

std::shared_ptr<const Model> builtin_model(const std::string& name, double theta, Lattice* lat) {
  if (name == "single-lens") {
    auto c = trapping_single_lens();
    if (lat) *lat = c.lattice;
    return std::make_shared<Model>(c);
  }
  if (name == "two-slit") {
    auto s = separated_two_slit();
    if (lat) *lat = s.lattice;
    return std::make_shared<Model>(to_skeleton(s));
  }
  if (name == "gamma-w") {
    auto c = gamma_w(theta);
    if (lat) *lat = c.lattice;
    return std::make_shared<Model>(c);
  }
  Skeleton sk = builtin_skeleton(name);
  if (lat) *lat = *sk.lattice;
  return std::make_shared<Model>(sk);
}

json run_trapping(const std::string& builtin, const SweepConfig& cfg, double cutoff, double required) {
  Lattice lat;
  builtin_model(builtin, 0.1, &lat);
  auto recs = direction_sweep([&](double th) { return builtin_model(builtin, th, nullptr); }, lat, cfg);
  json j = trapping_summary(builtin, recs, cutoff, required);
  j["seed"] = cfg.seed;
  j["path"] = cfg.path;
  return j;
}

json run_ergodic(const SweepConfig& cfg, double cutoff, long long min_cells, double required) {
  Lattice lat = gamma_w(0.1).lattice;
  auto recs = direction_sweep([&](double th) { return std::make_shared<Model>(gamma_w(th)); }, lat, cfg);
  json j = ergodic_summary("gamma-w", recs, cutoff, min_cells, required);
  j["seed"] = cfg.seed;
  j["path"] = cfg.path;
  return j;
}

std::vector<double> compare_thetas(int n) {
  std::vector<double> t;
  for (int i = 0; i < n; ++i) t.push_back(M_PI * (i + 0.5) / n);
  return t;
}

json run_compare(const std::vector<double>& thetas, int rays, double path, unsigned long long seed, double floor) {
  json j{{"experiment", "compare"}, {"rays", rays}, {"path", path}, {"seed", seed}, {"floor", floor}};
  j["directions"] = json::array();
  bool pass = true;
  double worst = 1;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    double th = thetas[i];
    auto cfg = gamma_w(th);
    auto sk = to_skeleton(lens_to_slits(cfg, th));
    auto rep = compare_models(cfg, sk, th, rays, path, seed + i);
    j["directions"].push_back({{"theta", th}, {"compared", rep.compared}, {"matched", rep.matched}, {"singular", rep.singular},
                               {"match_fraction", rep.match_fraction}});
    worst = std::min(worst, rep.match_fraction);
    if (rep.match_fraction < floor) pass = false;
  }
  j["worst"] = worst;
  j["pass"] = pass;
  return j;
}

std::vector<ItineraryItem> itinerary(const Model& m, const FlowState& st, double path, double period, double off,
                                     std::size_t max_items, bool* singular) {
  std::vector<ItineraryItem> out;
  TraceOptions opt;
  opt.checkpoints = 0;
  opt.record_events = false;
  opt.count_cells = false;
  opt.on_flight = [&](const Vec2& a, const Vec2& b, int) {
    struct Hit {
      double t;
      ItineraryItem it;
    };
    std::vector<Hit> hs;
    for (int ax = 0; ax < 2; ++ax) {
      double pa = a[ax], pb = b[ax];
      if (pa == pb) continue;
      double lo = std::min(pa, pb), hi = std::max(pa, pb);
      for (long long k = (long long)std::ceil((lo - off) / period); off + period * double(k) <= hi; ++k) {
        double x = off + period * double(k);
        if (x <= lo && pa < pb) continue;
        if (x >= hi && pa > pb) continue;
        hs.push_back({(x - pa) / (pb - pa), {ax, k, pb > pa ? 1 : -1}});
      }
    }
    std::sort(hs.begin(), hs.end(), [](const Hit& x, const Hit& y) { return x.t < y.t; });
    for (auto& h : hs) out.push_back(h.it);
  };
  opt.max_events = std::numeric_limits<std::size_t>::max();
  Trajectory tr = trace(st, m, path, opt);
  if (singular) *singular = tr.terminated == "singular";
  if (out.size() > max_items) out.resize(max_items);
  return out;
}

Skeleton unit_pillow_skeleton() {
  Skeleton sk;
  sk.lattice = make_lattice(Vec2(3, 0), Vec2(0, 3));
  sk.folds.push_back(PillowFold{Vec2(0, 0), Vec2(0, 1), Vec2(0, 0), Vec2(1, 0), 1});
  return sk;
}

Skeleton unit_chip_skeleton(double theta) {
  Skeleton pill = unit_pillow_skeleton();
  Skeleton sk;
  sk.lattice = pill.lattice;
  for (auto& f : pillow_to_chip(std::get<PillowFold>(pill.folds[0]), theta)) sk.folds.push_back(f);
  return sk;
}

std::vector<double> pillow_chip_thetas() {
  // slopes covering n = 1..4 with the exact branch boundaries tan = 1, 2, 3
  std::vector<double> t;
  for (double s : {0.1, 0.5, 0.9, 1.0, 1.5, 2.0, 2.5, 3.0, 3.7})
    t.push_back(std::atan(s)), t.push_back(M_PI - std::atan(s));
  t.push_back(M_PI / 2);
  t.push_back(M_PI / 2 + 0.05);
  return t;
}

json run_pillow_chip(const std::vector<double>& thetas, int rays, double path, unsigned long long seed, double floor) {
  json j{{"experiment", "pillow-chip"}, {"rays", rays}, {"path", path}, {"seed", seed}, {"floor", floor}};
  j["directions"] = json::array();
  bool pass = true;
  double worst = 1;
  Skeleton pill = unit_pillow_skeleton();
  Model pm(pill);
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    double th = thetas[i];
    Model cm(unit_chip_skeleton(th));
    std::vector<int> status(rays);
    parallel_for(rays, [&](std::size_t r) {
      std::mt19937_64 rng((seed + i) * 1000003ULL + r);
      std::uniform_real_distribution<double> U(0.0, 3.0);
      Vec2 p;
      do p = Vec2(U(rng), U(rng));
      while (p.x() <= 1 && p.y() <= 1);
      FlowState st{p, 1, th, 0};
      bool s1 = false, s2 = false;
      auto a = itinerary(pm, st, path, 3.0, 2.0, std::numeric_limits<std::size_t>::max(), &s1);
      auto b = itinerary(cm, st, 3 * path, 3.0, 2.0, a.size(), &s2);
      if (s1 || s2) {
        status[r] = 2;
        return;
      }
      status[r] = (a == b) ? 0 : 1;
    });
    int matched = 0, compared = 0, singular = 0;
    for (int s : status) {
      if (s == 2) {
        ++singular;
        continue;
      }
      ++compared;
      if (s == 0) ++matched;
    }
    double frac = compared ? double(matched) / compared : 1.0;
    j["directions"].push_back({{"theta", th}, {"compared", compared}, {"matched", matched}, {"singular", singular}, {"match_fraction", frac}});
    worst = std::min(worst, frac);
    if (frac < floor) pass = false;
  }
  j["worst"] = worst;
  j["pass"] = pass;
  return j;
}

}  // namespace flatlens
