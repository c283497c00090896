#include "flatlens/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace flatlens {

json to_json(const Vec2& v) { return json::array({v.x(), v.y()}); }

Vec2 vec_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(Errc::BadInput, "expected a pair of numbers");
  return Vec2(j[0].get<double>(), j[1].get<double>());
}

namespace {
json lattice_json(const Lattice& l) { return json::array({to_json(l.g1), to_json(l.g2)}); }
Lattice lattice_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(Errc::BadInput, "lattice needs two vectors");
  return make_lattice(vec_from_json(j[0]), vec_from_json(j[1]));
}
}  // namespace

json skeleton_to_json(const Skeleton& sk) {
  json j;
  j["lattice"] = sk.lattice ? lattice_json(*sk.lattice) : json(nullptr);
  j["folds"] = json::array();
  for (const auto& f : sk.folds) {
    if (auto s = std::get_if<SlitFold>(&f)) {
      j["folds"].push_back({{"type", "slit"}, {"a", to_json(s->seg.a)}, {"b", to_json(s->seg.b)}});
    } else if (auto p = std::get_if<PillowFold>(&f)) {
      j["folds"].push_back({{"type", "pillow"}, {"a", to_json(p->a)}, {"b", to_json(p->b)}, {"c", to_json(p->c)}, {"d", to_json(p->d)}, {"n", p->n}});
    } else if (auto c = std::get_if<ChipFold>(&f)) {
      j["folds"].push_back({{"type", "chip"}, {"a", to_json(c->a)}, {"b", to_json(c->b)}, {"c", to_json(c->c)}, {"d", to_json(c->d)}, {"n", c->n}});
    }
  }
  return j;
}

Skeleton skeleton_from_json(const json& j) {
  Skeleton sk;
  if (j.contains("lattice") && !j["lattice"].is_null()) sk.lattice = lattice_from(j["lattice"]);
  if (!j.contains("folds")) throw Error(Errc::BadInput, "skeleton needs a folds list");
  for (const auto& f : j["folds"]) {
    std::string t = f.at("type").get<std::string>();
    if (t == "slit") {
      sk.folds.push_back(SlitFold{Segment(vec_from_json(f.at("a")), vec_from_json(f.at("b")))});
    } else if (t == "pillow" || t == "chip") {
      Vec2 a = vec_from_json(f.at("a")), b = vec_from_json(f.at("b")), c = vec_from_json(f.at("c")), d = vec_from_json(f.at("d"));
      int n = f.value("n", 1);
      if (n < 1) throw Error(Errc::BadInput, "n must be positive");
      if (t == "pillow")
        sk.folds.push_back(PillowFold{a, b, c, d, n});
      else
        sk.folds.push_back(ChipFold{a, b, c, d, n});
    } else {
      throw Error(Errc::BadInput, "unknown fold type " + t);
    }
  }
  return sk;
}

json lenses_to_json(const LensConfiguration& cfg) {
  json j;
  j["lattice"] = lattice_json(cfg.lattice);
  j["lenses"] = json::array();
  for (const auto& l : cfg.lenses) j["lenses"].push_back({{"c", to_json(l.center)}, {"r", l.radius}});
  return j;
}

LensConfiguration lenses_from_json(const json& j) {
  if (!j.contains("lattice")) throw Error(Errc::BadInput, "lens configuration needs a lattice");
  std::vector<EatonLens> ls;
  for (const auto& l : j.at("lenses")) ls.push_back({vec_from_json(l.at("c")), l.at("r").get<double>()});
  return make_configuration(lattice_from(j["lattice"]), ls);
}

json slits_to_json(const SlitConfiguration& s) {
  json j;
  j["lattice"] = lattice_json(s.lattice);
  j["v"] = to_json(s.v);
  j["centers"] = json::array();
  for (const auto& c : s.centers) j["centers"].push_back(to_json(c));
  j["radii"] = s.radii;
  return j;
}

SlitConfiguration slits_from_json(const json& j) {
  SlitConfiguration s;
  s.lattice = lattice_from(j.at("lattice"));
  s.v = vec_from_json(j.at("v")).normalized();
  for (const auto& c : j.at("centers")) s.centers.push_back(vec_from_json(c));
  s.radii = j.at("radii").get<std::vector<double>>();
  if (s.radii.size() != s.centers.size()) throw Error(Errc::BadInput, "centers and radii differ in length");
  return s;
}

json iet_to_json(const IetWithCocycle& iet) {
  json j;
  j["lengths"] = json::array();
  j["images"] = json::array();
  j["tau"] = json::array();
  j["xi"] = json::array();
  for (const auto& iv : iet.intervals) {
    j["lengths"].push_back(iv.length);
    j["images"].push_back(iv.image());
    j["tau"].push_back(iv.tau);
    j["xi"].push_back(json::array({iv.xi[0], iv.xi[1]}));
  }
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::BadInput, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::BadInput, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace flatlens

namespace flatlens {

std::string trajectory_csv(const Trajectory& tr, const Model& m) {
  struct Row {
    double L;
    Vec2 p;
    std::string kind;
  };
  std::vector<Row> rows;
  rows.push_back({0, tr.start, "start"});
  for (const auto& e : tr.events) rows.push_back({e.path_length, e.location, event_kind_name(e.kind)});
  for (std::size_t k = 0; k < tr.sample_path.size(); ++k)
    rows.push_back({tr.sample_path[k], tr.start + tr.displacement_samples[k], "checkpoint"});
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.L < b.L; });
  std::ostringstream os;
  os.precision(17);
  os << "path_length,x,y,deck_i,deck_j,event_kind\n";
  for (const auto& r : rows) {
    Cell c = m.deck_of(r.p);
    os << r.L << ',' << r.p.x() << ',' << r.p.y() << ',' << c[0] << ',' << c[1] << ',' << r.kind << '\n';
  }
  return os.str();
}

std::string trajectory_svg(const Trajectory& tr, const Model& m) {
  std::vector<Vec2> pts{tr.start};
  for (const auto& d : tr.displacement_samples) pts.push_back(tr.start + d);
  Vec2 lo = pts[0], hi = pts[0];
  for (const auto& p : pts) lo = lo.cwiseMin(p), hi = hi.cwiseMax(p);
  double pad = 0.05 * std::max({hi.x() - lo.x(), hi.y() - lo.y(), 1.0});
  lo.array() -= pad;
  hi.array() += pad;
  double W = hi.x() - lo.x(), H = hi.y() - lo.y();
  double stroke = std::max(W, H) / 800;
  std::ostringstream os;
  os.precision(10);
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << lo.x() << ' ' << -hi.y() << ' ' << W << ' ' << H
     << "\" width=\"800\" height=\"" << int(800 * H / W) << "\">\n";
  os << "<g transform=\"scale(1,-1)\">\n";
  // overlay copies whose cells meet the box, capped
  std::vector<Vec2> shifts{Vec2(0, 0)};
  if (m.lattice()) {
    shifts.clear();
    Mat2 inv = m.lattice()->basis().inverse();
    Vec2 c[4] = {inv * lo, inv * hi, inv * Vec2(lo.x(), hi.y()), inv * Vec2(hi.x(), lo.y())};
    Vec2 a = c[0], b = c[0];
    for (auto& v : c) a = a.cwiseMin(v), b = b.cwiseMax(v);
    long long n = (long long)((std::floor(b.x()) - std::floor(a.x()) + 3) * (std::floor(b.y()) - std::floor(a.y()) + 3));
    if (n <= 4000)
      for (long long i = (long long)std::floor(a.x()) - 1; i <= (long long)std::floor(b.x()) + 1; ++i)
        for (long long j = (long long)std::floor(a.y()) - 1; j <= (long long)std::floor(b.y()) + 1; ++j)
          shifts.push_back(m.lattice()->point(double(i), double(j)));
  }
  os << "<g stroke=\"#888\" fill=\"none\" stroke-width=\"" << stroke << "\">\n";
  for (const auto& s : shifts) {
    for (const auto& l : m.lenses())
      os << "<circle cx=\"" << l.center.x() + s.x() << "\" cy=\"" << l.center.y() + s.y() << "\" r=\"" << l.radius << "\"/>\n";
    for (const auto& g : m.slits())
      os << "<line x1=\"" << g.a.x() + s.x() << "\" y1=\"" << g.a.y() + s.y() << "\" x2=\"" << g.b.x() + s.x() << "\" y2=\"" << g.b.y() + s.y()
         << "\"/>\n";
    for (const auto& p : m.pillows())
      for (const Segment& g : {p.bottom(), p.top()})
        os << "<line stroke-dasharray=\"" << 4 * stroke << "\" x1=\"" << g.a.x() + s.x() << "\" y1=\"" << g.a.y() + s.y() << "\" x2=\""
           << g.b.x() + s.x() << "\" y2=\"" << g.b.y() + s.y() << "\"/>\n";
  }
  os << "</g>\n<polyline fill=\"none\" stroke=\"#c03\" stroke-width=\"" << 1.5 * stroke << "\" points=\"";
  for (const auto& p : pts) os << p.x() << ',' << p.y() << ' ';
  os << "\"/>\n</g>\n</svg>\n";
  return os.str();
}

}  // namespace flatlens
