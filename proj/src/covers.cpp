#include "flatlens/covers.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>

#include "flatlens/error.hpp"

namespace flatlens {

namespace {
int mod(long long a, int d) {
  long long r = a % d;
  return int(r < 0 ? r + d : r);
}
}  // namespace

CyclicCover make_cover(int d, int wh, int wv) {
  if (d < 1) throw Error(Errc::InvalidWeights, "degree must be positive");
  return {d, mod(wh, d), mod(wv, d)};
}

int gcd0(int a, int d) { return std::gcd(std::abs(a) % d, d); }

bool connected(const CyclicCover& c) { return std::gcd(std::gcd(c.d, c.wh), c.wv) == 1; }

bool branched_over_three(const CyclicCover& c) {
  return c.wh % c.d != 0 && c.wv % c.d != 0 && (c.wh - c.wv) % c.d != 0;
}

int genus(const CyclicCover& c) {
  if (!connected(c)) throw Error(Errc::InvalidWeights, "Disconnected cover");
  int s = c.d - gcd0(c.wh, c.d) - gcd0(c.wv, c.d) - gcd0(c.wh - c.wv, c.d);
  return 1 + s / 2;
}

std::array<int, 3> fiber_counts(const CyclicCover& c) {
  return {gcd0(c.wh, c.d), gcd0(c.wh - c.wv, c.d), gcd0(c.wv, c.d)};
}

std::array<int, 3> branching_orders(const CyclicCover& c) {
  auto n = fiber_counts(c);
  return {c.d / n[0], c.d / n[1], c.d / n[2]};
}

std::vector<double> cover_census(const CyclicCover& c) {
  std::vector<double> out;
  auto n = fiber_counts(c);
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < n[k]; ++j) out.push_back(double(c.d / n[k]));
  for (int j = 0; j < c.d; ++j) out.push_back(1.0);
  out.erase(std::remove(out.begin(), out.end(), 2.0), out.end());
  std::sort(out.begin(), out.end());
  return out;
}

GluedComplex build_complex(const CyclicCover& c) {
  enum { TL, TM, TR, BL, BM, BR };
  const int d = c.d;
  std::vector<int> parent(6 * d);
  std::iota(parent.begin(), parent.end(), 0);
  auto id = [&](int copy, int v) { return 6 * mod(copy, d) + v; };
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  for (int i = 0; i < d; ++i) {
    // right edge of i to left edge of i + wv
    unite(id(i, TR), id(i + c.wv, TL));
    unite(id(i, BR), id(i + c.wv, BL));
    // upper right half of i to upper left half of i + wh, half turn
    unite(id(i, TM), id(i + c.wh, TM));
    unite(id(i, TR), id(i + c.wh, TL));
    // lower right half of i to lower left half of i, half turn
    unite(id(i, BR), id(i, BL));
  }
  GluedComplex g;
  g.d = d;
  g.faces = d;
  g.edges = 3 * d;
  std::map<int, int> cls;
  g.vclass.resize(d);
  const double ang[6] = {0.5, 1.0, 0.5, 0.5, 1.0, 0.5};
  for (int i = 0; i < d; ++i)
    for (int v = 0; v < 6; ++v) {
      int r = find(id(i, v));
      auto it = cls.find(r);
      if (it == cls.end()) {
        it = cls.emplace(r, (int)cls.size()).first;
        g.angle.push_back(0);
      }
      g.vclass[i][v] = it->second;
      g.angle[it->second] += ang[v];
    }
  g.vertices = (int)cls.size();
  return g;
}

int euler_char(const GluedComplex& g) { return g.vertices - g.edges + g.faces; }

std::vector<double> singularity_orders(const GluedComplex& g) {
  std::vector<double> a = g.angle;
  std::sort(a.begin(), a.end());
  return a;
}

std::array<int, 3> complex_fiber_counts(const GluedComplex& g) {
  std::set<int> p1, p2, p3;
  for (const auto& row : g.vclass) {
    p1.insert(row[1]);
    p2.insert(row[0]);
    p2.insert(row[2]);
    p3.insert(row[3]);
    p3.insert(row[5]);
  }
  return {(int)p1.size(), (int)p2.size(), (int)p3.size()};
}

std::vector<CyclicCover> enumerate_torus_covers(int d_max) {
  std::vector<CyclicCover> out;
  for (int d = 2; d <= d_max; ++d)
    for (int wh = 1; wh < d; ++wh)
      for (int wv = 1; wv < d; ++wv) {
        CyclicCover c{d, wh, wv};
        if (!connected(c) || !branched_over_three(c)) continue;
        if (genus(c) == 1) out.push_back(c);
      }
  return out;
}

CyclicCover sl2z_step(const CyclicCover& c, Sl2Gen g) {
  if (g == Sl2Gen::Ph) return make_cover(c.d, c.wv - c.wh, c.wv);
  return make_cover(c.d, c.wh, c.wh - c.wv);
}

std::set<CyclicCover> sl2z_orbit(const CyclicCover& c) {
  std::set<CyclicCover> seen{c};
  std::vector<CyclicCover> stack{c};
  while (!stack.empty()) {
    auto x = stack.back();
    stack.pop_back();
    for (auto g : {Sl2Gen::Ph, Sl2Gen::Pv}) {
      auto y = sl2z_step(x, g);
      if (seen.insert(y).second) stack.push_back(y);
    }
  }
  return seen;
}

namespace {
std::vector<int> units(int d) {
  std::vector<int> u;
  for (int a = 1; a < std::max(d, 2); ++a)
    if (std::gcd(a, d) == 1) u.push_back(a);
  if (d == 1) u = {0};
  return u;
}
}  // namespace

CyclicCover canonical_form(const CyclicCover& c) {
  CyclicCover best = c;
  for (int a : units(c.d)) {
    CyclicCover x = make_cover(c.d, (long long)a * c.wh, (long long)a * c.wv);
    if (std::make_pair(x.wh, x.wv) < std::make_pair(best.wh, best.wv)) best = x;
  }
  return best;
}

CyclicCover table_form(const CyclicCover& c) {
  std::optional<CyclicCover> best;
  int g = gcd0(c.wv, c.d);
  for (int a : units(c.d)) {
    CyclicCover x = make_cover(c.d, (long long)a * c.wh, (long long)a * c.wv);
    if (x.wv != g % c.d) continue;
    if (!best || x.wh > best->wh) best = x;
  }
  return best ? *best : c;
}

std::vector<std::vector<CyclicCover>> torus_cover_classes(int d_max) {
  auto all = enumerate_torus_covers(d_max);
  std::map<CyclicCover, int> comp;
  std::vector<std::vector<CyclicCover>> classes;
  for (const auto& c : all) {
    if (comp.count(c)) continue;
    int k = (int)classes.size();
    classes.emplace_back();
    std::vector<CyclicCover> stack{c};
    comp[c] = k;
    while (!stack.empty()) {
      auto x = stack.back();
      stack.pop_back();
      classes[k].push_back(x);
      std::vector<CyclicCover> nb{sl2z_step(x, Sl2Gen::Ph), sl2z_step(x, Sl2Gen::Pv)};
      for (int a : units(x.d)) nb.push_back(make_cover(x.d, (long long)a * x.wh, (long long)a * x.wv));
      for (auto& y : nb)
        if (!comp.count(y)) {
          comp[y] = k;
          stack.push_back(y);
        }
    }
    std::sort(classes[k].begin(), classes[k].end());
  }
  return classes;
}

std::vector<TableRow> cover_table() {
  std::set<CyclicCover> rows;
  for (const auto& c : enumerate_torus_covers(6)) rows.insert(table_form(c));
  std::vector<TableRow> out;
  for (const auto& c : rows) {
    auto n = fiber_counts(c);
    out.push_back({c.d, c.wh, c.wv, n[0], n[1], n[2]});
  }
  return out;
}

}  // namespace flatlens
