#include <doctest.h>

#include <set>

#include "flatlens/covers.hpp"
#include "flatlens/error.hpp"

using namespace flatlens;

TEST_CASE("genus-one table") {
  // degree, w_h, w_v, fibers over p1 p2 p3
  std::vector<std::array<int, 6>> expect = {{3, 2, 1, 1, 1, 1}, {4, 2, 1, 2, 1, 1}, {4, 3, 1, 1, 2, 1}, {4, 3, 2, 1, 1, 2},
                                            {6, 3, 1, 3, 2, 1}, {6, 3, 2, 3, 1, 2}, {6, 4, 1, 2, 3, 1}, {6, 4, 3, 2, 1, 3},
                                            {6, 5, 2, 1, 3, 2}, {6, 5, 3, 1, 2, 3}};
  auto t = cover_table();
  REQUIRE(t.size() == expect.size());
  for (size_t i = 0; i < t.size(); ++i) {
    CHECK(std::array<int, 6>{t[i].d, t[i].wh, t[i].wv, t[i].n1, t[i].n2, t[i].n3} == expect[i]);
    CHECK(genus(make_cover(t[i].d, t[i].wh, t[i].wv)) == 1);
  }
}

TEST_CASE("genus and fibers of single covers") {
  CHECK(genus(make_cover(6, 3, 1)) == 1);
  CHECK(genus(make_cover(3, 2, 1)) == 1);
  CHECK(fiber_counts(make_cover(6, 3, 1)) == std::array<int, 3>{3, 2, 1});
  CHECK(fiber_counts(make_cover(4, 3, 2)) == std::array<int, 3>{1, 1, 2});
  CHECK(fiber_counts(make_cover(6, 5, 2)) == std::array<int, 3>{1, 3, 2});
  CHECK_FALSE(branched_over_three(make_cover(5, 1, 1)));
  CHECK(genus(make_cover(5, 1, 1)) == 0);
  CHECK_THROWS_AS(genus(make_cover(4, 2, 2)), Error);
  CHECK(euler_char(build_complex(make_cover(6, 3, 1))) == 0);
  CHECK(complex_fiber_counts(build_complex(make_cover(3, 2, 1))) == std::array<int, 3>{1, 1, 1});
  CHECK(euler_char(build_complex(make_cover(2, 1, 1))) == 2);
}

TEST_CASE("formula against the glued complex, d <= 12 (oracle)") {
  int checked = 0;
  for (int d = 2; d <= 12; ++d)
    for (int wh = 0; wh < d; ++wh)
      for (int wv = 0; wv < d; ++wv) {
        CyclicCover c = make_cover(d, wh, wv);
        if (!connected(c)) continue;
        GluedComplex g = build_complex(c);
        CHECK(g.faces == d);
        CHECK(g.edges == 3 * d);
        CHECK(euler_char(g) == 2 - 2 * genus(c));
        if (branched_over_three(c)) {
          ++checked;
          CHECK(complex_fiber_counts(g) == fiber_counts(c));
        }
        // total angle over the complex is 2 pi per square: 4 pi per copy
        double tot = 0;
        for (double a : g.angle) tot += a;
        CHECK(tot == doctest::Approx(4.0 * d));
      }
  CHECK(checked > 300);
}

TEST_CASE("classification of genus-one covers") {
  auto all = enumerate_torus_covers(50);
  std::set<int> degrees;
  for (auto& c : all) degrees.insert(c.d);
  CHECK(degrees == std::set<int>{3, 4, 6});
  std::set<std::pair<int, int>> d6;
  for (auto& c : all)
    if (c.d == 6) d6.insert({c.wh, c.wv});
  for (auto p : std::vector<std::pair<int, int>>{{1, 3}, {3, 1}, {3, 2}, {2, 3}, {4, 1}, {4, 3}, {5, 2}, {5, 3}, {1, 4}})
    CHECK(d6.count(p) == 1);
  std::set<std::pair<int, int>> rows;
  for (auto& c : all)
    if (c.d == 6) {
      CyclicCover t = table_form(c);
      rows.insert({t.wh, t.wv});
    }
  CHECK(rows == std::set<std::pair<int, int>>{{3, 1}, {3, 2}, {4, 1}, {4, 3}, {5, 2}, {5, 3}});
  auto cls = torus_cover_classes(50);
  CHECK(cls.size() == 3);
  std::set<int> cd;
  for (auto& k : cls) cd.insert(k.front().d);
  CHECK(cd == std::set<int>{3, 4, 6});
}

TEST_CASE("SL2(Z) action") {
  CHECK(sl2z_step(make_cover(6, 3, 1), Sl2Gen::Ph) == make_cover(6, 4, 1));
  CHECK(sl2z_step(make_cover(6, 3, 1), Sl2Gen::Pv) == make_cover(6, 3, 2));
  auto o = sl2z_orbit(make_cover(4, 2, 1));
  CHECK(o.count(make_cover(4, 3, 1)) == 1);
  CHECK(o.count(make_cover(4, 3, 2)) == 1);
  CHECK(canonical_form(make_cover(6, 1, 4)) == canonical_form(make_cover(6, 5, 2)));
  for (int d = 2; d <= 12; ++d)
    for (int wh = 1; wh < d; ++wh)
      for (int wv = 1; wv < d; ++wv) {
        CyclicCover c = make_cover(d, wh, wv);
        if (!connected(c)) continue;
        auto orb = sl2z_orbit(c);
        CHECK(orb.size() <= 6);
        for (auto& x : orb) {
          CHECK(genus(x) == genus(c));
          CHECK(sl2z_orbit(x) == orb);
        }
      }
}
