#include <doctest.h>

#include "flatlens/configurations.hpp"

using namespace flatlens;

namespace {
// lattices must match; lenses are compared as sets modulo the lattice
double one_way(const LensConfiguration& a, const LensConfiguration& b) {
  double d = 0;
  for (const auto& l : a.lenses) {
    double best = 1e300;
    for (const auto& m : b.lenses)
      for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j)
          best = std::min(best, (m.center + b.lattice.point(i, j) - l.center).norm() + std::abs(m.radius - l.radius));
    d = std::max(d, best);
  }
  return d;
}
double config_distance(const LensConfiguration& a, const LensConfiguration& b) {
  double d = (a.lattice.g1 - b.lattice.g1).norm() + (a.lattice.g2 - b.lattice.g2).norm();
  return d + std::max(one_way(a, b), one_way(b, a));
}
}  // namespace

TEST_CASE("curve at theta = 0") {
  auto g = gamma_w(0);
  CHECK(g.lattice.g1 == Vec2(0, 4));
  CHECK(g.lattice.g2 == Vec2(4, 2));
  REQUIRE(g.lenses.size() == 2);
  CHECK((g.lenses[0].center - Vec2(1, 1)).norm() < 1e-12);
  CHECK((g.lenses[1].center - Vec2(-1, -1)).norm() < 1e-12);
  CHECK(g.lenses[0].radius == doctest::Approx(1));
  auto a = is_admissible(g);
  CHECK(a.ok);
  CHECK(std::abs(a.worst_gap) < 1e-9);
}

TEST_CASE("branches agree at the switch points") {
  auto b1 = gamma_w_branch(1, M_PI / 4), b2 = gamma_w_branch(2, M_PI / 4);
  CHECK(config_distance(b1, b2) < 1e-9);
  CHECK(b1.lenses[0].radius == doctest::Approx(std::sqrt(2.0)));
  CHECK(b1.lenses[1].radius == doctest::Approx(std::sqrt(0.5)));
  CHECK((b2.lenses[1].center - Vec2(1, 2)).norm() < 1e-12);
  CHECK(config_distance(gamma_w_branch(2, M_PI / 2), gamma_w_branch(3, M_PI / 2)) < 1e-9);
  CHECK(config_distance(gamma_w_branch(3, 3 * M_PI / 4), gamma_w_branch(4, 3 * M_PI / 4)) < 1e-9);
}

TEST_CASE("closing up at pi") {
  auto a = gamma_w(0), b = gamma_w_branch(4, M_PI);
  for (auto& l : b.lenses) l.center += Vec2(0, 2);
  b = make_configuration(b.lattice, b.lenses);
  REQUIRE(a.lenses.size() == 2);
  REQUIRE(b.lenses.size() == 2);
  CHECK(config_distance(a, b) < 1e-9);
  CHECK(config_distance(gamma_w(M_PI), a) < 1e-9);
}

TEST_CASE("admissibility over a fine grid and continuity") {
  LensConfiguration prev = gamma_w_raw(0);
  for (int k = 0; k <= 2000; ++k) {
    double th = M_PI * k / 2000;
    auto g = gamma_w(th);
    CHECK(is_admissible(g, 1e-9).ok);
    auto raw = gamma_w_raw(th);
    if (k > 0 && k < 2000) CHECK(config_distance(raw, prev) < 10 * 4 * M_PI / 2000);
    prev = raw;
  }
  CHECK_FALSE(is_admissible(single_lens(make_lattice(Vec2(1, 0), Vec2(0, 1)), 0.6)).ok);
  LensConfiguration bad{make_lattice(Vec2(1, 0), Vec2(0, 1)), {{Vec2(0, 0), 0.1}, {Vec2(1, 0), 0.1}}};
  CHECK_THROWS_AS(is_admissible(bad), Error);
}

TEST_CASE("lens to slits") {
  auto s = lens_to_slits(gamma_w(M_PI / 8), M_PI / 8);
  CHECK(s.centers.size() == 3);
  CHECK(std::abs(s.v.dot(unit_dir(M_PI / 8))) < 1e-12);
  auto z = lens_to_slits(single_lens(make_lattice(Vec2(1, 0), Vec2(0, 1)), 0.3), 0);
  CHECK(std::abs(z.v.x()) < 1e-12);
  CHECK(z.radii[0] == doctest::Approx(0.3));
  Skeleton sk = to_skeleton(s);
  CHECK(sk.folds.size() == 3);
}

TEST_CASE("separation by a lattice vector") {
  SlitConfiguration s{make_lattice(Vec2(1, 0), Vec2(0, 1)), Vec2(1, 0), {Vec2(0.2, 0.25), Vec2(0.6, 0.75)}, {0.1, 0.1}};
  CHECK(is_separated(s, Vec2(0, 1)));
  CHECK(is_separated(s, Vec2(0, -1)));
  // overlapping shadows with centers on different lines
  SlitConfiguration o = s;
  o.centers[1] = Vec2(0.25, 0.75);
  CHECK_FALSE(is_separated(o, Vec2(0, 1)));
  CHECK_FALSE(is_separated(o, Vec2(0, -1)));
  // stacked on one line
  SlitConfiguration st = s;
  st.centers[1] = Vec2(0.2, 0.75);
  CHECK(is_separated(st, Vec2(0, 1)));
  // a shadow that wraps the whole torus is not proper
  SlitConfiguration wide{make_lattice(Vec2(1, 0), Vec2(0, 1)), Vec2(1, 0), {Vec2(0.5, 0.5)}, {0.6}};
  CHECK_FALSE(is_separated(wide, Vec2(0, 1)));
  try {
    is_separated(s, Vec2(1, 0));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code == Errc::SlitParallelToW);
  }
}

TEST_CASE("railed rescale") {
  SlitConfiguration s{make_lattice(Vec2(1, 0), Vec2(0, 1)), Vec2(0, 1), {Vec2(0.5, 0.5)}, {0.1}};
  auto id = railed_rescale(s, 0, 0);
  CHECK(id.slits.radii[0] == doctest::Approx(0.1));
  CHECK(std::abs(id.slits.v.x()) < 1e-12);
  auto small = railed_rescale(s, 0, 0.2);
  CHECK(small.slits.radii[0] == doctest::Approx(0.1 / std::cos(0.2)));
  CHECK(std::abs(small.slits.v.dot(unit_dir(0.2))) < 1e-12);
  // the rescaled system is railed to the original in direction theta
  Skeleton A = to_skeleton(s), B = to_skeleton(small.slits);
  CHECK(railed_equivalent(A, B, 0).equivalent);
  SlitConfiguration packed{make_lattice(Vec2(1, 0), Vec2(0, 1)), Vec2(0, 1), {Vec2(0.2, 0.5), Vec2(0.3, 0.5)}, {0.45, 0.45}};
  CHECK_THROWS_AS(railed_rescale(packed, 0, 1.2), Error);
  try {
    railed_rescale(packed, 0, 1.2);
  } catch (const Error& e) {
    CHECK(e.code == Errc::DeformationBlocked);
  }
}
