#include <doctest.h>

#include <random>

#include "flatlens/planar.hpp"

using namespace flatlens;

namespace {
// brute force over a generous box of lattice vectors
double brute_min(const Lattice& l, const Vec2& p, bool exclude_zero, int n = 40) {
  double best = 1e300;
  Vec2 c = l.coords(p);
  long long bi = -std::llround(c.x()), bj = -std::llround(c.y());
  for (long long i = bi - n; i <= bi + n; ++i)
    for (long long j = bj - n; j <= bj + n; ++j) {
      if (exclude_zero && i == 0 && j == 0) continue;
      best = std::min(best, (p + l.point(double(i), double(j))).norm());
    }
  return best;
}
}  // namespace

TEST_CASE("degenerate lattices are rejected") {
  CHECK_THROWS_AS(make_lattice(Vec2(1, 2), Vec2(2, 4)), Error);
  CHECK_THROWS_AS(make_lattice(Vec2(0, 0), Vec2(0, 1)), Error);
  try {
    make_lattice(Vec2(1, 1), Vec2(-1, -1));
  } catch (const Error& e) {
    CHECK(e.code == Errc::DegenerateLattice);
  }
}

TEST_CASE("reduction of the skew lattice") {
  Lattice r = lattice_reduce(Vec2(0, 4), Vec2(4, 2));
  CHECK(r.reduced);
  CHECK(r.g1.norm() == doctest::Approx(4));
  CHECK(r.g2.norm() == doctest::Approx(std::sqrt(20.0)));
  CHECK(std::abs(r.det()) == doctest::Approx(16));
  CHECK(r.det() > 0);
  // reduced: |<g1,g2>| <= |g1|^2 / 2
  CHECK(std::abs(r.g1.dot(r.g2)) <= 0.5 * r.g1.squaredNorm() + 1e-12);
  CHECK(r.g1.norm() <= r.g2.norm());
}

TEST_CASE("reduction preserves the lattice (property)") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> U(-9, 9);
  for (int k = 0; k < 300; ++k) {
    Vec2 a(U(rng), U(rng)), b(U(rng), U(rng));
    if (std::abs(cross(a, b)) < 0.5) continue;
    Lattice in = make_lattice(a, b), r = lattice_reduce(a, b);
    CHECK(std::abs(std::abs(r.det()) - std::abs(in.det())) < 1e-9);
    CHECK(lattice_member(in, r.g1));
    CHECK(lattice_member(in, r.g2));
    CHECK(lattice_member(r, a));
    CHECK(lattice_member(r, b));
    CHECK(r.g1.norm() == doctest::Approx(brute_min(in, Vec2(0, 0), true, 30)));
  }
}

TEST_CASE("closest lattice vector matches brute force") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-20, 20);
  Lattice skew = make_lattice(Vec2(0, 4), Vec2(4, 2));
  Lattice thin = make_lattice(Vec2(1, 0), Vec2(7.3, 0.2));
  for (const Lattice& l : {skew, thin}) {
    for (int k = 0; k < 200; ++k) {
      Vec2 p(U(rng), U(rng));
      CHECK(lattice_min_dist(l, p, false) == doctest::Approx(brute_min(l, p, false, 200)).epsilon(1e-12));
    }
    CHECK(lattice_min_dist(l, Vec2(0, 0), true) == doctest::Approx(brute_min(l, Vec2(0, 0), true, 200)));
  }
  CHECK(lattice_min_dist(make_lattice(Vec2(1, 0), Vec2(0, 1)), Vec2(0.3, 0.4), false) == doctest::Approx(0.5));
}

TEST_CASE("wrap and membership") {
  Lattice l = make_lattice(Vec2(0, 4), Vec2(4, 2));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-50, 50);
  for (int k = 0; k < 100; ++k) {
    Vec2 p(U(rng), U(rng));
    Vec2 w = lattice_wrap(l, p);
    Vec2 c = l.coords(w);
    CHECK(c.x() >= -1e-12);
    CHECK(c.x() < 1 + 1e-12);
    CHECK(c.y() >= -1e-12);
    CHECK(c.y() < 1 + 1e-12);
    CHECK(lattice_member(l, p - w));
  }
  Cell out{};
  CHECK(lattice_member(l, Vec2(4, 6), &out));
  CHECK(out == Cell{1, 1});
  CHECK_FALSE(lattice_member(l, Vec2(2, 0)));
}

TEST_CASE("ray against segment") {
  Segment s(Vec2(0, -1), Vec2(0, 1));
  auto h = segment_ray_hit(s, Vec2(-3, 0.5), Vec2(1, 0));
  CHECK(h.kind == HitKind::Hit);
  CHECK(h.t == doctest::Approx(3));
  CHECK(h.u == doctest::Approx(0.5));
  CHECK(segment_ray_hit(s, Vec2(-3, 1.5), Vec2(1, 0)).kind == HitKind::Miss);
  CHECK(segment_ray_hit(s, Vec2(3, 0.5), Vec2(1, 0)).kind == HitKind::Miss);
  CHECK(segment_ray_hit(s, Vec2(0, -3), Vec2(0, 1)).kind == HitKind::Grazing);
  CHECK(segment_ray_hit(s, Vec2(0.5, -3), Vec2(0, 1)).kind == HitKind::Miss);
  CHECK_THROWS(Segment(Vec2(1, 1), Vec2(1, 1)));
}
