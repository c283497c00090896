#include <doctest.h>

#include <algorithm>
#include <random>

#include "flatlens/covers.hpp"
#include "flatlens/skeleton.hpp"

using namespace flatlens;

namespace {
Fold slit(double ax, double ay, double bx, double by) { return SlitFold{Segment(Vec2(ax, ay), Vec2(bx, by))}; }

std::vector<double> sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// true when two closed segments share a point other than a common endpoint
bool segments_cross(const Segment& p, const Segment& q) {
  Vec2 d = p.b - p.a, e = q.b - q.a, w = q.a - p.a;
  double den = cross(d, e);
  if (std::abs(den) < 1e-14) {
    if (std::abs(cross(w, d)) > 1e-12) return false;
    double L2 = d.squaredNorm();
    double t0 = w.dot(d) / L2, t1 = (q.b - p.a).dot(d) / L2;
    return std::min(std::max(t0, t1), 1.0) - std::max(std::min(t0, t1), 0.0) > 1e-9;
  }
  double t = cross(w, e) / den, u = cross(w, d) / den;
  return t > 1e-9 && t < 1 - 1e-9 && u > 1e-9 && u < 1 - 1e-9;
}
}  // namespace

TEST_CASE("slit crossing examples") {
  SlitFold h{Segment(Vec2(-1, 0), Vec2(1, 0))};
  auto r = slit_cross(h, Vec2(0.3, 0), 1, M_PI / 2);
  CHECK(r.point.x() == doctest::Approx(-0.3));
  CHECK(r.point.y() == doctest::Approx(0));
  CHECK(r.sign == -1);
  auto c = slit_cross(h, Vec2(0, 0), 1, M_PI / 2);
  CHECK(c.point.norm() < 1e-15);
  CHECK(c.sign == -1);
  SlitFold v{Segment(Vec2(0, -2), Vec2(0, 2))};
  auto w = slit_cross(v, Vec2(0, 1.5), 1, 0);
  CHECK(w.point.x() == doctest::Approx(0));
  CHECK(w.point.y() == doctest::Approx(-1.5));
  CHECK(w.sign == -1);
  CHECK_THROWS_AS(slit_cross(h, Vec2(0.3, 0.2), 1, M_PI / 2), Error);
  CHECK_THROWS_AS(slit_cross(h, Vec2(0.3, 0), 1, 0), Error);
}

TEST_CASE("slit crossing is an involution fixing the center (property)") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-5, 5), T(0.05, M_PI - 0.05);
  for (int k = 0; k < 200; ++k) {
    Vec2 a(U(rng), U(rng)), b(U(rng), U(rng));
    SlitFold f{Segment(a, b)};
    double th = std::atan2((b - a).y(), (b - a).x()) + T(rng);
    double s = (U(rng) + 5) / 10;
    Vec2 hit = a + s * (b - a);
    int sg = k % 2 ? 1 : -1;
    auto once = slit_cross(f, hit, sg, th);
    auto twice = slit_cross(f, once.point, once.sign, th);
    CHECK((twice.point - hit).norm() < 1e-12);
    CHECK(twice.sign == sg);
    // the image stays on the fold at the mirrored distance
    CHECK(((once.point - f.seg.center()) + (hit - f.seg.center())).norm() < 1e-12);
  }
}

TEST_CASE("pillow edge crossing") {
  PillowFold p{Vec2(0, 0), Vec2(0, 1), Vec2(0, 0), Vec2(1, 0), 1};
  auto up = pillow_edge_cross(p, Vec2(0.4, 0), 1);
  CHECK(up.point.x() == doctest::Approx(0.4));
  CHECK(up.point.y() == doctest::Approx(1));
  CHECK(up.sign == 1);
  auto down = pillow_edge_cross(p, Vec2(0.7, 1), -1);
  CHECK(down.point.y() == doctest::Approx(0));
  CHECK(down.sign == -1);
  CHECK_THROWS_AS(pillow_edge_cross(p, Vec2(0.5, 0.5), 1), Error);
}

TEST_CASE("pillow to chip: branches of the unit square") {
  PillowFold p{Vec2(0, 0), Vec2(0, 1), Vec2(0, 0), Vec2(1, 0), 1};
  auto count = [](const std::vector<SlitFold>& v, bool vertical) {
    return std::count_if(v.begin(), v.end(), [&](const SlitFold& f) {
      Vec2 d = f.seg.b - f.seg.a;
      return vertical ? std::abs(d.x()) < 1e-12 : std::abs(d.y()) < 1e-12;
    });
  };
  auto v = pillow_to_chip(p, M_PI / 2);
  CHECK(v.size() == 2);
  CHECK(count(v, true) == 2);

  auto d = pillow_to_chip(p, M_PI / 4);
  CHECK(count(d, false) == 1);
  for (auto& f : d)
    if (std::abs((f.seg.b - f.seg.a).y()) < 1e-12) {
      CHECK(f.seg.center().x() == doctest::Approx(0.5));
      CHECK(f.seg.center().y() == doctest::Approx(0.5));
      CHECK(f.seg.half_length() == doctest::Approx(0.5));
    }

  // tan 3 lands on the boundary of the n = 3 branch: merged horizontals
  auto t3 = pillow_to_chip(p, std::atan(3.0));
  CHECK(count(t3, true) == 4);
  CHECK(count(t3, false) == 3);
  // strictly inside the n = 3 branch: two pushed folds per strip
  auto t25 = pillow_to_chip(p, std::atan(2.5));
  CHECK(count(t25, true) == 4);
  CHECK(count(t25, false) == 6);
  auto t05 = pillow_to_chip(p, std::atan(0.5));
  CHECK(count(t05, true) == 2);
  CHECK(count(t05, false) == 2);
}

TEST_CASE("pillow to chip output is disjoint and inside the parallelogram (property)") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.3, 3), T(0.01, M_PI - 0.01);
  for (int k = 0; k < 100; ++k) {
    PillowFold p{Vec2(U(rng), U(rng)), Vec2(0, 0), Vec2(0, 0), Vec2(0, 0), 1};
    double h = U(rng), w = U(rng), sk = U(rng) - 1.5;
    p.b = p.a + Vec2(0, h);
    p.c = p.a;
    p.d = p.a + Vec2(w, sk);
    double th = T(rng);
    auto out = pillow_to_chip(p, th);
    Mat2 M;
    M.col(0) = p.ex();
    M.col(1) = p.ey();
    Mat2 inv = M.inverse();
    for (auto& f : out)
      for (const Vec2& q : {f.seg.a, f.seg.b}) {
        Vec2 c = inv * (q - p.a);
        CHECK(c.x() >= -1e-9);
        CHECK(c.x() <= 1 + 1e-9);
        CHECK(c.y() >= -1e-9);
        CHECK(c.y() <= 1 + 1e-9);
      }
    for (size_t i = 0; i < out.size(); ++i)
      for (size_t j = i + 1; j < out.size(); ++j) CHECK_FALSE(segments_cross(out[i].seg, out[j].seg));
  }
}

TEST_CASE("railed equivalence of the direction-dependent folds") {
  double th = M_PI / 8, c = std::cos(th), s = std::sin(th), t = std::tan(th);
  Skeleton A = builtin_skeleton("wollmilchsau");
  Skeleton B;
  B.lattice = A.lattice;
  B.folds = {slit(-2 * s * s, 2 * s * c, 2 * s * s, -2 * s * c), slit(1 + c * s, 1 + t - c * c, 1 - c * s, 1 + t + c * c),
             slit(-1 - c * s, -1 - t + c * c, -1 + c * s, -1 - t - c * c)};
  auto cert = railed_equivalent(B, A, th, {0, 1, 2});
  CHECK_MESSAGE(cert.equivalent, cert.reason);
  CHECK(cert.connectors.size() == 6);
  for (auto& con : cert.connectors) CHECK(std::abs(cross(con.b - con.a, unit_dir(th))) < 1e-9);
  CHECK(railed_equivalent(A, B, th, {0, 1, 2}).equivalent);
  // wrong direction: endpoints are no longer on common leaves
  CHECK_FALSE(railed_equivalent(B, A, th + 0.1, {0, 1, 2}).equivalent);
}

TEST_CASE("railed equivalence: trivial case, blocked case, symmetry") {
  Skeleton W = builtin_skeleton("wollmilchsau");
  for (double th : {0.1, 0.7, 1.3, 2.9}) CHECK(railed_equivalent(W, W, th).equivalent);
  Skeleton A, B;
  A.folds = {slit(0, 0, 0, 1), slit(1, -1, 1, 2)};
  B.folds = {slit(2, 0, 2, 1), slit(1, -1, 1, 2)};
  auto ab = railed_equivalent(A, B, 0);
  auto ba = railed_equivalent(B, A, 0);
  CHECK_FALSE(ab.equivalent);
  CHECK(ab.equivalent == ba.equivalent);
  // without the blocking fold the same move is allowed
  Skeleton A1, B1;
  A1.folds = {slit(0, 0, 0, 1)};
  B1.folds = {slit(2, 0, 2, 1)};
  CHECK(railed_equivalent(A1, B1, 0).equivalent);
  CHECK(railed_equivalent(B1, A1, 0).equivalent);
  CHECK_THROWS_AS(railed_equivalent(A, B1, 0), Error);
}

TEST_CASE("builtin skeletons and their singularity census") {
  Skeleton W = builtin_skeleton("wollmilchsau");
  REQUIRE(W.lattice);
  CHECK(W.folds.size() == 3);
  CHECK(std::abs(W.lattice->det()) == doctest::Approx(16));
  CHECK(sorted(singularity_census(W)) == std::vector<double>{1, 1, 1, 1, 4, 4});
  CHECK(sorted(singularity_census(builtin_skeleton("x2"))) == sorted(cover_census(make_cover(3, 2, 1))));
  CHECK(sorted(singularity_census(builtin_skeleton("x4"))) == sorted(cover_census(make_cover(6, 3, 1))));
  Skeleton c = builtin_skeleton("c6_3_1");
  CHECK(c.pillows().size() == 1);
  try {
    builtin_skeleton("nope");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code == Errc::UnknownName);
  }
}
