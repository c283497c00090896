#include <doctest.h>

#include <random>

#include "flatlens/eaton.hpp"

using namespace flatlens;

TEST_CASE("retroreflection: head-on and offset rays") {
  EatonLens L{Vec2(0, 0), 1};
  auto t = lens_retroreflect(L, Vec2(-std::sqrt(0.75), 0.5), Vec2(1, 0));
  CHECK(t.exit.x() == doctest::Approx(-std::sqrt(0.75)));
  CHECK(t.exit.y() == doctest::Approx(-0.5));
  CHECK(t.exit_dir.x() == doctest::Approx(-1));
  CHECK(t.transit_time == doctest::Approx(M_PI));
  auto h = lens_retroreflect(L, Vec2(-1, 0), Vec2(1, 0));
  CHECK(h.exit.x() == doctest::Approx(-1));
  CHECK(h.metric_time == doctest::Approx(M_PI + 2));
  auto r2 = lens_retroreflect(EatonLens{Vec2(0, 0), 2}, Vec2(-std::sqrt(3.0), 1), Vec2(1, 0));
  CHECK(r2.transit_time == doctest::Approx(2 * M_PI));
}

TEST_CASE("retroreflection errors") {
  EatonLens L{Vec2(0, 0), 1};
  auto code = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code;
    }
    return Errc::BadInput;
  };
  CHECK(code([&] { lens_retroreflect(L, Vec2(-0.5, 0), Vec2(1, 0)); }) == Errc::NotOnBoundary);
  CHECK(code([&] { lens_retroreflect(L, Vec2(-1, 0), Vec2(-1, 0)); }) == Errc::DirectionOutward);
  CHECK(code([&] { lens_arc_point(1, 1, 0.1); }) == Errc::DegenerateImpact);
  CHECK(code([&] { lens_arc_point(1, 0.3, 10); }) == Errc::OutOfTimeRange);
  CHECK(code([&] { invariant_density(1, 2, 0); }) == Errc::OutsideLens);
  CHECK(code([&] { invariant_density(1, 0, 0); }) == Errc::CenterSingular);
}

TEST_CASE("arc point at entry and perihelion") {
  double R = 1, s = 0.5, a = std::sqrt(0.75);
  auto p0 = lens_arc_point(R, s, 0);
  CHECK(p0.r == doctest::Approx(R));
  CHECK(p0.r * std::cos(p0.phi) == doctest::Approx(-a));
  CHECK(p0.r * std::sin(p0.phi) == doctest::Approx(s));
  auto pp = lens_arc_point(R, s, M_PI * R / 2 + a);
  CHECK(pp.r == doctest::Approx(R - a).epsilon(1e-9));
  // time increases monotonically along the incoming half
  double prev = R + 1;
  for (int k = 0; k <= 20; ++k) {
    double r = lens_arc_point(R, s, (M_PI * R / 2 + a) * k / 20).r;
    CHECK(r <= prev + 1e-12);
    prev = r;
  }
}

TEST_CASE("transit law against the geodesic integrator (oracle)") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> UR(0.1, 10), US(-0.98, 0.98), UA(0, 2 * M_PI);
  for (int k = 0; k < 25; ++k) {
    double R = UR(rng), s = US(rng) * R, ang = UA(rng);
    Vec2 c(UR(rng), -UR(rng));
    Vec2 e1 = unit_dir(ang), e2 = perp(e1);
    double a = std::sqrt(R * R - s * s);
    Vec2 entry = c - a * e1 + s * e2;
    EatonLens L{c, R};
    auto cf = lens_retroreflect(L, entry, e1);
    auto ode = geodesic_ode_trace(L, entry, e1, 1e-3 * R);
    CHECK(std::abs(ode.metric_time - 2 * a - M_PI * R) <= 1e-6 * R);
    CHECK((ode.exit - cf.exit).norm() <= 1e-6 * R);
    CHECK((ode.exit_dir - cf.exit_dir).norm() <= 1e-6);
  }
}

TEST_CASE("integrator rejects oversized steps") {
  EatonLens L{Vec2(0, 0), 1};
  CHECK_THROWS_AS(geodesic_ode_trace(L, Vec2(-std::sqrt(0.75), 0.5), Vec2(1, 0), 2.0), Error);
}

TEST_CASE("time of r is consistent with the arc point") {
  for (double s : {-0.7, -0.2, 0.0, 0.4, 0.9}) {
    for (double frac : {0.1, 0.5, 0.9}) {
      double tp = lens_perihelion_time(2, s);
      auto p = lens_arc_point(2, s, frac * tp);
      CHECK(lens_time_of_r(2, s, p.r) == doctest::Approx(frac * tp).epsilon(1e-9));
    }
  }
}

TEST_CASE("density makes (t, s) area preserving (finite differences)") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0, 1);
  for (int k = 0; k < 40; ++k) {
    double R = 0.5 + 3 * U(rng);
    double s = (U(rng) * 1.8 - 0.9) * R;
    double tp = lens_perihelion_time(R, s);
    double t = (0.05 + 0.9 * U(rng)) * tp;
    auto xy = [&](double tt, double ss) {
      auto p = lens_arc_point(R, ss, tt);
      return Vec2(p.r * std::cos(p.phi), p.r * std::sin(p.phi));
    };
    double h = 1e-5 * R;
    Vec2 dt = (xy(t + h, s) - xy(t - h, s)) / (2 * h), ds = (xy(t, s + h) - xy(t, s - h)) / (2 * h);
    Vec2 p = xy(t, s);
    double jac = std::abs(cross(dt, ds));
    CHECK(std::abs(jac * invariant_density(R, p.x(), p.y()) - 1) <= 1e-6);
  }
}
