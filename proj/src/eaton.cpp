#include "flatlens/eaton.hpp"

#include <algorithm>
#include <complex>

namespace flatlens {

namespace {
double tol_for(double R) { return 1e-8 * std::max(1.0, R); }
}  // namespace

LensTransit lens_retroreflect(const EatonLens& lens, const Vec2& entry, const Vec2& dir) {
  const double R = lens.radius;
  Vec2 rel = entry - lens.center;
  if (std::abs(rel.norm() - R) > tol_for(R)) throw Error(Errc::NotOnBoundary, "entry point is not on the lens boundary");
  Vec2 e1 = dir.normalized();
  if (e1.dot(rel) >= 0) throw Error(Errc::DirectionOutward, "direction does not point into the lens");
  Vec2 e2 = perp(e1);
  double s = rel.dot(e2);
  double a = std::sqrt(std::max(0.0, R * R - s * s));
  LensTransit tr;
  tr.entry = entry;
  tr.entry_dir = e1;
  tr.exit = lens.center - a * e1 - s * e2;
  tr.exit_dir = -e1;
  tr.s = s;
  tr.transit_time = M_PI * R;
  tr.metric_time = M_PI * R + 2 * a;
  return tr;
}

double lens_time_of_r(double R, double s, double r) {
  double a = std::sqrt(R * R - s * s);
  auto F = [&](double x) {
    double q = std::max(0.0, x * (2 * R - x) - s * s);
    double arg = std::clamp((R - x) / a, -1.0, 1.0);
    return -std::sqrt(q) + R * std::asin(arg);
  };
  return F(r) - F(R);
}

PolarPoint lens_arc_point(double R, double s, double t) {
  if (std::abs(s) >= R - kGrazeTol * R) throw Error(Errc::DegenerateImpact, "impact parameter at or beyond the rim");
  double a = std::sqrt(R * R - s * s);
  double r0 = R - a;
  double tp = lens_perihelion_time(R, s);
  if (t < -1e-12 || t > tp + 1e-12) throw Error(Errc::OutOfTimeRange, "time outside the incoming half arc");
  // time decreases in r on [r0, R]
  double lo = r0, hi = R;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    double mid = 0.5 * (lo + hi);
    if (lens_time_of_r(R, s, mid) > t) lo = mid;
    else hi = mid;
  }
  double r = 0.5 * (lo + hi);
  if (t <= 0) r = R;
  double phi;
  if (std::abs(s) < 1e-12 * R) {
    phi = M_PI;
  } else {
    double c = -(R * r - s * s) / (r * a);
    phi = std::copysign(std::acos(std::clamp(c, -1.0, 1.0)), s);
  }
  return {r, phi};
}

double invariant_density(double R, double x, double y) {
  double r = std::hypot(x, y);
  if (r >= R) throw Error(Errc::OutsideLens, "point not strictly inside the lens");
  if (r < 1e-12) throw Error(Errc::CenterSingular, "density is singular at the center");
  double k = 4 * R * (R - r);
  double w = std::sqrt(x * x + k) + x;
  return ((2 * R - r) / r) * k / (w * w + k);
}

OdeTrace geodesic_ode_trace(const EatonLens& lens, const Vec2& entry, const Vec2& dir, double step) {
  using C = std::complex<double>;
  const double R = lens.radius;
  Vec2 rel = entry - lens.center;
  if (std::abs(rel.norm() - R) > tol_for(R)) throw Error(Errc::NotOnBoundary, "entry point is not on the lens boundary");
  Vec2 d = dir.normalized();
  if (d.dot(rel) >= 0) throw Error(Errc::DirectionOutward, "direction does not point into the lens");
  const double E = -0.5;

  // regularized Kepler problem: z = u^2, u'' = (E/2) u, dt/dsigma = 2R - |u|^2
  struct St {
    C u, w;
    double t;
  };
  auto deriv = [&](const St& x) { return St{x.w, 0.5 * E * x.u, 2 * R - std::norm(x.u)}; };
  auto axpy = [](const St& x, double h, const St& k) { return St{x.u + h * k.u, x.w + h * k.w, x.t + h * k.t}; };
  auto rk4 = [&](const St& x, double h) {
    St k1 = deriv(x), k2 = deriv(axpy(x, h / 2, k1)), k3 = deriv(axpy(x, h / 2, k2)), k4 = deriv(axpy(x, h, k3));
    return St{x.u + h / 6 * (k1.u + 2. * k2.u + 2. * k3.u + k4.u), x.w + h / 6 * (k1.w + 2. * k2.w + 2. * k3.w + k4.w),
              x.t + h / 6 * (k1.t + 2 * k2.t + 2 * k3.t + k4.t)};
  };
  auto constraint = [&](const St& x) { return 2 * std::norm(x.w) - E * std::norm(x.u) - R; };

  C z0(rel.x(), rel.y()), p0(d.x(), d.y());
  C u0 = std::sqrt(z0);
  St x{u0, p0 * std::conj(u0) / 2.0, 0.0};

  OdeTrace out;
  Vec2 e2 = perp(d);
  out.near_tangent = std::abs(rel.dot(e2)) > R * (1 - 1e-3);
  // fictitious-time step scaled so that the spatial step is about `step`
  double h = step / std::sqrt(R);
  auto pos_of = [&](const St& s) {
    C z = s.u * s.u;
    return Vec2(lens.center.x() + z.real(), lens.center.y() + z.imag());
  };
  out.samples.push_back({0.0, entry});
  bool inside = false;
  for (long it = 0; it < 50000000; ++it) {
    St nx = rk4(x, h);
    double rn = std::norm(nx.u);
    if (rn < R) inside = true;
    if (inside && rn >= R) {
      // bisection on the last step for the boundary crossing
      double lo = 0, hi = h;
      for (int k = 0; k < 80; ++k) {
        double mid = 0.5 * (lo + hi);
        if (std::norm(rk4(x, mid).u) >= R) hi = mid;
        else lo = mid;
      }
      x = rk4(x, hi);
      break;
    }
    x = nx;
    out.samples.push_back({x.t, pos_of(x)});
  }
  if (std::abs(constraint(x)) > 1e-6 * R) throw Error(Errc::StepTooLarge, "energy drift exceeded tolerance");
  out.exit = pos_of(x);
  C pd = 2.0 * x.w / std::conj(x.u);
  out.exit_dir = Vec2(pd.real(), pd.imag()).normalized();
  out.metric_time = x.t;
  out.samples.push_back({x.t, out.exit});
  return out;
}

}  // namespace flatlens
