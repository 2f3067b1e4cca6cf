#include "dspin/fermi.hpp"

#include <cmath>

namespace dspin {

namespace {

struct ChartState {
  Vec2 x;  // (u, v)
  Vec2 v;  // chart velocity
};

Vec2 accel(const SurfacePatch& surf, const Vec2& x, const Vec2& v) {
  const ChristoffelSymbols gam = surf.christoffel_symbols(x.x(), x.y());
  Vec2 a;
  for (int i = 0; i < 2; ++i) a[i] = -v.dot(gam[i] * v);
  return a;
}

double metric_speed2(const SurfacePatch& surf, const Vec2& x, const Vec2& v) {
  const Mat2 g = surf.first_form(x.x(), x.y());
  return v.dot(g * v);
}

void rk4_step(const SurfacePatch& surf, ChartState& st, double h) {
  auto f = [&](const ChartState& s) {
    return ChartState{s.v, accel(surf, s.x, s.v)};
  };
  const ChartState k1 = f(st);
  const ChartState k2 = f({st.x + 0.5 * h * k1.x, st.v + 0.5 * h * k1.v});
  const ChartState k3 = f({st.x + 0.5 * h * k2.x, st.v + 0.5 * h * k2.v});
  const ChartState k4 = f({st.x + h * k3.x, st.v + h * k3.v});
  st.x += h / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
  st.v += h / 6.0 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v);
}

// ---- rotated-chart pole hopping for spheres --------------------------------

constexpr double kPoleMargin = 0.2; // rad

Mat3 pole_swap_rotation() {
  // maps the chart pole to the equator of the rotated chart
  Mat3 r;
  r << 1, 0, 0, 0, 0, -1, 0, 1, 0; // rotation by +pi/2 about x
  return r;
}

struct SphereWork {
  SphereChartData data;
  SurfacePatch patch;
};

SphereWork rotated_sphere(const SphereChartData& base, const Mat3& extra) {
  SphereChartData d = base;
  d.frame = base.frame * extra;
  SphereWork w{d, make_sphere(d.radius, d.center, d.sign, d.frame)};
  return w;
}

ChartState to_chart(const SphereChartData& d, const Vec3& pos, const Vec3& vel) {
  const Vec3 local = d.frame.transpose() * (pos - d.center) / d.radius;
  const double th = std::acos(std::clamp(local.z(), -1.0, 1.0));
  const double ph = std::atan2(local.y(), local.x());
  const Vec3 w = d.frame.transpose() * vel;
  const double st = std::sin(th);
  ChartState out;
  out.x = Vec2(th, ph);
  // invert [d_theta, d_phi] against the diagonal sphere metric
  const Vec3 e_th(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th));
  const Vec3 e_ph(-std::sin(th) * std::sin(ph), std::sin(th) * std::cos(ph), 0);
  out.v.x() = w.dot(e_th) / d.radius;
  out.v.y() = (st > 1e-14) ? w.dot(e_ph) / (d.radius * st * st) : 0.0;
  return out;
}

void from_chart(const SurfacePatch& patch, const ChartState& st, Vec3& pos, Vec3& vel) {
  pos = patch.point(st.x.x(), st.x.y());
  vel = patch.deriv_u(st.x.x(), st.x.y()) * st.v.x() + patch.deriv_v(st.x.x(), st.x.y()) * st.v.y();
}

GeodesicState shoot_sphere(const SurfacePatch& surface, const Vec2& start, const Vec2& dir_unit,
                           double q, const ShootOptions& opt) {
  const SphereChartData base = *surface.sphere;
  ChartState st{start, dir_unit};
  bool rotated = false;
  SphereWork work{base, SurfacePatch{}};
  const SurfacePatch* patch = &surface;

  const int n = std::max(opt.min_steps,
                         static_cast<int>(std::ceil(std::abs(q) / opt.max_step)));
  const double h = q / n;
  for (int i = 0; i < n; ++i) {
    const double th = st.x.x();
    if (th < kPoleMargin || th > kPi - kPoleMargin) {
      // hop between the base chart and the pole-swapped chart
      Vec3 pos, vel;
      from_chart(*patch, st, pos, vel);
      rotated = !rotated;
      if (rotated) {
        work = rotated_sphere(base, pole_swap_rotation());
        patch = &work.patch;
      } else {
        patch = &surface;
      }
      st = to_chart(rotated ? work.data : base, pos, vel);
    }
    rk4_step(*patch, st, h);
  }

  if (rotated) {
    Vec3 pos, vel;
    from_chart(*patch, st, pos, vel);
    st = to_chart(base, pos, vel);
    patch = &surface;
  }

  const double drift = std::abs(metric_speed2(*patch, st.x, st.v) - 1.0);
  if (drift > opt.energy_tol)
    fail(Errc::step_too_large, "geodesic integration drifted off unit speed");
  return GeodesicState{st.x, st.v, q};
}

} // namespace

GeodesicState geodesic_shoot_state(const SurfacePatch& surface, const Vec2& start,
                                   const Vec2& direction, double q, const ShootOptions& opt) {
  // normalize the launch direction in the surface metric
  const double sp2 = metric_speed2(surface, start, direction);
  if (sp2 < 1e-28) fail(Errc::degenerate_chart, "geodesic launch direction vanishes");
  const Vec2 dir_unit = direction / std::sqrt(sp2);
  if (q == 0.0) return GeodesicState{start, dir_unit, 0.0};

  if (surface.sphere) return shoot_sphere(surface, start, dir_unit, q, opt);

  ChartState st{start, dir_unit};
  const int n = std::max(opt.min_steps,
                         static_cast<int>(std::ceil(std::abs(q) / opt.max_step)));
  const double h = q / n;
  for (int i = 0; i < n; ++i) {
    rk4_step(surface, st, h);
    if (!surface.domain.contains(st.x.x(), st.x.y()))
      fail(Errc::left_chart_domain, "geodesic left the chart domain");
  }
  const double drift = std::abs(metric_speed2(surface, st.x, st.v) - 1.0);
  if (drift > opt.energy_tol)
    fail(Errc::step_too_large, "geodesic integration drifted off unit speed");
  return GeodesicState{st.x, st.v, q};
}

Vec2 geodesic_shoot(const SurfacePatch& surface, const Vec2& start, const Vec2& direction,
                    double q, const ShootOptions& opt) {
  return geodesic_shoot_state(surface, start, direction, q, opt).point;
}

namespace {

// chart point reached by the Fermi ray of length q at arclength s
Vec3 fermi_point(const CurveOnSurface& curve, double s, double q) {
  const double t = curve.t_of_s(s);
  const Vec2 uv = curve.chart_point(t);
  const SurfacePatch& surf = curve.surface();
  const DarbouxSample d = curve.darboux_sample(s);
  // B in chart components: solve [du dv] b = B via the first form
  const Vec3 ru = surf.deriv_u(uv.x(), uv.y()), rv = surf.deriv_v(uv.x(), uv.y());
  Mat2 g;
  g << ru.dot(ru), ru.dot(rv), ru.dot(rv), rv.dot(rv);
  const Vec2 rhs(ru.dot(d.tangent_normal), rv.dot(d.tangent_normal));
  const Vec2 bchart = g.inverse() * rhs;
  const Vec2 end = geodesic_shoot(surf, uv, bchart, q);
  return surf.point(end.x(), end.y());
}

} // namespace

double fermi_metric_gss(const CurveOnSurface& curve, double s, double q, double fd_step) {
  if (fd_step <= 0) fd_step = 1e-4 * (1.0 + std::abs(s));
  auto p = [&](double x) { return fermi_point(curve, x, q); };
  const double h = fd_step;
  const Vec3 d1 = (p(s + h) - p(s - h)) / (2 * h);
  const Vec3 d2 = (p(s + h / 2) - p(s - h / 2)) / h;
  const Vec3 ds = (4.0 * d2 - d1) / 3.0;
  return ds.squaredNorm();
}

double straight_offset_gss(const CurveOnSurface& curve, double s, double q) {
  auto p = [&](double x) {
    const DarbouxSample d = curve.darboux_sample(x);
    return Vec3(curve.position_at_s(x) + q * d.tangent_normal);
  };
  const double h = 1e-4 * (1.0 + std::abs(s));
  const Vec3 d1 = (p(s + h) - p(s - h)) / (2 * h);
  const Vec3 d2 = (p(s + h / 2) - p(s - h / 2)) / h;
  return ((4.0 * d2 - d1) / 3.0).squaredNorm();
}

double fermi_christoffel_qss(const CurveOnSurface& curve, double s) {
  // Gamma^q_{ss} = -(1/2) d_q g_ss for the orthogonal Fermi metric
  const double dq = 1e-3;
  auto g = [&](double q) { return fermi_metric_gss(curve, s, q); };
  const double a = (g(dq) - g(-dq)) / (2 * dq);
  const double b = (g(dq / 2) - g(-dq / 2)) / dq;
  return -0.5 * (4.0 * b - a) / 3.0;
}

std::vector<double> geometric_grid(double q_max, double q_min, int n) {
  std::vector<double> g(n);
  const double ratio = std::pow(q_min / q_max, 1.0 / (n - 1));
  double q = q_max;
  for (int i = 0; i < n; ++i, q *= ratio) g[i] = q;
  return g;
}

ExpansionFit expansion_order_check(const CurveOnSurface& curve, double s,
                                   const std::vector<double>& q_grid) {
  const DarbouxSample d = curve.darboux_sample(s);
  ExpansionFit fit;
  fit.points.reserve(q_grid.size());
  for (double q : q_grid) {
    ExpansionPoint pt;
    pt.q = q;
    pt.gss_numeric = fermi_metric_gss(curve, s, q);
    pt.gss_series =
        1.0 - 2.0 * d.kappa_g * q + (d.kappa_g * d.kappa_g - d.gaussian) * q * q;
    pt.residual = std::abs(pt.gss_numeric - pt.gss_series);
    fit.max_residual = std::max(fit.max_residual, pt.residual);
    fit.points.push_back(pt);
  }

  if (fit.max_residual < 1e-10) {
    fit.at_floor = true; // expansion exact to rounding here
    return fit;
  }

  // least-squares slope on log residual vs log q, skipping floor points
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& pt : fit.points) {
    if (pt.residual < 1e-13) continue;
    const double x = std::log(pt.q), y = std::log(pt.residual);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3) fail(Errc::fit_failed, "expansion fit: too few residuals above rounding floor");
  const double det = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

} // namespace dspin
