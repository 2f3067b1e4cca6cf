#include "dspin/surface.hpp"

#include <cmath>

namespace dspin {

namespace {

// central difference with one Richardson level
template <typename F>
Vec3 richardson_first(const F& f, double h) {
  const Vec3 d1 = (f(h) - f(-h)) / (2.0 * h);
  const Vec3 d2 = (f(h / 2) - f(-h / 2)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

template <typename F>
Vec3 richardson_second(const F& f, double h) {
  const Vec3 f0 = f(0.0);
  const Vec3 s1 = (f(h) - 2.0 * f0 + f(-h)) / (h * h);
  const Vec3 s2 = (f(h / 2) - 2.0 * f0 + f(-h / 2)) / (h * h / 4.0);
  return (4.0 * s2 - s1) / 3.0;
}

} // namespace

Vec3 SurfacePatch::deriv_u(double u, double v) const {
  if (du_fn) return du_fn(u, v);
  return richardson_first([&](double e) { return chart(u + e, v); }, fd.first);
}

Vec3 SurfacePatch::deriv_v(double u, double v) const {
  if (dv_fn) return dv_fn(u, v);
  return richardson_first([&](double e) { return chart(u, v + e); }, fd.first);
}

Vec3 SurfacePatch::deriv_uu(double u, double v) const {
  if (duu_fn) return duu_fn(u, v);
  return richardson_second([&](double e) { return chart(u + e, v); }, fd.second);
}

Vec3 SurfacePatch::deriv_vv(double u, double v) const {
  if (dvv_fn) return dvv_fn(u, v);
  return richardson_second([&](double e) { return chart(u, v + e); }, fd.second);
}

Vec3 SurfacePatch::deriv_uv(double u, double v) const {
  if (duv_fn) return duv_fn(u, v);
  const double h = fd.second;
  auto cross = [&](double e) {
    return Vec3((chart(u + e, v + e) - chart(u + e, v - e) - chart(u - e, v + e) +
                 chart(u - e, v - e)) /
                (4.0 * e * e));
  };
  return (4.0 * cross(h / 2) - cross(h)) / 3.0;
}

Vec3 SurfacePatch::normal(double u, double v) const {
  if (normal_fn) return normal_fn(u, v);
  const Vec3 cr = deriv_u(u, v).cross(deriv_v(u, v));
  const double n = cr.norm();
  if (n < 1e-12) fail(Errc::degenerate_chart, name + ": degenerate chart point");
  return orientation * cr / n;
}

ChartFrame SurfacePatch::chart_eval(double u, double v) const {
  if (!domain.contains(u, v)) fail(Errc::out_of_domain, name + ": (u,v) outside chart domain");
  ChartFrame f;
  f.position = chart(u, v);
  f.d_u = deriv_u(u, v);
  f.d_v = deriv_v(u, v);
  const Vec3 cr = f.d_u.cross(f.d_v);
  if (cr.norm() < 1e-12) fail(Errc::degenerate_chart, name + ": degenerate chart point");
  f.normal = normal_fn ? normal_fn(u, v) : Vec3(orientation * cr.normalized());
  return f;
}

Mat2 SurfacePatch::first_form(double u, double v) const {
  const Vec3 ru = deriv_u(u, v), rv = deriv_v(u, v);
  Mat2 g;
  g << ru.dot(ru), ru.dot(rv), ru.dot(rv), rv.dot(rv);
  return g;
}

CurvatureReport SurfacePatch::curvature_report(double u, double v) const {
  const Vec3 ru = deriv_u(u, v), rv = deriv_v(u, v);
  const Vec3 cr = ru.cross(rv);
  if (cr.norm() < 1e-12) fail(Errc::degenerate_chart, name + ": degenerate chart point");
  const Vec3 n = normal_fn ? normal_fn(u, v) : Vec3(orientation * cr.normalized());

  CurvatureReport rep;
  rep.first_form << ru.dot(ru), ru.dot(rv), ru.dot(rv), rv.dot(rv);
  const Vec3 ruu = deriv_uu(u, v), ruv = deriv_uv(u, v), rvv = deriv_vv(u, v);
  rep.second_form << ruu.dot(n), ruv.dot(n), ruv.dot(n), rvv.dot(n);
  // dN = -S dR with II(X,Y) = <S X, Y>  =>  S = I^{-1} II
  rep.shape_operator = rep.first_form.inverse() * rep.second_form;
  rep.gaussian = rep.shape_operator.determinant();
  rep.mean = 0.5 * rep.shape_operator.trace();
  return rep;
}

ChristoffelSymbols SurfacePatch::christoffel_symbols(double u, double v) const {
  const Vec3 ru = deriv_u(u, v), rv = deriv_v(u, v);
  Mat2 g;
  g << ru.dot(ru), ru.dot(rv), ru.dot(rv), rv.dot(rv);
  if (std::abs(g.determinant()) < 1e-14)
    fail(Errc::singular_metric, name + ": singular first fundamental form");
  const Mat2 ginv = g.inverse();

  const Vec3 d2[2][2] = {{deriv_uu(u, v), deriv_uv(u, v)}, {deriv_uv(u, v), deriv_vv(u, v)}};
  const Vec3 d1[2] = {ru, rv};

  // dg[c](a,b) = d_c g_ab = R_ac . R_b + R_a . R_bc
  Mat2 dg[2];
  for (int c = 0; c < 2; ++c)
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) dg[c](a, b) = d2[a][c].dot(d1[b]) + d1[a].dot(d2[b][c]);

  ChristoffelSymbols gam;
  for (int a = 0; a < 2; ++a) {
    gam[a].setZero();
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        double sum = 0;
        for (int d = 0; d < 2; ++d)
          sum += ginv(a, d) * (dg[b](d, c) + dg[c](d, b) - dg[d](b, c));
        gam[a](b, c) = 0.5 * sum;
      }
  }
  return gam;
}

double SurfacePatch::gaussian_at(double u, double v) const {
  if (gaussian_fn) return gaussian_fn(u, v);
  return curvature_report(u, v).gaussian;
}

double SurfacePatch::mean_at(double u, double v) const {
  if (mean_fn) return mean_fn(u, v);
  return curvature_report(u, v).mean;
}

SurfacePatch make_plane(const Vec3& center, const Vec3& e_u, const Vec3& e_v, double orientation) {
  SurfacePatch s;
  s.name = "plane";
  const Vec3 n = orientation * e_u.cross(e_v).normalized();
  s.chart = [=](double u, double v) { return Vec3(center + u * e_u + v * e_v); };
  s.du_fn = [=](double, double) { return e_u; };
  s.dv_fn = [=](double, double) { return e_v; };
  s.duu_fn = s.duv_fn = s.dvv_fn = [](double, double) { return Vec3::Zero().eval(); };
  s.normal_fn = [=](double, double) { return n; };
  s.gaussian_fn = [](double, double) { return 0.0; };
  s.mean_fn = [](double, double) { return 0.0; };
  s.orientation = orientation;
  return s;
}

SurfacePatch make_cylinder(double radius, double center_x, double center_y, double orientation) {
  SurfacePatch s;
  s.name = "cylinder";
  const double r = radius, sg = orientation;
  s.chart = [=](double phi, double z) {
    return Vec3(center_x + r * std::cos(phi), center_y + r * std::sin(phi), z);
  };
  s.du_fn = [=](double phi, double) { return Vec3(-r * std::sin(phi), r * std::cos(phi), 0); };
  s.dv_fn = [](double, double) { return Vec3(0, 0, 1); };
  s.duu_fn = [=](double phi, double) { return Vec3(-r * std::cos(phi), -r * std::sin(phi), 0); };
  s.duv_fn = [](double, double) { return Vec3::Zero().eval(); };
  s.dvv_fn = [](double, double) { return Vec3::Zero().eval(); };
  s.normal_fn = [=](double phi, double) { return Vec3(sg * std::cos(phi), sg * std::sin(phi), 0); };
  s.gaussian_fn = [](double, double) { return 0.0; };
  s.mean_fn = [=](double, double) { return -sg / (2.0 * r); };
  s.orientation = orientation;
  s.topology.u_periodic = true;
  s.topology.u_period = kTwoPi;
  return s;
}

SurfacePatch make_sphere(double radius, const Vec3& center, double orientation, const Mat3& frame) {
  SurfacePatch s;
  s.name = "sphere";
  const double r = radius, sg = orientation;
  const Mat3 Q = frame;
  auto dir = [Q](double th, double ph) {
    return Vec3(Q * Vec3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)));
  };
  s.chart = [=](double th, double ph) { return Vec3(center + r * dir(th, ph)); };
  s.du_fn = [=](double th, double ph) {
    return Vec3(r * (Q * Vec3(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph),
                              -std::sin(th))));
  };
  s.dv_fn = [=](double th, double ph) {
    return Vec3(r * (Q * Vec3(-std::sin(th) * std::sin(ph), std::sin(th) * std::cos(ph), 0)));
  };
  s.duu_fn = [=](double th, double ph) { return Vec3(-r * dir(th, ph)); };
  s.duv_fn = [=](double th, double ph) {
    return Vec3(r * (Q * Vec3(-std::cos(th) * std::sin(ph), std::cos(th) * std::cos(ph), 0)));
  };
  s.dvv_fn = [=](double th, double ph) {
    return Vec3(r * (Q * Vec3(-std::sin(th) * std::cos(ph), -std::sin(th) * std::sin(ph), 0)));
  };
  s.normal_fn = [=](double th, double ph) { return Vec3(sg * dir(th, ph)); };
  s.gaussian_fn = [=](double, double) { return 1.0 / (r * r); };
  s.mean_fn = [=](double, double) { return -sg / r; };
  s.orientation = orientation;
  s.domain.u_min = 0.0;
  s.domain.u_max = kPi;
  s.topology.v_periodic = true;
  s.topology.v_period = kTwoPi;
  s.sphere = SphereChartData{center, radius, orientation, frame};
  return s;
}

} // namespace dspin
