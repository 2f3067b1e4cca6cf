#pragma once

// Test-side oracles, deliberately independent of the library's derivative and
// frame machinery: they difference raw closures only.

#include <cmath>
#include <functional>

#include "dspin/types.hpp"

namespace oracles {

using dspin::Mat2;
using dspin::Vec2;
using dspin::Vec3;

using ChartFn = std::function<Vec3(double, double)>;
using PathFn = std::function<Vec3(double)>;

inline Vec3 fd1_u(const ChartFn& f, double u, double v, double h = 1e-5) {
  return (8.0 * (f(u + h, v) - f(u - h, v)) - (f(u + 2 * h, v) - f(u - 2 * h, v))) / (12.0 * h);
}
inline Vec3 fd1_v(const ChartFn& f, double u, double v, double h = 1e-5) {
  return (8.0 * (f(u, v + h) - f(u, v - h)) - (f(u, v + 2 * h) - f(u, v - 2 * h))) / (12.0 * h);
}

inline Vec3 unit_normal(const ChartFn& f, double u, double v, double sign) {
  return sign * fd1_u(f, u, v).cross(fd1_v(f, u, v)).normalized();
}

/// Brute-force shape operator in the dN = -S dR convention: differentiates the
/// numerically-built unit normal against the chart tangents.
inline Mat2 fd_shape_operator(const ChartFn& f, double u, double v, double sign,
                              double h = 1e-5) {
  auto n = [&](double uu, double vv) { return unit_normal(f, uu, vv, sign); };
  const Vec3 nu = (n(u + h, v) - n(u - h, v)) / (2 * h);
  const Vec3 nv = (n(u, v + h) - n(u, v - h)) / (2 * h);
  const Vec3 ru = fd1_u(f, u, v), rv = fd1_v(f, u, v);
  Mat2 g;
  g << ru.dot(ru), ru.dot(rv), ru.dot(rv), rv.dot(rv);
  // dN(X) = -S X: project -dN onto the tangent basis
  Mat2 rhs;
  rhs << -nu.dot(ru), -nv.dot(ru), -nu.dot(rv), -nv.dot(rv);
  return g.inverse() * rhs;
}

struct FrenetOracle {
  double curvature;
  double torsion;
};

/// Curvature and torsion from fourth-order finite differences of a raw path.
inline FrenetOracle fd_frenet(const PathFn& r, double t, double h = 1e-4) {
  auto d1 = [&](double x) {
    return Vec3((8.0 * (r(x + h) - r(x - h)) - (r(x + 2 * h) - r(x - 2 * h))) / (12.0 * h));
  };
  const Vec3 v1 = d1(t);
  const Vec3 v2 = (d1(t + h) - d1(t - h)) / (2 * h);
  const Vec3 v3 = (d1(t + h) - 2.0 * d1(t) + d1(t - h)) / (h * h);
  const Vec3 cr = v1.cross(v2);
  FrenetOracle o;
  o.curvature = cr.norm() / std::pow(v1.norm(), 3);
  o.torsion = cr.dot(v3) / cr.squaredNorm();
  return o;
}

/// Christoffel symbols from finite differences of the metric built out of the
/// raw chart closure.
inline std::array<Mat2, 2> fd_christoffel(const ChartFn& f, double u, double v,
                                          double h = 1e-4) {
  auto metric = [&](double uu, double vv) {
    const Vec3 ru = fd1_u(f, uu, vv), rv = fd1_v(f, uu, vv);
    Mat2 g;
    g << ru.dot(ru), ru.dot(rv), ru.dot(rv), rv.dot(rv);
    return g;
  };
  const Mat2 g = metric(u, v);
  const Mat2 ginv = g.inverse();
  Mat2 dg[2];
  dg[0] = (metric(u + h, v) - metric(u - h, v)) / (2 * h);
  dg[1] = (metric(u, v + h) - metric(u, v - h)) / (2 * h);
  std::array<Mat2, 2> gam;
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

} // namespace oracles
