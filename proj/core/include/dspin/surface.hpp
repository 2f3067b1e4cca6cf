#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "dspin/errors.hpp"
#include "dspin/types.hpp"

namespace dspin {

struct ChartFrame {
  Vec3 position;
  Vec3 d_u;
  Vec3 d_v;
  Vec3 normal; // unit, oriented
};

struct CurvatureReport {
  Mat2 first_form;     // [E F; F G]
  Mat2 second_form;    // [L M; M N], sign tied to the oriented normal
  Mat2 shape_operator; // S with dN = -S dR
  double gaussian = 0; // K = det S
  double mean = 0;     // M = tr S / 2
};

// Gamma^a_{bc}; christoffel[a](b, c), symmetric in (b, c)
using ChristoffelSymbols = std::array<Mat2, 2>;

struct ChartDomain {
  double u_min = -1e300, u_max = 1e300;
  double v_min = -1e300, v_max = 1e300;
  bool contains(double u, double v) const {
    return u >= u_min && u <= u_max && v >= v_min && v <= v_max;
  }
};

struct ChartTopology {
  bool u_periodic = false;
  double u_period = 0;
  bool v_periodic = false;
  double v_period = 0;
};

// Extra data kept for spherical charts so geodesic shooting can hop to a
// rotated chart near the poles.
struct SphereChartData {
  Vec3 center = Vec3::Zero();
  double radius = 1;
  double sign = +1;          // +1 outward normal
  Mat3 frame = Mat3::Identity(); // chart(u,v) = center + frame * radius*(sin u cos v, sin u sin v, cos u)
};

struct FdSteps {
  double first = 1e-5;  // central differences, one Richardson level
  double second = 1e-4;
};

/// A regular parametric chart (u,v) -> R^3 with an oriented unit normal.
/// Analytic derivative closures are used when present; otherwise central
/// finite differences with Richardson extrapolation.
class SurfacePatch {
public:
  using PointFn = std::function<Vec3(double, double)>;
  using ScalarFn = std::function<double(double, double)>;

  std::string name = "surface";
  PointFn chart;
  PointFn du_fn, dv_fn, duu_fn, duv_fn, dvv_fn; // optional analytic derivatives
  PointFn normal_fn;                            // optional oriented unit normal
  ScalarFn gaussian_fn, mean_fn;                // optional oriented curvatures
  ChartDomain domain;
  ChartTopology topology;
  double orientation = +1.0; // sign applied to du x dv when normal_fn is absent
  FdSteps fd;
  std::optional<SphereChartData> sphere;

  bool analytic_derivatives() const { return static_cast<bool>(du_fn); }

  Vec3 point(double u, double v) const { return chart(u, v); }
  Vec3 deriv_u(double u, double v) const;
  Vec3 deriv_v(double u, double v) const;
  Vec3 deriv_uu(double u, double v) const;
  Vec3 deriv_uv(double u, double v) const;
  Vec3 deriv_vv(double u, double v) const;

  /// Oriented unit normal; uses the analytic closure when available.
  Vec3 normal(double u, double v) const;

  /// Position, tangent basis and unit normal with domain/regularity checks.
  ChartFrame chart_eval(double u, double v) const;

  Mat2 first_form(double u, double v) const;
  CurvatureReport curvature_report(double u, double v) const;
  ChristoffelSymbols christoffel_symbols(double u, double v) const;

  /// K and M at a point, preferring analytic closures (valid even where the
  /// chart degenerates, e.g. sphere poles).
  double gaussian_at(double u, double v) const;
  double mean_at(double u, double v) const;
};

SurfacePatch make_plane(const Vec3& center = Vec3::Zero(),
                        const Vec3& e_u = Vec3::UnitX(),
                        const Vec3& e_v = Vec3::UnitY(),
                        double orientation = +1.0);

/// Cylinder of given radius with axis parallel to z through (center_x, center_y).
/// Chart (phi, z); outward normal for orientation = +1.
SurfacePatch make_cylinder(double radius, double center_x = 0.0, double center_y = 0.0,
                           double orientation = +1.0);

/// Sphere chart (theta, phi), theta in [0, pi]; outward normal for orientation = +1.
/// `frame` rotates the chart axes (used for pole-avoiding rotated charts).
SurfacePatch make_sphere(double radius, const Vec3& center = Vec3::Zero(),
                         double orientation = +1.0, const Mat3& frame = Mat3::Identity());

} // namespace dspin
