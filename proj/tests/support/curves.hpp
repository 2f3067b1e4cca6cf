#pragma once

// Ad-hoc curves used across the test suites.

#include <memory>

#include "dspin/curve.hpp"

namespace testcurves {

using namespace dspin;

/// Circle of radius R in the z = 0 plane, counterclockwise seen from +z.
/// With plane normal +z this gives kappa_g = -1/R (offset along B moves
/// outward).
inline std::shared_ptr<CurveOnSurface> plane_circle(double R, int n_samples = 4096) {
  auto surf = std::make_shared<SurfacePatch>(make_plane());
  CurveOnSurface::Closures cl;
  cl.chart_point = [R](double t) { return Vec2(R * std::cos(t), R * std::sin(t)); };
  cl.position = [R](double t) { return Vec3(R * std::cos(t), R * std::sin(t), 0); };
  cl.d1 = [R](double t) { return Vec3(-R * std::sin(t), R * std::cos(t), 0); };
  cl.d2 = [R](double t) { return Vec3(-R * std::cos(t), -R * std::sin(t), 0); };
  cl.d3 = [R](double t) { return Vec3(R * std::sin(t), -R * std::cos(t), 0); };
  return std::make_shared<CurveOnSurface>(surf, std::move(cl), 0.0, kTwoPi, true, n_samples);
}

/// Circle of radius R traversed clockwise seen from +z: kappa_g = +1/R.
inline std::shared_ptr<CurveOnSurface> plane_circle_cw(double R, int n_samples = 4096) {
  auto surf = std::make_shared<SurfacePatch>(make_plane());
  CurveOnSurface::Closures cl;
  cl.chart_point = [R](double t) { return Vec2(R * std::cos(t), -R * std::sin(t)); };
  cl.position = [R](double t) { return Vec3(R * std::cos(t), -R * std::sin(t), 0); };
  cl.d1 = [R](double t) { return Vec3(-R * std::sin(t), -R * std::cos(t), 0); };
  cl.d2 = [R](double t) { return Vec3(-R * std::cos(t), R * std::sin(t), 0); };
  cl.d3 = [R](double t) { return Vec3(R * std::sin(t), R * std::cos(t), 0); };
  return std::make_shared<CurveOnSurface>(surf, std::move(cl), 0.0, kTwoPi, true, n_samples);
}

/// Straight unit-speed segment in the plane.
inline std::shared_ptr<CurveOnSurface> straight_segment(double length = 1.0,
                                                        int n_samples = 256) {
  auto surf = std::make_shared<SurfacePatch>(make_plane());
  CurveOnSurface::Closures cl;
  cl.chart_point = [](double t) { return Vec2(t, 0.0); };
  cl.position = [](double t) { return Vec3(t, 0.0, 0.0); };
  cl.d1 = [](double) { return Vec3(1, 0, 0); };
  cl.d2 = [](double) { return Vec3(0, 0, 0); };
  cl.d3 = [](double) { return Vec3(0, 0, 0); };
  return std::make_shared<CurveOnSurface>(surf, std::move(cl), 0.0, length, false, n_samples);
}

inline std::shared_ptr<CurveOnSurface> catalog(CatalogCurve kind) {
  CatalogCurveSpec spec;
  spec.kind = kind;
  return make_catalog_curve(spec);
}

} // namespace testcurves
