#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "dspin/surface.hpp"
#include "dspin/types.hpp"

namespace dspin {

struct FrenetSample {
  double s = 0;
  Vec3 tangent, normal, binormal;
  double curvature = 0; // kappa >= 0
  double torsion = 0;
};

struct DarbouxSample {
  double s = 0;
  Vec3 tangent;        // t
  Vec3 surface_normal; // N
  Vec3 tangent_normal; // B = t x N
  double theta = 0;    // unwrapped angle from Frenet n to N; NaN where kappa ~ 0
  double kappa_g = 0;  // (dt/ds) . B
  double kappa_n = 0;  // (dt/ds) . N
  double tau_g = 0;    // -(dN/ds) . B
  double gaussian = 0; // host K at the point
  double mean = 0;     // host M at the point
};

/// A regular curve on a SurfacePatch, sampled by arclength. The arclength
/// table and the frame-angle unwrap table are built once at construction and
/// are read-only afterwards, so sampling is safe to call concurrently.
class CurveOnSurface {
public:
  struct Closures {
    std::function<Vec2(double)> chart_point;          // t -> (u, v)
    std::function<Vec3(double)> position;             // t -> R^3 embedding
    std::function<Vec3(double)> d1, d2, d3;           // optional analytic derivatives
  };

  CurveOnSurface(std::shared_ptr<const SurfacePatch> surface, Closures closures, double t0,
                 double t1, bool closed, int n_samples = 4096);

  const SurfacePatch& surface() const { return *surface_; }
  std::shared_ptr<const SurfacePatch> surface_ptr() const { return surface_; }

  double t_begin() const { return t0_; }
  double t_end() const { return t1_; }
  bool closed() const { return closed_; }
  bool smoothly_closed() const { return smooth_closed_; }
  double length() const { return length_; }
  bool analytic_derivatives() const { return static_cast<bool>(closures_.d1); }

  Vec2 chart_point(double t) const { return closures_.chart_point(t); }
  Vec3 position(double t) const { return closures_.position(t); }
  Vec3 d1(double t) const;
  Vec3 d2(double t) const;
  Vec3 d3(double t) const;
  double speed(double t) const { return d1(t).norm(); }

  /// Monotone arclength map and its inverse (bisection + Newton refinement).
  double s_of_t(double t) const;
  double t_of_s(double s) const;

  Vec3 position_at_s(double s) const { return position(t_of_s(s)); }
  Vec2 chart_at_s(double s) const { return chart_point(t_of_s(s)); }

  FrenetSample frenet_sample(double s) const;
  DarbouxSample darboux_sample(double s) const;

  /// Oriented unit surface normal along the curve (analytic where the chart
  /// degenerates, e.g. a sphere pole crossing).
  Vec3 surface_normal(double t) const;

  /// Number of nodes in the arclength table.
  int table_size() const { return static_cast<int>(t_nodes_.size()); }

private:
  double wrap_s(double s) const;
  double theta_at(double s, const Vec3& frenet_n, const Vec3& frenet_b, const Vec3& N) const;
  void build_tables(int n_samples);

  std::shared_ptr<const SurfacePatch> surface_;
  Closures closures_;
  double t0_, t1_;
  bool closed_;
  bool smooth_closed_ = false;
  double length_ = 0;

  std::vector<double> t_nodes_;
  std::vector<double> s_nodes_;
  std::vector<double> theta_nodes_; // unwrapped; empty if curvature vanishes somewhere
  bool theta_valid_ = false;
};

enum class CatalogCurve {
  helix_const,
  helix_exp,
  helix_log,
  viviani_on_cylinder,
  viviani_on_sphere,
  latitude_circle,
};

struct CurveParams {
  double rho = 1.0;
  double c = 1.0;
  double f = 5.0;
  std::optional<double> r;     // sphere radius: viviani 2, latitude 1 by default
  double alpha = kPi / 3.0;    // latitude polar angle
};

struct CatalogCurveSpec {
  CatalogCurve kind = CatalogCurve::helix_const;
  CurveParams params;
  std::optional<std::pair<double, double>> phi_range; // default [0, 2*pi]
  bool reverse = false;
  int n_samples = 4096;
};

const char* catalog_curve_name(CatalogCurve kind);
std::optional<CatalogCurve> catalog_curve_from_name(const std::string& name);

std::shared_ptr<CurveOnSurface> make_catalog_curve(const CatalogCurveSpec& spec);

} // namespace dspin
