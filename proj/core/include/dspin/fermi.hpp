#pragma once

#include <vector>

#include "dspin/curve.hpp"
#include "dspin/types.hpp"

namespace dspin {

struct GeodesicState {
  Vec2 point;    // chart (u, v)
  Vec2 velocity; // chart velocity, unit speed in the surface metric
  double q = 0;  // accumulated geodesic arclength
};

struct ShootOptions {
  double max_step = 5e-3;
  int min_steps = 64;
  double energy_tol = 1e-6; // unit-speed drift triggering StepTooLarge
};

/// Integrates the geodesic equation u''^a + Gamma^a_{bc} u'^b u'^c = 0 with
/// classical fixed-step RK4. `direction` is normalized in the surface metric.
/// Spherical charts hop to a rotated chart when the path nears a pole; the
/// returned state is expressed in the original chart.
GeodesicState geodesic_shoot_state(const SurfacePatch& surface, const Vec2& start,
                                   const Vec2& direction, double q,
                                   const ShootOptions& opt = {});

Vec2 geodesic_shoot(const SurfacePatch& surface, const Vec2& start, const Vec2& direction,
                    double q, const ShootOptions& opt = {});

/// g_ss(s, q) = ||d_s P(s,q)||^2 where P(s,q) shoots a geodesic of length q
/// from the curve point at arclength s along B(s); the s-derivative is a
/// Richardson-extrapolated central difference with step fd_step.
double fermi_metric_gss(const CurveOnSurface& curve, double s, double q, double fd_step = 0);

/// g_ss of the straight (extrinsic) offset P = r(s) + q B(s), for comparison
/// against the geodesic construction.
double straight_offset_gss(const CurveOnSurface& curve, double s, double q);

/// Finite-difference Gamma^q_{ss} of the Fermi chart at q = 0; equals kappa_g.
double fermi_christoffel_qss(const CurveOnSurface& curve, double s);

struct ExpansionPoint {
  double q = 0;
  double gss_numeric = 0;
  double gss_series = 0;
  double residual = 0;
};

struct ExpansionFit {
  std::vector<ExpansionPoint> points;
  double slope = 0;     // log-log fit of residual vs q
  double intercept = 0;
  bool at_floor = false; // residuals at rounding floor: expansion exact here
  double max_residual = 0;
};

/// Residual of g_ss against 1 - 2 kappa_g q + (kappa_g^2 - K) q^2 over a
/// geometric q grid, with the fitted log-log slope. Residuals at the rounding
/// floor are reported via at_floor rather than as an error.
ExpansionFit expansion_order_check(const CurveOnSurface& curve, double s,
                                   const std::vector<double>& q_grid);

std::vector<double> geometric_grid(double q_max, double q_min, int n);

} // namespace dspin
