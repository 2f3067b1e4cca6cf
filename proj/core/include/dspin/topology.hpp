#pragma once

#include <vector>

#include "dspin/curve.hpp"
#include "dspin/types.hpp"

namespace dspin {

struct FluxReport {
  double boundary_rotation = 0;  // phi_N = closed integral of kappa_g ds
  double curvature_integral = 0; // integral of K dA over the declared region
  int euler_characteristic = 1;  // declared region topology
  double gb_residual = 0;        // phi_N + curvature_integral - 2 pi chi
  double flux_over_phi0 = 0;     // curvature_integral / (2 pi)
};

/// Closed integral of kappa_g ds by composite Simpson on the arclength grid.
double boundary_rotation_angle(const CurveOnSurface& curve, int quad_n);

/// Region on the chart declared by the closed chart image of a curve plus an
/// interior seed point; points are classified by the signed crossing count of
/// an axis-aligned ray against the chart polyline (winding rule), matched
/// against the seed's count. The region must sit on the B side (right of
/// traversal) of the curve for the Gauss-Bonnet residual to vanish.
struct RegionSpec {
  std::vector<Vec2> polyline; // chart image, consecutive points; implicitly closed
  Vec2 seed;
  int grid = 2048;            // quadrature rows
  bool whole_chart = false;   // ignore the polyline, integrate the full domain
  double u_lo = 0, u_hi = 0;  // integration window in u (rows span it)
  double v_lo = 0, v_hi = 0;
};

RegionSpec region_from_curve(const CurveOnSurface& curve, const Vec2& seed, int grid = 2048,
                             int boundary_samples = 4096);
RegionSpec region_whole_sphere(int grid = 2048);

/// Integral of K sqrt(g) du dv over the region: winding-classified inside
/// intervals per quadrature row, Gauss-Legendre along the ray axis, midpoint
/// across rows. Throws RegionNotResolved when the row structure churns.
double region_curvature_integral(const SurfacePatch& surface, const RegionSpec& region);

FluxReport gauss_bonnet_and_flux(const CurveOnSurface& curve, const RegionSpec& region,
                                 int euler_chi, int quad_n = 1024);

/// flux in units of Phi0 computed from SI constants (hbar K / 2e over h/2e),
/// for cross-checking the 1/(2 pi) unit identity.
double flux_over_phi0_si(double curvature_integral);

} // namespace dspin
