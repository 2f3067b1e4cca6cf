#pragma once

#include "dspin/curve.hpp"
#include "dspin/types.hpp"

namespace dspin {

// Units: hbar = 1, 2m = 1. All potentials are reported in these units.

struct BetaSample {
  double s = 0;
  Vec3 beta_darboux; // (tau_g, kappa_g, -kappa_n), components along (t, N, B)
  Vec3 b_lab;        // tau_g * t + kappa_g * N - kappa_n * B
  double magnitude = 0;
};

struct PotentialSample {
  double s = 0;
  double v_geometric = 0;        // V_g  = -(M^2 - K)
  double v_surface_geodesic = 0; // V_sg = -(kappa_g^2 + 2K)/4
};

BetaSample beta_field(const CurveOnSurface& curve, double s);
BetaSample beta_from_darboux(const DarbouxSample& d);
PotentialSample potentials(const CurveOnSurface& curve, double s);

/// |d(beta/|beta|)/ds| in Darboux components; 0 where beta vanishes.
double adiabaticity_rate(const CurveOnSurface& curve, double s);

/// Closed-form reference values published for the catalog curves, evaluated
/// verbatim as printed. Two of the printed forms are internally inconsistent
/// (see reference_flags); use closed_form_validated for the consistent values.
struct ClosedFormReference {
  Vec3 beta;    // (tau_g, kappa_g, -kappa_n)
  double v_sg = 0;
  double v_g = 0;
};

ClosedFormReference closed_form_reference(CatalogCurve id, const CurveParams& p, double phi);

/// Same values with the two documented inconsistencies repaired:
///  - helix_exp: the printed kappa_g misses a 1/f factor carried by the
///    matching connection coefficient and by the printed V_sg,
///  - viviani_on_sphere: the printed V_sg disagrees with -(kappa_g^2 + 2K)/4;
///    the validated value uses that formula with K = 1/(2 rho)^2.
ClosedFormReference closed_form_validated(CatalogCurve id, const CurveParams& p, double phi);

struct ReferenceFlag {
  std::string id;
  std::string curve;
  std::string detail;
};

/// The exactly-two known discrepancies in the published closed forms.
std::vector<ReferenceFlag> reference_flags();

} // namespace dspin
