#include <doctest.h>

#include <cmath>

#include "dspin/hamiltonian.hpp"
#include "support/curves.hpp"

using namespace dspin;

TEST_SUITE_BEGIN("hamiltonian");

TEST_CASE("beta field") {
  SUBCASE("helix c = rho = 1: beta_darboux = (-1/2, 0, 1/2), b_lab = -e_z/sqrt(2)") {
    auto c1 = testcurves::catalog(CatalogCurve::helix_const);
    for (double s : {0.1, 3.0, 7.7}) {
      const BetaSample b = beta_field(*c1, s);
      CHECK((b.beta_darboux - Vec3(-0.5, 0.0, 0.5)).norm() < 1e-8);
      CHECK((b.b_lab - Vec3(0, 0, -1.0 / std::sqrt(2.0))).norm() < 1e-8);
      CHECK(b.magnitude == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    }
  }
  SUBCASE("viviani on cylinder at phi = pi: beta = (0, +-1/2, 1)") {
    auto viv = testcurves::catalog(CatalogCurve::viviani_on_cylinder);
    const BetaSample b = beta_field(*viv, viv->s_of_t(kPi));
    CHECK(std::abs(b.beta_darboux.x()) < 1e-8);
    CHECK(std::abs(b.beta_darboux.y()) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(b.beta_darboux.z() == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("straight line on a plane: beta = 0") {
    auto line = testcurves::straight_segment(1.0);
    const BetaSample b = beta_field(*line, 0.5);
    CHECK(b.magnitude < 1e-10);
  }
  SUBCASE("lab and Darboux representations have equal norms") {
    auto viv = testcurves::catalog(CatalogCurve::viviani_on_sphere);
    for (int k = 1; k < 9; ++k) {
      const BetaSample b = beta_field(*viv, viv->length() * k / 9.3);
      CHECK(std::abs(b.beta_darboux.norm() - b.b_lab.norm()) < 1e-10);
      CHECK(b.magnitude * b.magnitude ==
            doctest::Approx(b.beta_darboux.squaredNorm()).epsilon(1e-10));
    }
  }
}

TEST_CASE("potentials") {
  SUBCASE("helix family: V_g = -1/4, V_sg = 0 for constant pitch") {
    auto c1 = testcurves::catalog(CatalogCurve::helix_const);
    const PotentialSample p = potentials(*c1, 1.0);
    CHECK(p.v_geometric == doctest::Approx(-0.25).epsilon(1e-10));
    CHECK(std::abs(p.v_surface_geodesic) < 1e-12);
  }
  SUBCASE("viviani on cylinder at phi = pi: V_sg = -1/16") {
    auto viv = testcurves::catalog(CatalogCurve::viviani_on_cylinder);
    const PotentialSample p = potentials(*viv, viv->s_of_t(kPi));
    CHECK(p.v_surface_geodesic == doctest::Approx(-1.0 / 16.0).epsilon(1e-8));
  }
  SUBCASE("viviani on sphere: V_g = 0 everywhere") {
    auto viv = testcurves::catalog(CatalogCurve::viviani_on_sphere);
    for (int k = 0; k < 8; ++k) {
      const PotentialSample p = potentials(*viv, viv->length() * k / 8.3);
      CHECK(std::abs(p.v_geometric) < 1e-12);
    }
  }
}

TEST_CASE("closed-form catalog references") {
  SUBCASE("helix_exp V_sg at phi = 0 equals -1/800") {
    const CurveParams p;
    const ClosedFormReference r = closed_form_reference(CatalogCurve::helix_exp, p, 0.0);
    CHECK(r.v_sg == doctest::Approx(-1.0 / 800.0).epsilon(1e-12));
  }
  SUBCASE("helix_log V_sg at phi = 0 equals -0.00125") {
    const CurveParams p;
    const ClosedFormReference r = closed_form_reference(CatalogCurve::helix_log, p, 0.0);
    CHECK(r.v_sg == doctest::Approx(-0.00125).epsilon(1e-12));
  }
  SUBCASE("viviani cylinder beta at phi = 0 is (-1/2, 0, 1/2)") {
    const CurveParams p;
    const ClosedFormReference r =
        closed_form_reference(CatalogCurve::viviani_on_cylinder, p, 0.0);
    CHECK((r.beta - Vec3(-0.5, 0.0, 0.5)).norm() < 1e-12);
  }
  SUBCASE("unknown curve is rejected") {
    CHECK_THROWS_AS(closed_form_reference(CatalogCurve::latitude_circle, CurveParams{}, 0.0),
                    Error);
  }
}

TEST_CASE("numeric pipeline vs closed forms over a 256-point grid") {
  const std::vector<CatalogCurve> curves = {
      CatalogCurve::helix_const, CatalogCurve::helix_exp, CatalogCurve::helix_log,
      CatalogCurve::viviani_on_cylinder, CatalogCurve::viviani_on_sphere};
  for (CatalogCurve kind : curves) {
    auto c = testcurves::catalog(kind);
    const CurveParams params;
    for (int k = 0; k <= 256; ++k) {
      const double phi = kTwoPi * k / 256.0;
      const double s = std::min(c->s_of_t(phi), c->length());
      const DarbouxSample d = c->darboux_sample(s);
      const ClosedFormReference ref = closed_form_validated(kind, params, phi);
      CHECK(std::abs(d.kappa_n - (-ref.beta.z())) < 1e-6);
      CHECK(std::abs(std::abs(d.kappa_g) - std::abs(ref.beta.y())) < 1e-6);
      CHECK(std::abs(std::abs(d.tau_g) - std::abs(ref.beta.x())) < 1e-6);
      if (kind != CatalogCurve::viviani_on_sphere) {
        const PotentialSample p = potentials(*c, s);
        CHECK(std::abs(p.v_surface_geodesic - ref.v_sg) < 1e-6);
      }
    }
  }
}

TEST_CASE("documented discrepancies in the printed forms") {
  SUBCASE("helix_exp printed kappa_g is f times the consistent value") {
    const CurveParams p;
    for (double phi : {0.0, 1.0, 4.0}) {
      const ClosedFormReference printed =
          closed_form_reference(CatalogCurve::helix_exp, p, phi);
      const ClosedFormReference fixed =
          closed_form_validated(CatalogCurve::helix_exp, p, phi);
      CHECK(printed.beta.y() == doctest::Approx(fixed.beta.y() * p.f).epsilon(1e-12));
      // the printed V_sg already matches the consistent kappa_g: V_sg = -kappa_g^2/4
      CHECK(printed.v_sg ==
            doctest::Approx(-0.25 * fixed.beta.y() * fixed.beta.y()).epsilon(1e-10));
    }
  }
  SUBCASE("viviani sphere printed V_sg disagrees with -(kappa_g^2 + 2K)/4 by K/4") {
    const CurveParams p;
    for (double phi : {0.0, kPi / 2, kPi}) {
      const ClosedFormReference printed =
          closed_form_reference(CatalogCurve::viviani_on_sphere, p, phi);
      const ClosedFormReference fixed =
          closed_form_validated(CatalogCurve::viviani_on_sphere, p, phi);
      CHECK(fixed.v_sg - printed.v_sg == doctest::Approx(-1.0 / 16.0).epsilon(1e-9));
    }
  }
  SUBCASE("exactly two flags, no others") {
    const auto flags = reference_flags();
    REQUIRE(flags.size() == 2);
    CHECK(flags[0].id == "helix_exp_kappa_g_scale");
    CHECK(flags[1].id == "viviani_sphere_vsg_formula");
  }
}

TEST_CASE("connection coefficient consistency") {
  // the sigma_N coefficient of the tangential connection is -(i/2) kappa_g,
  // i.e. -(i/2) times the second beta component, for every sample
  auto viv = testcurves::catalog(CatalogCurve::viviani_on_cylinder);
  for (int k = 1; k < 9; ++k) {
    const double s = viv->length() * k / 9.3;
    const DarbouxSample d = viv->darboux_sample(s);
    const BetaSample b = beta_field(*viv, s);
    CHECK(b.beta_darboux.y() == doctest::Approx(d.kappa_g).epsilon(1e-12));
  }
}

TEST_CASE("adiabaticity meter") {
  auto c1 = testcurves::catalog(CatalogCurve::helix_const);
  CHECK(adiabaticity_rate(*c1, 2.0) < 1e-8); // constant direction
  auto c2 = testcurves::catalog(CatalogCurve::helix_exp);
  const double rate = adiabaticity_rate(*c2, 2.0);
  CHECK(rate > 1e-4);
  CHECK(rate < 1.0); // slowly varying on the catalog
}

TEST_SUITE_END();
