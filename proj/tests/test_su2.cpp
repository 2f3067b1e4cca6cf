#include <doctest.h>

#include <cmath>

#include "dspin/su2.hpp"
#include "support/curves.hpp"

using namespace dspin;

TEST_SUITE_BEGIN("su2");

TEST_CASE("su2_exp closed forms") {
  SUBCASE("axis e_z, angle pi: diag(i, -i), trace 0") {
    const SU2Operator u = su2_exp(Vec3(0, 0, 1), kPi);
    CHECK(std::abs(u(0, 0) - Complex(0, 1)) < 1e-15);
    CHECK(std::abs(u(1, 1) - Complex(0, -1)) < 1e-15);
    CHECK(std::abs(u.trace()) < 1e-15);
  }
  SUBCASE("angle 0: identity") {
    CHECK((su2_exp(Vec3(0.3, -0.2, 0.9), 0.0) - Mat2c::Identity()).norm() < 1e-15);
  }
  SUBCASE("axis e_x, angle 2 pi: -I (double cover)") {
    CHECK((su2_exp(Vec3(1, 0, 0), kTwoPi) + Mat2c::Identity()).norm() < 1e-14);
  }
  SUBCASE("zero axis with nonzero angle") {
    CHECK_THROWS_AS(su2_exp(Vec3::Zero(), 1.0), Error);
  }
  SUBCASE("unitary with unit determinant for arbitrary input") {
    const Vec3 axes[] = {{1, 2, 3}, {-0.1, 0, 4}, {0.577, -0.577, 0.577}};
    for (const Vec3& a : axes) {
      for (double ang : {0.1, 2.0, -3.7, 11.0}) {
        const SU2Operator u = su2_exp(a, ang);
        CHECK(unitarity_defect(u) < 1e-12);
        CHECK(det_defect(u) < 1e-12);
      }
    }
  }
}

TEST_CASE("spinor lifts") {
  const Vec3 dirs[] = {{0, 0, 1}, {0, 0, -1}, {1, 0, 0}, {0.6, -0.48, 0.64}};
  for (const Vec3& m : dirs) {
    const Spinor psi = spinor_from_bloch(m);
    CHECK(std::abs(psi.squaredNorm() - 1.0) < 1e-12);
    CHECK((bloch_from_spinor(psi) - m.normalized()).norm() < 1e-12);
  }
}

TEST_CASE("path-ordered propagator") {
  auto c1 = testcurves::catalog(CatalogCurve::helix_const);
  const double L = c1->length();

  SUBCASE("constant field collapses to the closed form for any n") {
    const double mag = 1.0 / std::sqrt(2.0);
    for (int n : {1, 7, 500}) {
      const SU2Operator u = path_ordered_propagator(*c1, 0.5, 4.0, n);
      const SU2Operator ref = su2_exp(Vec3(0, 0, -1), mag * (4.0 - 0.5));
      CHECK((u - ref).norm() < 1e-10);
    }
  }
  SUBCASE("empty span gives the identity") {
    CHECK((path_ordered_propagator(*c1, 1.0, 1.0, 10) - Mat2c::Identity()).norm() == 0.0);
  }
  SUBCASE("unitarity accumulates slowly") {
    auto viv = testcurves::catalog(CatalogCurve::viviani_on_sphere);
    const SU2Operator u = path_ordered_propagator(*viv, 0.0, viv->length(), 10000);
    CHECK(unitarity_defect(u) < 1e-9);
    CHECK(det_defect(u) < 1e-9);
  }
  SUBCASE("composition and reversal") {
    auto viv = testcurves::catalog(CatalogCurve::viviani_on_cylinder);
    const double l = viv->length();
    const SU2Operator u01 = path_ordered_propagator(*viv, 0.0, 0.4 * l, 4000);
    const SU2Operator u12 = path_ordered_propagator(*viv, 0.4 * l, l, 6000);
    const SU2Operator u02 = path_ordered_propagator(*viv, 0.0, l, 10000);
    CHECK((u12 * u01 - u02).norm() < 1e-9);
    const SU2Operator u10 = path_ordered_propagator(*viv, 0.4 * l, 0.0, 4000);
    CHECK((u10 - u01.adjoint()).norm() < 1e-9);
  }
  SUBCASE("second-order self convergence on the viviani loop") {
    auto viv = testcurves::catalog(CatalogCurve::viviani_on_cylinder);
    const double l = viv->length();
    const SU2Operator ref = path_ordered_propagator(*viv, 0.0, l, 1 << 16);
    double prev_err = -1;
    for (int n : {1024, 2048, 4096}) {
      const double err = (path_ordered_propagator(*viv, 0.0, l, n) - ref).norm();
      if (prev_err > 0) {
        const double order = std::log2(prev_err / err);
        CHECK(order == doctest::Approx(2.0).epsilon(0.1));
      }
      prev_err = err;
    }
  }
  SUBCASE("every constant-axis propagator commutes with rotations about it") {
    const SU2Operator v = su2_exp(Vec3(0, 0, 1), 1.234);
    for (double s2 : {1.0, 3.0, L}) {
      const SU2Operator u = path_ordered_propagator(*c1, 0.0, s2, 257);
      CHECK((u * v - v * u).norm() < 1e-9);
    }
  }
}

TEST_CASE("ode oracle") {
  auto c1 = testcurves::catalog(CatalogCurve::helix_const);
  SUBCASE("matches the closed form on a constant-axis segment") {
    const SU2Operator u = ode_propagator_oracle(*c1, 0.2, 5.0, 1e-12);
    const SU2Operator ref = su2_exp(Vec3(0, 0, -1), (5.0 - 0.2) / std::sqrt(2.0));
    CHECK((u - ref).norm() < 1e-10);
  }
  SUBCASE("zero field gives the identity") {
    auto line = testcurves::straight_segment(1.0);
    CHECK((ode_propagator_oracle(*line, 0.0, 1.0, 1e-10) - Mat2c::Identity()).norm() < 1e-12);
  }
  SUBCASE("cross-method agreement on the viviani-sphere loop") {
    auto viv = testcurves::catalog(CatalogCurve::viviani_on_sphere);
    const double l = viv->length();
    const SU2Operator a = ode_propagator_oracle(*viv, 0.0, l, 1e-10);
    const SU2Operator b = path_ordered_propagator(*viv, 0.0, l, 100000);
    CHECK((a - b).norm() < 1e-6);
  }
  SUBCASE("reversed span is the adjoint") {
    auto viv = testcurves::catalog(CatalogCurve::viviani_on_cylinder);
    const SU2Operator a = ode_propagator_oracle(*viv, 0.0, 2.0, 1e-11);
    const SU2Operator b = ode_propagator_oracle(*viv, 2.0, 0.0, 1e-11);
    CHECK((a.adjoint() - b).norm() < 1e-9);
  }
}

TEST_CASE("adiabatic propagator") {
  SUBCASE("helix segment phi in [0, pi]: Phi = pi, axis (-1, 0, 1)/sqrt(2)") {
    auto c1 = testcurves::catalog(CatalogCurve::helix_const);
    const double s1 = 0.0, s2 = c1->s_of_t(kPi); // = pi sqrt(2)
    const auto [u, sum] = adiabatic_propagator(*c1, s1, s2, 256);
    CHECK(sum.total_angle == doctest::Approx(kPi).epsilon(1e-9));
    CHECK((sum.axis - Vec3(-1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0))).norm() < 1e-9);
    CHECK(std::abs(wilson_loop(u)) < 1e-12); // tr = 2 cos(pi/2) = 0
    CHECK(std::abs(sum.phi_s + kPi / std::sqrt(2.0)) < 1e-9);
    CHECK(std::abs(sum.phi_q - kPi / std::sqrt(2.0)) < 1e-9);
  }
  SUBCASE("empty segment") {
    auto c1 = testcurves::catalog(CatalogCurve::helix_const);
    const auto [u, sum] = adiabatic_propagator(*c1, 1.0, 1.0, 64);
    CHECK(sum.total_angle == 0.0);
    CHECK((u - Mat2c::Identity()).norm() == 0.0);
  }
  SUBCASE("latitude loop: phi_N = 2 pi cos(alpha)") {
    CatalogCurveSpec spec;
    spec.kind = CatalogCurve::latitude_circle;
    spec.params.alpha = kPi / 3;
    auto lat = make_catalog_curve(spec);
    const auto [u, sum] = adiabatic_propagator(*lat, 0.0, lat->length(), 512);
    CHECK(sum.phi_N == doctest::Approx(kTwoPi * std::cos(kPi / 3)).epsilon(1e-8));
  }
  SUBCASE("trace identity tr U_ad = 2 cos(Phi/2) holds to rounding") {
    auto viv = testcurves::catalog(CatalogCurve::viviani_on_sphere);
    const auto [u, sum] = adiabatic_propagator(*viv, 0.0, viv->length(), 512);
    CHECK(std::abs(wilson_loop(u).real() - 2.0 * std::cos(0.5 * sum.total_angle)) < 1e-12);
    CHECK(std::abs(wilson_loop(u).imag()) < 1e-12);
    CHECK(std::abs(sum.axis.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("wilson loop values") {
  CHECK(wilson_loop(su2_exp(Vec3(0, 1, 0), 0.0)).real() == doctest::Approx(2.0));
  CHECK(wilson_loop(su2_exp(Vec3(0, 1, 0), kTwoPi)).real() == doctest::Approx(-2.0));
}

TEST_CASE("spin textures") {
  SUBCASE("zero field: constant Bloch vector") {
    auto line = testcurves::straight_segment(2.0);
    const SpinTexture tex = evolve_spin_texture(*line, Vec3(0.6, 0.0, 0.8), 16, Direction::forward, 64);
    for (const auto& r : tex.records) CHECK((r.m_lab - Vec3(0.6, 0.0, 0.8)).norm() < 1e-12);
  }
  SUBCASE("helix: precession about e_z at rate 1/sqrt(2)") {
    CatalogCurveSpec spec; // phi in [0, 2 pi]
    spec.kind = CatalogCurve::helix_const;
    auto c1 = make_catalog_curve(spec);
    const SpinTexture tex =
        evolve_spin_texture(*c1, Vec3(1, 0, 0), 512, Direction::forward, 8192);
    // after arclength sqrt(2) pi the vector has rotated by pi about e_z
    const double target_s = std::sqrt(2.0) * kPi;
    std::size_t k = static_cast<std::size_t>(std::round(target_s / (c1->length() / 512)));
    CHECK(std::abs(tex.records[k].s - target_s) < 1e-9);
    CHECK((tex.records[k].m_lab - Vec3(-1, 0, 0)).norm() < 1e-8);
    // norm preserved everywhere
    for (const auto& r : tex.records) CHECK(std::abs(r.m_lab.norm() - 1.0) < 1e-9);
  }
  SUBCASE("initial state along the field axis stays put") {
    auto c1 = testcurves::catalog(CatalogCurve::helix_const);
    const SpinTexture tex =
        evolve_spin_texture(*c1, Vec3(0, 0, -1), 64, Direction::forward, 2048);
    for (const auto& r : tex.records) CHECK((r.m_lab - Vec3(0, 0, -1)).norm() < 1e-10);
  }
  SUBCASE("darboux components are the frame projection") {
    auto viv = testcurves::catalog(CatalogCurve::viviani_on_sphere);
    const SpinTexture tex =
        evolve_spin_texture(*viv, Vec3(1, 0, 0), 64, Direction::forward, 4096);
    for (const auto& r : tex.records) {
      const Vec3 proj(r.m_lab.dot(r.tangent), r.m_lab.dot(r.surface_normal),
                      r.m_lab.dot(r.tangent_normal));
      CHECK((proj - r.m_darboux).norm() < 1e-12);
    }
  }
}

TEST_CASE("precession residuals") {
  SUBCASE("lab-frame law holds on a fine helix grid") {
    auto c1 = testcurves::catalog(CatalogCurve::helix_const);
    const SpinTexture tex =
        evolve_spin_texture(*c1, Vec3(1, 0, 0), 8192, Direction::forward, 8192);
    const PrecessionResidual r = precession_residual(tex);
    CHECK(r.lab_law < 1e-6);
    // the doubled Darboux-frame law does not hold: constant Darboux components
    CHECK(r.darboux_doubled > 0.5);
  }
  SUBCASE("zero field: both residuals vanish") {
    auto line = testcurves::straight_segment(2.0);
    const SpinTexture tex =
        evolve_spin_texture(*line, Vec3(0, 1, 0), 256, Direction::forward, 256);
    const PrecessionResidual r = precession_residual(tex);
    CHECK(r.lab_law < 1e-10);
    CHECK(r.darboux_doubled < 1e-10);
  }
  SUBCASE("viviani on sphere: lab law survives, doubled law reported") {
    auto viv = testcurves::catalog(CatalogCurve::viviani_on_sphere);
    const SpinTexture tex =
        evolve_spin_texture(*viv, Vec3(1, 0, 0), 8192, Direction::forward, 65536);
    const PrecessionResidual r = precession_residual(tex);
    CHECK(r.lab_law < 1e-5);
    CHECK(r.darboux_doubled > 1e-2);
  }
  SUBCASE("coarse grids are rejected") {
    auto c1 = testcurves::catalog(CatalogCurve::helix_const);
    SpinTexture tex = evolve_spin_texture(*c1, Vec3(1, 0, 0), 16, Direction::forward, 64);
    tex.records.resize(3);
    CHECK_THROWS_AS(precession_residual(tex), Error);
  }
}

TEST_SUITE_END();
