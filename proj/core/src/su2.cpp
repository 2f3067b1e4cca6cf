#include "dspin/su2.hpp"

#include <cmath>

namespace dspin {

namespace {

const Complex kI(0.0, 1.0);

Mat2c pauli_x() {
  Mat2c m;
  m << 0, 1, 1, 0;
  return m;
}
Mat2c pauli_y() {
  Mat2c m;
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
Mat2c pauli_z() {
  Mat2c m;
  m << 1, 0, 0, -1;
  return m;
}

} // namespace

Mat2c pauli_dot(const Vec3& v) {
  Mat2c m;
  m << v.z(), Complex(v.x(), -v.y()), Complex(v.x(), v.y()), -v.z();
  return m;
}

SU2Operator su2_exp(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (n < 1e-300) {
    if (angle == 0.0) return Mat2c::Identity();
    fail(Errc::zero_axis, "su2_exp: zero axis with nonzero angle");
  }
  const Vec3 a = axis / n;
  const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
  Mat2c u = c * Mat2c::Identity() + kI * s * pauli_dot(a);
  return u;
}

double unitarity_defect(const SU2Operator& u) {
  return (u.adjoint() * u - Mat2c::Identity()).norm();
}

double det_defect(const SU2Operator& u) { return std::abs(u.determinant() - Complex(1, 0)); }

Spinor spinor_from_bloch(const Vec3& m) {
  const double n = m.norm();
  if (n < 1e-14) fail(Errc::zero_axis, "Bloch vector must be nonzero");
  const Vec3 u = m / n;
  const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
  const double phi = std::atan2(u.y(), u.x());
  Spinor psi;
  psi << std::cos(0.5 * theta), std::exp(kI * phi) * std::sin(0.5 * theta);
  if (std::abs(psi(0)) < 1e-15) psi << 0.0, 1.0; // pole: make the surviving component real
  return psi;
}

Vec3 bloch_from_spinor(const Spinor& psi) {
  Vec3 m;
  m.x() = (psi.adjoint() * pauli_x() * psi)(0).real();
  m.y() = (psi.adjoint() * pauli_y() * psi)(0).real();
  m.z() = (psi.adjoint() * pauli_z() * psi)(0).real();
  return m;
}

namespace {

Vec3 field_at(const CurveOnSurface& curve, double s, const std::optional<Vec3>& extra) {
  Vec3 b = beta_field(curve, s).b_lab;
  if (extra) b += *extra;
  return b;
}

} // namespace

SU2Operator path_ordered_propagator(const CurveOnSurface& curve, double s1, double s2, int n,
                                    const std::optional<Vec3>& extra_field) {
  if (n < 1) fail(Errc::config_invalid, "path ordering needs n >= 1 segments");
  if (s1 == s2) return Mat2c::Identity();
  const double ds = (s2 - s1) / n;
  Mat2c u = Mat2c::Identity();
  for (int j = 0; j < n; ++j) {
    const double smid = s1 + (j + 0.5) * ds;
    const Vec3 b = field_at(curve, smid, extra_field);
    const double mag = b.norm();
    if (mag * std::abs(ds) < 1e-300) continue;
    u = su2_exp(b / mag, mag * ds) * u; // factor nearest s2 applied last
  }
  return u;
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192,
                 kB5 = -2187.0 / 6784, kB6 = 11.0 / 84;
constexpr double kE1 = 35.0 / 384 - 5179.0 / 57600, kE3 = 500.0 / 1113 - 7571.0 / 16695,
                 kE4 = 125.0 / 192 - 393.0 / 640, kE5 = -2187.0 / 6784 + 92097.0 / 339200,
                 kE6 = 11.0 / 84 - 187.0 / 2100, kE7 = -1.0 / 40;

// one-term polar correction: U (U^dag U)^{-1/2} for U already near-unitary
Mat2c reunitarize(const Mat2c& u) {
  const Mat2c e = u.adjoint() * u - Mat2c::Identity();
  return u * (Mat2c::Identity() - 0.5 * e + 0.375 * e * e);
}

} // namespace

SU2Operator ode_propagator_oracle(const CurveOnSurface& curve, double s1, double s2, double tol,
                                  const std::optional<Vec3>& extra_field) {
  if (tol < 1e-12) tol = 1e-12;
  if (s1 == s2) return Mat2c::Identity();

  auto rhs = [&](double s, const Mat2c& u) -> Mat2c {
    return 0.5 * Complex(0, 1) * pauli_dot(field_at(curve, s, extra_field)) * u;
  };

  const double span = s2 - s1;
  double s = s1;
  double h = span / 64.0;
  Mat2c u = Mat2c::Identity();
  const double hmin = std::abs(span) * 1e-12;
  int guard = 0;

  while ((span > 0) ? (s < s2) : (s > s2)) {
    if (++guard > 2000000) fail(Errc::tolerance_not_met, "ode propagator: too many steps");
    if ((span > 0 && s + h > s2) || (span < 0 && s + h < s2)) h = s2 - s;

    const Mat2c k1 = rhs(s, u);
    const Mat2c k2 = rhs(s + kA21 * h, u + h * kA21 * k1);
    const Mat2c k3 = rhs(s + 0.3 * h, u + h * (kA31 * k1 + kA32 * k2));
    const Mat2c k4 = rhs(s + 0.8 * h, u + h * (kA41 * k1 + kA42 * k2 + kA43 * k3));
    const Mat2c k5 =
        rhs(s + 8.0 / 9.0 * h, u + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4));
    const Mat2c k6 =
        rhs(s + h, u + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5));
    const Mat2c u5 = u + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
    const Mat2c k7 = rhs(s + h, u5);
    const Mat2c err =
        h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);

    const double e = err.norm();
    const double limit = tol * std::max(1.0, u.norm());
    if (e <= limit || std::abs(h) <= hmin) {
      s += h;
      u = reunitarize(u5);
    }
    const double factor = (e > 0) ? 0.9 * std::pow(limit / e, 0.2) : 4.0;
    h *= std::clamp(factor, 0.2, 4.0);
    if (std::abs(h) < hmin) h = (span > 0 ? hmin : -hmin);
  }
  return u;
}

std::pair<SU2Operator, AdiabaticSummary> adiabatic_propagator(const CurveOnSurface& curve,
                                                              double s1, double s2, int quad_n) {
  if (quad_n < 64) quad_n = 64;
  if (quad_n % 2) ++quad_n;
  AdiabaticSummary sum;
  if (s1 == s2) {
    sum.axis = Vec3::Zero();
    return {Mat2c::Identity(), sum};
  }

  const double h = (s2 - s1) / quad_n;
  double ig = 0, in = 0, it = 0;
  for (int j = 0; j <= quad_n; ++j) {
    const DarbouxSample d = curve.darboux_sample(s1 + j * h);
    const double w = (j == 0 || j == quad_n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    ig += w * d.kappa_g;
    in += w * d.kappa_n;
    it += w * d.tau_g;
  }
  sum.phi_N = ig * h / 3.0;
  sum.phi_q = -in * h / 3.0;
  sum.phi_s = it * h / 3.0;
  sum.total_angle =
      std::sqrt(sum.phi_N * sum.phi_N + sum.phi_q * sum.phi_q + sum.phi_s * sum.phi_s);
  if (sum.total_angle < 1e-300) {
    sum.axis = Vec3::Zero();
    return {Mat2c::Identity(), sum};
  }
  sum.axis = Vec3(sum.phi_s, sum.phi_N, sum.phi_q) / sum.total_angle;
  return {su2_exp(sum.axis, sum.total_angle), sum};
}

Complex wilson_loop(const SU2Operator& u) { return u.trace(); }

SpinTexture evolve_spin_texture(const CurveOnSurface& curve, const Vec3& initial_bloch,
                                int grid_n, Direction direction, int total_segments,
                                const std::optional<Vec3>& extra_field) {
  if (grid_n < 2) fail(Errc::config_invalid, "texture grid needs at least 2 intervals");
  if (total_segments < grid_n) total_segments = std::max(grid_n, 8192);
  const int sub = (total_segments + grid_n - 1) / grid_n;

  const double L = curve.length();
  const Spinor psi0 = spinor_from_bloch(initial_bloch.normalized());

  SpinTexture tex;
  tex.direction = direction;
  tex.records.resize(grid_n + 1);

  Mat2c u = Mat2c::Identity();
  for (int k = 0; k <= grid_n; ++k) {
    // grid index in traversal order
    const int idx = (direction == Direction::forward) ? k : grid_n - k;
    const double s = L * idx / grid_n;
    if (k > 0) {
      const int prev = (direction == Direction::forward) ? idx - 1 : idx + 1;
      u = path_ordered_propagator(curve, L * prev / grid_n, s, sub, extra_field) * u;
    }
    const Spinor psi = u * psi0;

    TextureRecord rec;
    rec.s = s;
    // at the seam of a closed curve take the frame as the limit from below,
    // so curves with a tangent corner at the node report the incoming frame
    const double s_frame = (curve.closed() && idx == grid_n) ? L * (1.0 - 1e-12) : s;
    const double t = curve.t_of_s(std::min(s_frame, L));
    rec.t_par = t;
    rec.position = curve.position(t);
    const DarbouxSample d = curve.darboux_sample(s_frame);
    rec.tangent = d.tangent;
    rec.surface_normal = d.surface_normal;
    rec.tangent_normal = d.tangent_normal;
    rec.b_lab = beta_from_darboux(d).b_lab;
    if (extra_field) rec.b_lab += *extra_field;
    rec.m_lab = bloch_from_spinor(psi);
    rec.m_darboux =
        Vec3(rec.m_lab.dot(rec.tangent), rec.m_lab.dot(rec.surface_normal),
             rec.m_lab.dot(rec.tangent_normal));
    tex.records[idx] = rec;
  }
  return tex;
}

PrecessionResidual precession_residual(const SpinTexture& texture) {
  const auto& r = texture.records;
  if (r.size() < 5) fail(Errc::grid_too_coarse, "texture too coarse for differencing");
  PrecessionResidual out;
  for (std::size_t k = 1; k + 1 < r.size(); ++k) {
    const double ds = r[k + 1].s - r[k - 1].s;
    if (ds <= 0) fail(Errc::grid_too_coarse, "texture grid not strictly increasing");
    const Vec3 dm_lab = (r[k + 1].m_lab - r[k - 1].m_lab) / ds;
    const Vec3 law_lab = r[k].m_lab.cross(r[k].b_lab);
    out.lab_law = std::max(out.lab_law, (dm_lab - law_lab).norm());

    const Vec3 dm_d = (r[k + 1].m_darboux - r[k - 1].m_darboux) / ds;
    const Vec3 beta_d(r[k].b_lab.dot(r[k].tangent), r[k].b_lab.dot(r[k].surface_normal),
                      r[k].b_lab.dot(r[k].tangent_normal));
    const Vec3 law_d = 2.0 * beta_d.cross(r[k].m_darboux);
    out.darboux_doubled = std::max(out.darboux_doubled, (dm_d - law_d).norm());
  }
  return out;
}

} // namespace dspin
