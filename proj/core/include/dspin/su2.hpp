#pragma once

#include <optional>
#include <vector>

#include "dspin/hamiltonian.hpp"
#include "dspin/types.hpp"

namespace dspin {

using SU2Operator = Mat2c; // 2x2 unitary with unit determinant
using Spinor = Vec2c;      // normalized two-component state

/// cos(angle/2) I + i sin(angle/2) sigma.axis_hat (axis normalized internally).
SU2Operator su2_exp(const Vec3& axis, double angle);

Mat2c pauli_dot(const Vec3& v); // v . (sigma_x, sigma_y, sigma_z)

double unitarity_defect(const SU2Operator& u); // ||U^dag U - I||
double det_defect(const SU2Operator& u);       // |det U - 1|

/// Spinor lift of a Bloch vector; global phase fixed by making the first
/// nonzero component real positive.
Spinor spinor_from_bloch(const Vec3& m);
Vec3 bloch_from_spinor(const Spinor& psi);

/// Discretized path-ordered propagator from arclength s1 to s2 (s2 < s1
/// reverses the traversal). Each segment contributes
/// exp((i/2) sigma.b_lab(s_mid) ds) sampled at the segment midpoint; the
/// factor nearest s2 is applied last (leftmost). An optional lab-fixed
/// extra_field adds to b_lab.
SU2Operator path_ordered_propagator(const CurveOnSurface& curve, double s1, double s2, int n,
                                    const std::optional<Vec3>& extra_field = std::nullopt);

/// Independent oracle: integrates dU/ds = (i/2)(sigma.b_lab) U with an
/// adaptive embedded Runge-Kutta pair and a polar unitary correction per step.
SU2Operator ode_propagator_oracle(const CurveOnSurface& curve, double s1, double s2, double tol,
                                  const std::optional<Vec3>& extra_field = std::nullopt);

struct AdiabaticSummary {
  double total_angle = 0; // Phi
  double phi_N = 0;       // integral of kappa_g
  double phi_q = 0;       // -integral of kappa_n
  double phi_s = 0;       // integral of tau_g
  Vec3 axis;              // (phi_s, phi_N, phi_q)/Phi in Darboux order (t, N, B)
};

/// Adiabatic propagator in the fixed abstract Darboux basis
/// (sigma_1, sigma_2, sigma_3) <-> (sigma_s, sigma_N, sigma_q); the component
/// integrals use composite Simpson with quad_n panels.
std::pair<SU2Operator, AdiabaticSummary> adiabatic_propagator(const CurveOnSurface& curve,
                                                              double s1, double s2, int quad_n);

Complex wilson_loop(const SU2Operator& u);

enum class Direction { forward, reverse };

struct TextureRecord {
  double s = 0;
  double t_par = 0; // curve parameter (phi for the catalog curves)
  Vec3 position;
  Vec3 tangent, surface_normal, tangent_normal;
  Vec3 b_lab;      // effective field at s (including any extra field)
  Vec3 m_lab;      // Bloch vector in lab axes
  Vec3 m_darboux;  // (m.t, m.N, m.B)
};

struct SpinTexture {
  std::vector<TextureRecord> records; // ascending s
  Direction direction = Direction::forward;
};

/// Bloch-vector evolution m(s_k) = <psi| U^dag sigma U |psi> on a uniform
/// arclength grid with grid_n intervals. `total_segments` controls the
/// path-ordering resolution across the whole span (at least grid_n).
/// Direction::reverse propagates from s = L down to 0; records stay ordered
/// by ascending s with m(L) equal to the initial state.
SpinTexture evolve_spin_texture(const CurveOnSurface& curve, const Vec3& initial_bloch,
                                int grid_n, Direction direction = Direction::forward,
                                int total_segments = 0,
                                const std::optional<Vec3>& extra_field = std::nullopt);

struct PrecessionResidual {
  double lab_law = 0;         // max || dm_lab/ds - m_lab x b_lab ||
  double darboux_doubled = 0; // max || dm_D/ds - 2 beta x m_D ||
};

/// Finite-difference residuals of the two candidate precession laws over a
/// texture. Both are always reported; only the lab-frame law is expected to
/// vanish. Throws GridTooCoarse when the grid cannot support the differencing.
PrecessionResidual precession_residual(const SpinTexture& texture);

} // namespace dspin
