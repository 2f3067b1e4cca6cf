#pragma once

#include <optional>
#include <vector>

#include "dspin/su2.hpp"

namespace dspin {

/// Two-arm spin interferometer on a closed curve. Junctions are ideal
/// symmetric reflectionless 50/50 splitters: T = (U_ccw e^{i chi1} +
/// U_cw e^{i chi2}) / 2 with arm dynamical phases chi = k L_arm only when
/// enabled, so G = Tr(T^dag T) lies in [0, 2].
struct InterferometerSpec {
  const CurveOnSurface* curve = nullptr;
  double phi_in = 0;  // junction positions in curve parameter
  double phi_out = 0;
  int n_steps = 16384; // path-ordering segments per arm
  bool include_dynamical_phase = false;
  double wavenumber = 0;
  std::optional<Vec3> extra_field;
};

struct TransmissionReport {
  Mat2c transmission;
  double conductance = 0; // e^2/h units
  SU2Operator u_ccw, u_cw;
};

TransmissionReport transmission_matrix(const InterferometerSpec& spec);

/// G(phi_out) over a grid; points are evaluated independently (parallel over
/// DSPIN_THREADS workers), results ordered by the grid.
std::vector<double> conductance_sweep(const InterferometerSpec& proto,
                                      const std::vector<double>& phi_out_grid);

struct DirectionCheck {
  double max_deviation = 0;    // max over the grid of ||m_ccw - m_cw||
  double closure_forward = 0;  // ||m_fw(L) - m_fw(0)||
  double closure_reverse = 0;  // ||m_rev(0) - m_rev(L)||
};

/// Propagates the same initial Bloch vector around a closed curve in both
/// directions and reports the pointwise deviation and the closure defects.
DirectionCheck direction_independence_check(const CurveOnSurface& curve,
                                            const Vec3& initial_bloch, int n_segments,
                                            int grid_records = 256,
                                            const std::optional<Vec3>& extra_field = std::nullopt);

} // namespace dspin
