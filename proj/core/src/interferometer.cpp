#include "dspin/interferometer.hpp"

#include <atomic>
#include <cmath>

#include "dspin/parallel.hpp"

namespace dspin {

TransmissionReport transmission_matrix(const InterferometerSpec& spec) {
  const CurveOnSurface& curve = *spec.curve;
  if (!curve.closed()) fail(Errc::not_closed, "interferometer needs a closed curve");
  const double L = curve.length();
  const double s_in = curve.s_of_t(spec.phi_in);
  const double s_out = curve.s_of_t(spec.phi_out);

  TransmissionReport rep;
  // counterclockwise arm: parameter increasing from phi_in to phi_out
  if (s_out > s_in) {
    rep.u_ccw = path_ordered_propagator(curve, s_in, s_out,
                                        std::max(1, spec.n_steps), spec.extra_field);
  } else if (s_out < s_in) {
    // wraps through the seam
    const double frac = (L - s_in) / (L - s_in + s_out + 1e-300);
    const int n1 = std::max(1, static_cast<int>(std::lround(spec.n_steps * frac)));
    const int n2 = std::max(1, spec.n_steps - n1);
    rep.u_ccw = path_ordered_propagator(curve, 0.0, s_out, n2, spec.extra_field) *
                path_ordered_propagator(curve, s_in, L, n1, spec.extra_field);
  } else {
    rep.u_ccw = Mat2c::Identity();
  }

  // clockwise arm: parameter decreasing from phi_in through the seam to phi_out
  {
    const double len1 = s_in, len2 = L - s_out;
    if (len1 + len2 <= 0) {
      rep.u_cw = Mat2c::Identity();
    } else {
      const double frac = len1 / (len1 + len2);
      const int n1 = std::max(1, static_cast<int>(std::lround(spec.n_steps * frac)));
      const int n2 = std::max(1, spec.n_steps - n1);
      Mat2c u = Mat2c::Identity();
      if (len1 > 0) u = path_ordered_propagator(curve, s_in, 0.0, n1, spec.extra_field);
      if (len2 > 0) u = path_ordered_propagator(curve, L, s_out, n2, spec.extra_field) * u;
      rep.u_cw = u;
    }
  }

  Complex ph1(1, 0), ph2(1, 0);
  if (spec.include_dynamical_phase) {
    const double l_ccw = (s_out >= s_in) ? s_out - s_in : (L - s_in) + s_out;
    const double l_cw = L - l_ccw;
    ph1 = std::exp(Complex(0, spec.wavenumber * l_ccw));
    ph2 = std::exp(Complex(0, spec.wavenumber * l_cw));
  }
  rep.transmission = 0.5 * (ph1 * rep.u_ccw + ph2 * rep.u_cw);
  rep.conductance = (rep.transmission.adjoint() * rep.transmission).trace().real();
  return rep;
}

std::vector<double> conductance_sweep(const InterferometerSpec& proto,
                                      const std::vector<double>& phi_out_grid) {
  std::vector<double> g(phi_out_grid.size());
  parallel_for(static_cast<int>(phi_out_grid.size()), [&](int i) {
    InterferometerSpec spec = proto;
    spec.phi_out = phi_out_grid[i];
    g[i] = transmission_matrix(spec).conductance;
  });
  return g;
}

DirectionCheck direction_independence_check(const CurveOnSurface& curve,
                                            const Vec3& initial_bloch, int n_segments,
                                            int grid_records,
                                            const std::optional<Vec3>& extra_field) {
  if (!curve.closed()) fail(Errc::not_closed, "direction check needs a closed curve");
  const SpinTexture fw = evolve_spin_texture(curve, initial_bloch, grid_records,
                                             Direction::forward, n_segments, extra_field);
  const SpinTexture rv = evolve_spin_texture(curve, initial_bloch, grid_records,
                                             Direction::reverse, n_segments, extra_field);
  DirectionCheck out;
  for (std::size_t k = 0; k < fw.records.size(); ++k) {
    out.max_deviation =
        std::max(out.max_deviation, (fw.records[k].m_lab - rv.records[k].m_lab).norm());
  }
  out.closure_forward = (fw.records.back().m_lab - fw.records.front().m_lab).norm();
  out.closure_reverse = (rv.records.front().m_lab - rv.records.back().m_lab).norm();
  return out;
}

} // namespace dspin
