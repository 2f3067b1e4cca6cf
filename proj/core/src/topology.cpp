#include "dspin/topology.hpp"

#include <algorithm>
#include <cmath>

namespace dspin {

double boundary_rotation_angle(const CurveOnSurface& curve, int quad_n) {
  if (!curve.closed()) fail(Errc::not_closed, "boundary rotation needs a closed curve");
  if (quad_n < 128) quad_n = 128;
  if (quad_n % 2) ++quad_n;
  const double L = curve.length();
  const double h = L / quad_n;
  double acc = 0;
  for (int j = 0; j <= quad_n; ++j) {
    // sample the seam from below so curves with a node corner keep the
    // incoming-branch value at s = L
    const double s = (j == quad_n) ? L * (1.0 - 1e-12) : j * h;
    const double w = (j == 0 || j == quad_n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    acc += w * curve.darboux_sample(s).kappa_g;
  }
  return acc * h / 3.0;
}

namespace {

// Orientation of the classification machinery: rays run along the chart's
// non-periodic axis ("x"), crossings are detected against the other axis
// ("y") with periodic wrap when the chart calls for it.
struct RayFrame {
  bool ray_along_u = true;
  bool y_periodic = false;
  double y_period = 0;
};

RayFrame ray_frame(const SurfacePatch& surf) {
  RayFrame f;
  if (surf.topology.u_periodic && !surf.topology.v_periodic) {
    f.ray_along_u = false; // cylinder-like: ray along v, wrap in u
    f.y_periodic = true;
    f.y_period = surf.topology.u_period;
  } else {
    f.ray_along_u = true; // sphere chart: ray along theta, wrap in phi
    f.y_periodic = surf.topology.v_periodic;
    f.y_period = surf.topology.v_period;
  }
  return f;
}

double wrap_delta(double d, const RayFrame& f) {
  if (!f.y_periodic) return d;
  return std::remainder(d, f.y_period);
}

struct Crossing {
  double x;
  int sign;
};

// signed crossings of the ray line y = y0 with the implicitly closed polyline
void row_crossings(const std::vector<Vec2>& poly, const RayFrame& f, double y0,
                   std::vector<Crossing>& out) {
  out.clear();
  const std::size_t n = poly.size();
  auto coords = [&](const Vec2& p) {
    return f.ray_along_u ? std::pair<double, double>(p.x(), p.y())
                         : std::pair<double, double>(p.y(), p.x());
  };
  for (std::size_t i = 0; i < n; ++i) {
    const auto [xa, ya] = coords(poly[i]);
    const auto [xb, yb] = coords(poly[(i + 1) % n]);
    const double dy = wrap_delta(yb - ya, f);
    if (dy == 0.0) continue;
    const double del = wrap_delta(y0 - ya, f);
    bool hit;
    int sign;
    if (dy > 0) { // half-open [a, b)
      hit = del >= 0.0 && del < dy;
      sign = +1;
    } else {
      hit = del <= 0.0 && del > dy;
      sign = -1;
    }
    if (!hit) continue;
    out.push_back({xa + (xb - xa) * (del / dy), sign});
  }
  std::sort(out.begin(), out.end(), [](const Crossing& a, const Crossing& b) { return a.x < b.x; });
}

// signed count of crossings strictly to the +x side of x0
int count_beyond(const std::vector<Crossing>& cr, double x0) {
  int c = 0;
  for (const auto& k : cr)
    if (k.x > x0) c += k.sign;
  return c;
}

// 16-point Gauss-Legendre
constexpr double kQx[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                           0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                           0.9445750230732326, 0.9894009349916499};
constexpr double kQw[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                           0.1495959888165767, 0.1316886384491766, 0.1181945319615184,
                           0.0861901615319533, 0.0271524594117541};

template <typename F>
double gl16(const F& fn, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0;
  for (int i = 0; i < 8; ++i)
    acc += kQw[i] * (fn(mid + half * kQx[i]) + fn(mid - half * kQx[i]));
  return acc * half;
}

} // namespace

RegionSpec region_from_curve(const CurveOnSurface& curve, const Vec2& seed, int grid,
                             int boundary_samples) {
  if (!curve.closed()) fail(Errc::not_closed, "region boundary must be a closed curve");
  RegionSpec r;
  r.seed = seed;
  r.grid = grid;
  r.polyline.reserve(boundary_samples);
  const double t0 = curve.t_begin(), t1 = curve.t_end();
  for (int i = 0; i < boundary_samples; ++i)
    r.polyline.push_back(curve.chart_point(t0 + (t1 - t0) * i / boundary_samples));

  const SurfacePatch& surf = curve.surface();
  const RayFrame f = ray_frame(surf);

  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto absorb = [&](const Vec2& p) {
    const double x = f.ray_along_u ? p.x() : p.y();
    const double y = f.ray_along_u ? p.y() : p.x();
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  };
  for (const auto& p : r.polyline) absorb(p);
  absorb(seed);

  // ray-axis window: clip to the chart domain where it is bounded
  const auto& dom = surf.domain;
  const double dom_lo = f.ray_along_u ? dom.u_min : dom.v_min;
  const double dom_hi = f.ray_along_u ? dom.u_max : dom.v_max;
  double xlo = xmin - 0.01 * (xmax - xmin + 1e-9);
  double xhi = xmax + 0.01 * (xmax - xmin + 1e-9);
  xlo = std::max(xlo, dom_lo);
  xhi = std::min(xhi, dom_hi);
  if (dom_hi - dom_lo < 1e6) { // bounded chart axis: cover it fully
    xlo = dom_lo;
    xhi = dom_hi;
  }

  double ylo, yhi;
  if (f.y_periodic) {
    ylo = ymin;
    yhi = ymin + f.y_period;
  } else {
    const double pad = 0.01 * (ymax - ymin + 1e-9);
    ylo = ymin - pad;
    yhi = ymax + pad;
  }

  if (f.ray_along_u) {
    r.u_lo = xlo;
    r.u_hi = xhi;
    r.v_lo = ylo;
    r.v_hi = yhi;
  } else {
    r.u_lo = ylo;
    r.u_hi = yhi;
    r.v_lo = xlo;
    r.v_hi = xhi;
  }
  return r;
}

RegionSpec region_whole_sphere(int grid) {
  RegionSpec r;
  r.whole_chart = true;
  r.grid = grid;
  r.u_lo = 0;
  r.u_hi = kPi;
  r.v_lo = 0;
  r.v_hi = kTwoPi;
  r.seed = Vec2(kPi / 2, 0);
  return r;
}

double region_curvature_integral(const SurfacePatch& surface, const RegionSpec& region) {
  auto density = [&](double u, double v) {
    const Mat2 g = surface.first_form(u, v);
    const double det = g.determinant();
    if (det <= 0) return 0.0;
    return surface.gaussian_at(u, v) * std::sqrt(det);
  };

  const RayFrame f = ray_frame(surface);
  const double xlo = f.ray_along_u ? region.u_lo : region.v_lo;
  const double xhi = f.ray_along_u ? region.u_hi : region.v_hi;
  const double ylo = f.ray_along_u ? region.v_lo : region.u_lo;
  const double yhi = f.ray_along_u ? region.v_hi : region.u_hi;
  const int rows = std::max(region.grid, 16);
  const double hy = (yhi - ylo) / rows;

  auto f_uv = [&](double x, double y) {
    return f.ray_along_u ? density(x, y) : density(y, x);
  };

  if (region.whole_chart) {
    double acc = 0, comp = 0;
    for (int j = 0; j < rows; ++j) {
      const double y = ylo + (j + 0.5) * hy;
      const double val = gl16([&](double x) { return f_uv(x, y); }, xlo, xhi) * hy;
      const double t = acc + val; // Kahan
      comp += (std::abs(acc) >= std::abs(val)) ? (acc - t) + val : (val - t) + acc;
      acc = t;
    }
    return acc + comp;
  }

  // seed classification
  std::vector<Crossing> cr;
  row_crossings(region.polyline, f, f.ray_along_u ? region.seed.y() : region.seed.x(), cr);
  const int seed_count = count_beyond(cr, f.ray_along_u ? region.seed.x() : region.seed.y());
  if (seed_count == 0 && !f.y_periodic)
    fail(Errc::region_not_resolved, "seed lies in the unbounded chart component");

  double acc = 0, comp = 0;
  int transitions = 0;
  std::size_t prev_hits = static_cast<std::size_t>(-1);
  for (int j = 0; j < rows; ++j) {
    const double y = ylo + (j + 0.5) * hy;
    row_crossings(region.polyline, f, y, cr);
    if (prev_hits != static_cast<std::size_t>(-1) && cr.size() != prev_hits) ++transitions;
    prev_hits = cr.size();

    // walk intervals of constant signed count from +x downwards
    double val = 0;
    int count = 0;
    double right = xhi;
    for (std::size_t k = cr.size(); k-- > 0;) {
      const double left = std::clamp(cr[k].x, xlo, xhi);
      if (count == seed_count && right > left)
        val += gl16([&](double x) { return f_uv(x, y); }, left, right);
      right = left;
      count += cr[k].sign;
    }
    if (count == seed_count && right > xlo)
      val += gl16([&](double x) { return f_uv(x, y); }, xlo, right);

    val *= hy;
    const double t = acc + val;
    comp += (std::abs(acc) >= std::abs(val)) ? (acc - t) + val : (val - t) + acc;
    acc = t;
  }

  if (transitions > std::max(2, rows / 100))
    fail(Errc::region_not_resolved,
         "region boundary is not resolved by the quadrature rows");
  return acc + comp;
}

FluxReport gauss_bonnet_and_flux(const CurveOnSurface& curve, const RegionSpec& region,
                                 int euler_chi, int quad_n) {
  FluxReport rep;
  rep.boundary_rotation = boundary_rotation_angle(curve, quad_n);
  rep.curvature_integral = region_curvature_integral(curve.surface(), region);
  rep.euler_characteristic = euler_chi;
  rep.gb_residual = rep.boundary_rotation + rep.curvature_integral - kTwoPi * euler_chi;
  rep.flux_over_phi0 = rep.curvature_integral / kTwoPi;
  return rep;
}

double flux_over_phi0_si(double curvature_integral) {
  constexpr double kPlanck = 6.62607015e-34;      // J s
  constexpr double kHbar = kPlanck / kTwoPi;      // J s
  constexpr double kCharge = 1.602176634e-19;     // C
  const double flux = kHbar * curvature_integral / (2.0 * kCharge);
  const double phi0 = kPlanck / (2.0 * kCharge);
  return flux / phi0;
}

} // namespace dspin
