#include "dspin/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dspin {

namespace {

// 7-point Gauss-Legendre on [-1, 1]
constexpr double kGlX[7] = {0.0,
                            -0.4058451513773972, 0.4058451513773972,
                            -0.7415311855993945, 0.7415311855993945,
                            -0.9491079123427585, 0.9491079123427585};
constexpr double kGlW[7] = {0.4179591836734694,
                            0.3818300505051189, 0.3818300505051189,
                            0.2797053914892766, 0.2797053914892766,
                            0.1294849661688697, 0.1294849661688697};

template <typename F>
double gl7(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0;
  for (int i = 0; i < 7; ++i) acc += kGlW[i] * f(mid + half * kGlX[i]);
  return acc * half;
}

double principal_angle(double cos_v, double sin_v) { return std::atan2(sin_v, cos_v); }

double align_branch(double raw, double reference) {
  return raw + kTwoPi * std::round((reference - raw) / kTwoPi);
}

} // namespace

CurveOnSurface::CurveOnSurface(std::shared_ptr<const SurfacePatch> surface, Closures closures,
                               double t0, double t1, bool closed, int n_samples)
    : surface_(std::move(surface)), closures_(std::move(closures)), t0_(t0), t1_(t1),
      closed_(closed) {
  if (n_samples < 16) fail(Errc::config_invalid, "arclength table needs n_samples >= 16");
  if (!(t1_ > t0_)) fail(Errc::config_invalid, "curve parameter range is empty");
  build_tables(n_samples);
}

Vec3 CurveOnSurface::d1(double t) const {
  if (closures_.d1) return closures_.d1(t);
  const double h = 1e-5 * (1.0 + std::abs(t));
  const Vec3 a = (position(t + h) - position(t - h)) / (2 * h);
  const Vec3 b = (position(t + h / 2) - position(t - h / 2)) / h;
  return (4.0 * b - a) / 3.0;
}

Vec3 CurveOnSurface::d2(double t) const {
  if (closures_.d2) return closures_.d2(t);
  const double h = 1e-4 * (1.0 + std::abs(t));
  const Vec3 p0 = position(t);
  const Vec3 a = (position(t + h) - 2 * p0 + position(t - h)) / (h * h);
  const Vec3 b = (position(t + h / 2) - 2 * p0 + position(t - h / 2)) / (h * h / 4);
  return (4.0 * b - a) / 3.0;
}

Vec3 CurveOnSurface::d3(double t) const {
  if (closures_.d3) return closures_.d3(t);
  const double h = 1e-3 * (1.0 + std::abs(t));
  return (position(t + 2 * h) - 2 * position(t + h) + 2 * position(t - h) -
          position(t - 2 * h)) /
         (2 * h * h * h);
}

Vec3 CurveOnSurface::surface_normal(double t) const {
  const Vec2 uv = chart_point(t);
  return surface_->normal(uv.x(), uv.y());
}

void CurveOnSurface::build_tables(int n_samples) {
  const int n = n_samples;
  t_nodes_.resize(n + 1);
  s_nodes_.resize(n + 1);
  const double dt = (t1_ - t0_) / n;
  auto spd = [&](double t) { return d1(t).norm(); };

  double acc = 0;
  t_nodes_[0] = t0_;
  s_nodes_[0] = 0;
  for (int i = 0; i < n; ++i) {
    const double a = t0_ + i * dt, b = t0_ + (i + 1) * dt;
    acc += gl7(spd, a, b);
    t_nodes_[i + 1] = b;
    s_nodes_[i + 1] = acc;
  }
  length_ = acc;

  // regularity and chart consistency
  const double scale = 1.0 + length_;
  for (int i = 0; i <= n; i += std::max(1, n / 64)) {
    const double t = t_nodes_[i];
    if (spd(t) < 1e-12) fail(Errc::irregular_curve, "curve speed vanishes inside the range");
    const Vec2 uv = chart_point(t);
    const Vec3 gap = position(t) - surface_->point(uv.x(), uv.y());
    if (gap.norm() > 1e-10 * scale)
      fail(Errc::irregular_curve, "curve embedding does not lie on the declared surface chart");
  }

  if (closed_) {
    const Vec3 gap = position(t0_) - position(t1_);
    if (gap.norm() > 1e-8 * scale)
      fail(Errc::not_closed, "curve flagged closed but endpoints do not coincide");
    const Vec3 ta = d1(t0_).normalized(), tb = d1(t1_).normalized();
    smooth_closed_ = (ta - tb).norm() < 1e-8;
  }

  // unwrapped Frenet->Darboux angle per node; skipped if curvature vanishes
  theta_valid_ = true;
  theta_nodes_.assign(n + 1, 0.0);
  double prev = 0;
  for (int i = 0; i <= n && theta_valid_; ++i) {
    const double t = t_nodes_[i];
    const Vec3 v1 = d1(t), v2 = d2(t);
    const Vec3 cr = v1.cross(v2);
    const double sp = v1.norm();
    if (cr.norm() / (sp * sp * sp) < 1e-9) {
      theta_valid_ = false;
      break;
    }
    const Vec3 bhat = cr.normalized();
    const Vec3 that = v1 / sp;
    const Vec3 nhat = bhat.cross(that);
    const Vec3 N = surface_normal(t);
    double raw = principal_angle(nhat.dot(N), -bhat.dot(N));
    if (i > 0) raw = align_branch(raw, prev);
    theta_nodes_[i] = raw;
    prev = raw;
  }
  if (!theta_valid_) theta_nodes_.clear();
}

double CurveOnSurface::s_of_t(double t) const {
  t = std::clamp(t, t0_, t1_);
  const int n = static_cast<int>(t_nodes_.size()) - 1;
  const double dt = (t1_ - t0_) / n;
  int i = std::clamp(static_cast<int>((t - t0_) / dt), 0, n - 1);
  auto spd = [&](double x) { return d1(x).norm(); };
  return s_nodes_[i] + gl7(spd, t_nodes_[i], t);
}

double CurveOnSurface::wrap_s(double s) const {
  if (!closed_) return s;
  double w = std::fmod(s, length_);
  if (w < 0) w += length_;
  return w;
}

double CurveOnSurface::t_of_s(double s) const {
  if (closed_) {
    s = wrap_s(s);
  } else {
    if (s < -1e-9 * (1 + length_) || s > length_ * (1 + 1e-12) + 1e-9)
      fail(Errc::out_of_domain, "arclength outside [0, L]");
    s = std::clamp(s, 0.0, length_);
  }
  const auto it = std::upper_bound(s_nodes_.begin(), s_nodes_.end(), s);
  int i = std::clamp(static_cast<int>(it - s_nodes_.begin()) - 1, 0,
                     static_cast<int>(s_nodes_.size()) - 2);
  const double seg = s_nodes_[i + 1] - s_nodes_[i];
  double t = t_nodes_[i] + (t_nodes_[i + 1] - t_nodes_[i]) * ((s - s_nodes_[i]) / seg);
  auto spd = [&](double x) { return d1(x).norm(); };
  for (int k = 0; k < 4; ++k) {
    const double res = s_nodes_[i] + gl7(spd, t_nodes_[i], t) - s;
    t -= res / spd(t);
    t = std::clamp(t, t0_, t1_);
  }
  return t;
}

FrenetSample CurveOnSurface::frenet_sample(double s) const {
  const double t = t_of_s(s);
  const Vec3 v1 = d1(t), v2 = d2(t), v3 = d3(t);
  const double sp = v1.norm();
  const Vec3 cr = v1.cross(v2);
  const double crn = cr.norm();
  const double kappa = crn / (sp * sp * sp);
  if (kappa < 1e-12)
    fail(Errc::vanishing_curvature, "Frenet frame undefined where curvature vanishes");
  FrenetSample f;
  f.s = closed_ ? wrap_s(s) : s;
  f.tangent = v1 / sp;
  f.binormal = cr / crn;
  f.normal = f.binormal.cross(f.tangent);
  f.curvature = kappa;
  f.torsion = cr.dot(v3) / (crn * crn);
  return f;
}

double CurveOnSurface::theta_at(double s, const Vec3& n, const Vec3& b, const Vec3& N) const {
  const double raw = principal_angle(n.dot(N), -b.dot(N));
  // align to the unwrap table
  const int nn = static_cast<int>(s_nodes_.size()) - 1;
  const auto it = std::upper_bound(s_nodes_.begin(), s_nodes_.end(), s);
  int i = std::clamp(static_cast<int>(it - s_nodes_.begin()) - 1, 0, nn - 1);
  const double w = (s - s_nodes_[i]) / (s_nodes_[i + 1] - s_nodes_[i]);
  const double ref = theta_nodes_[i] * (1 - w) + theta_nodes_[i + 1] * w;
  return align_branch(raw, ref);
}

DarbouxSample CurveOnSurface::darboux_sample(double s) const {
  const double sw = closed_ ? wrap_s(s) : s;
  const double t = t_of_s(sw);
  const Vec3 v1 = d1(t), v2 = d2(t);
  const double sp = v1.norm();
  const Vec3 that = v1 / sp;
  // dt/ds = (r'' - t (t.r'')) / |r'|^2
  const Vec3 dtds = (v2 - that * that.dot(v2)) / (sp * sp);

  const Vec3 N = surface_normal(t);
  const Vec3 B = that.cross(N).normalized();

  DarbouxSample d;
  d.s = sw;
  d.tangent = that;
  d.surface_normal = N;
  d.tangent_normal = B;
  d.kappa_n = dtds.dot(N);
  d.kappa_g = dtds.dot(B);

  // dN/ds by finite differences along arclength
  auto N_of_s = [&](double x) {
    if (closed_) return surface_normal(t_of_s(wrap_s(x)));
    return surface_normal(t_of_s(std::clamp(x, 0.0, length_)));
  };
  const double h = std::min(1e-5 * (1.0 + std::abs(sw)), 0.45 * length_);
  Vec3 dNds;
  if (closed_ || (sw - h >= 0 && sw + h <= length_)) {
    dNds = (N_of_s(sw + h) - N_of_s(sw - h)) / (2 * h);
  } else if (sw - h < 0) {
    dNds = (-3.0 * N_of_s(sw) + 4.0 * N_of_s(sw + h) - N_of_s(sw + 2 * h)) / (2 * h);
  } else {
    dNds = (3.0 * N_of_s(sw) - 4.0 * N_of_s(sw - h) + N_of_s(sw - 2 * h)) / (2 * h);
  }
  d.tau_g = -dNds.dot(B);

  const Vec2 uv = chart_point(t);
  d.gaussian = surface_->gaussian_at(uv.x(), uv.y());
  d.mean = surface_->mean_at(uv.x(), uv.y());

  if (theta_valid_) {
    const Vec3 cr = v1.cross(v2);
    if (cr.norm() / (sp * sp * sp) >= 1e-12) {
      const Vec3 bhat = cr.normalized();
      const Vec3 nhat = bhat.cross(that);
      d.theta = theta_at(sw, nhat, bhat, N);
    } else {
      d.theta = std::numeric_limits<double>::quiet_NaN();
    }
  } else {
    d.theta = std::numeric_limits<double>::quiet_NaN();
  }
  return d;
}

// ---------------------------------------------------------------------------
// catalog

const char* catalog_curve_name(CatalogCurve kind) {
  switch (kind) {
    case CatalogCurve::helix_const: return "helix_const";
    case CatalogCurve::helix_exp: return "helix_exp";
    case CatalogCurve::helix_log: return "helix_log";
    case CatalogCurve::viviani_on_cylinder: return "viviani_on_cylinder";
    case CatalogCurve::viviani_on_sphere: return "viviani_on_sphere";
    case CatalogCurve::latitude_circle: return "latitude_circle";
  }
  return "unknown";
}

std::optional<CatalogCurve> catalog_curve_from_name(const std::string& name) {
  for (CatalogCurve k :
       {CatalogCurve::helix_const, CatalogCurve::helix_exp, CatalogCurve::helix_log,
        CatalogCurve::viviani_on_cylinder, CatalogCurve::viviani_on_sphere,
        CatalogCurve::latitude_circle}) {
    if (name == catalog_curve_name(k)) return k;
  }
  return std::nullopt;
}

namespace {

struct HelixZ {
  std::function<double(double)> g, g1, g2, g3;
};

HelixZ helix_profile(CatalogCurve kind, double c, double f) {
  switch (kind) {
    case CatalogCurve::helix_const:
      return {[=](double p) { return c * p; }, [=](double) { return c; },
              [](double) { return 0.0; }, [](double) { return 0.0; }};
    case CatalogCurve::helix_exp:
      return {[=](double p) { return c * f * (std::exp(p / f) - 1.0); },
              [=](double p) { return c * std::exp(p / f); },
              [=](double p) { return c / f * std::exp(p / f); },
              [=](double p) { return c / (f * f) * std::exp(p / f); }};
    case CatalogCurve::helix_log:
      return {[=](double p) { return c * f * std::log(p / f + 1.0); },
              [=](double p) { return c * f / (p + f); },
              [=](double p) { return -c * f / ((p + f) * (p + f)); },
              [=](double p) { return 2.0 * c * f / ((p + f) * (p + f) * (p + f)); }};
    default:
      fail(Errc::unknown_curve, "not a helix profile");
  }
}

CurveOnSurface::Closures reversed(CurveOnSurface::Closures c, double t0, double t1) {
  CurveOnSurface::Closures r;
  auto flip = [t0, t1](double t) { return t0 + t1 - t; };
  r.chart_point = [=](double t) { return c.chart_point(flip(t)); };
  r.position = [=](double t) { return c.position(flip(t)); };
  if (c.d1) r.d1 = [=](double t) { return Vec3(-c.d1(flip(t))); };
  if (c.d2) r.d2 = [=](double t) { return c.d2(flip(t)); };
  if (c.d3) r.d3 = [=](double t) { return Vec3(-c.d3(flip(t))); };
  return r;
}

} // namespace

std::shared_ptr<CurveOnSurface> make_catalog_curve(const CatalogCurveSpec& spec) {
  const CurveParams& p = spec.params;
  double phi0 = 0, phi1 = kTwoPi;
  if (spec.phi_range) {
    phi0 = spec.phi_range->first;
    phi1 = spec.phi_range->second;
  }

  std::shared_ptr<SurfacePatch> surf;
  CurveOnSurface::Closures cl;
  bool closed = false;

  switch (spec.kind) {
    case CatalogCurve::helix_const:
    case CatalogCurve::helix_exp:
    case CatalogCurve::helix_log: {
      const double rho = p.rho;
      if (spec.kind == CatalogCurve::helix_log && phi0 / p.f + 1.0 <= 0)
        fail(Errc::out_of_domain, "helix_log requires phi/f + 1 > 0");
      surf = std::make_shared<SurfacePatch>(make_cylinder(rho));
      HelixZ z = helix_profile(spec.kind, p.c, p.f);
      cl.chart_point = [z](double t) { return Vec2(t, z.g(t)); };
      cl.position = [rho, z](double t) {
        return Vec3(rho * std::cos(t), rho * std::sin(t), z.g(t));
      };
      cl.d1 = [rho, z](double t) {
        return Vec3(-rho * std::sin(t), rho * std::cos(t), z.g1(t));
      };
      cl.d2 = [rho, z](double t) {
        return Vec3(-rho * std::cos(t), -rho * std::sin(t), z.g2(t));
      };
      cl.d3 = [rho, z](double t) {
        return Vec3(rho * std::sin(t), -rho * std::cos(t), z.g3(t));
      };
      break;
    }
    case CatalogCurve::viviani_on_cylinder:
    case CatalogCurve::viviani_on_sphere: {
      const double rho = p.rho;
      if (p.r && std::abs(*p.r - 2.0 * rho) > 1e-12)
        fail(Errc::config_invalid, "viviani curve requires sphere radius r = 2*rho");
      auto pos = [rho](double t) {
        return Vec3(rho * (1.0 + std::cos(t)), rho * std::sin(t), 2.0 * rho * std::sin(t / 2));
      };
      cl.position = pos;
      cl.d1 = [rho](double t) {
        return Vec3(-rho * std::sin(t), rho * std::cos(t), rho * std::cos(t / 2));
      };
      cl.d2 = [rho](double t) {
        return Vec3(-rho * std::cos(t), -rho * std::sin(t), -0.5 * rho * std::sin(t / 2));
      };
      cl.d3 = [rho](double t) {
        return Vec3(rho * std::sin(t), -rho * std::cos(t), -0.25 * rho * std::cos(t / 2));
      };
      if (spec.kind == CatalogCurve::viviani_on_cylinder) {
        surf = std::make_shared<SurfacePatch>(make_cylinder(rho, rho, 0.0));
        cl.chart_point = [rho](double t) { return Vec2(t, 2.0 * rho * std::sin(t / 2)); };
      } else {
        surf = std::make_shared<SurfacePatch>(make_sphere(2.0 * rho));
        cl.chart_point = [](double t) {
          const double z = std::clamp(std::sin(t / 2), -1.0, 1.0);
          return Vec2(std::acos(z), std::atan2(std::sin(t), 1.0 + std::cos(t)));
        };
      }
      closed = std::abs(std::remainder(phi1 - phi0, kTwoPi)) < 1e-12;
      break;
    }
    case CatalogCurve::latitude_circle: {
      const double r = p.r.value_or(1.0);
      const double alpha = p.alpha;
      if (alpha <= 0 || alpha >= kPi)
        fail(Errc::out_of_domain, "latitude polar angle must lie in (0, pi)");
      surf = std::make_shared<SurfacePatch>(make_sphere(r));
      const double sa = std::sin(alpha), ca = std::cos(alpha);
      // clockwise seen from +z: the enclosed polar cap sits on the B side
      cl.chart_point = [alpha](double t) { return Vec2(alpha, -t); };
      cl.position = [=](double t) {
        return Vec3(r * sa * std::cos(t), -r * sa * std::sin(t), r * ca);
      };
      cl.d1 = [=](double t) { return Vec3(-r * sa * std::sin(t), -r * sa * std::cos(t), 0); };
      cl.d2 = [=](double t) { return Vec3(-r * sa * std::cos(t), r * sa * std::sin(t), 0); };
      cl.d3 = [=](double t) { return Vec3(r * sa * std::sin(t), r * sa * std::cos(t), 0); };
      closed = std::abs(std::remainder(phi1 - phi0, kTwoPi)) < 1e-12;
      break;
    }
  }

  if (spec.reverse) cl = reversed(cl, phi0, phi1);
  return std::make_shared<CurveOnSurface>(surf, std::move(cl), phi0, phi1, closed,
                                          spec.n_samples);
}

} // namespace dspin
