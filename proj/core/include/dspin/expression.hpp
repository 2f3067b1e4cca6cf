#pragma once

#include <functional>
#include <memory>
#include <string>

#include "dspin/curve.hpp"

namespace dspin {

/// Compiles a scalar expression of one variable (named `t`, alias `phi`) into
/// a callable. Supports + - * / ^, parentheses, the constants pi and e, and
/// the usual single-argument functions (sin, cos, tan, asin, acos, atan,
/// sinh, cosh, tanh, exp, log, sqrt, abs). Throws ConfigInvalid on parse
/// errors, naming the offending token.
std::function<double(double)> compile_expression(const std::string& text);

/// Curve on an explicit surface given by chart-coordinate expressions u(t),
/// v(t); embedding and derivatives come from the chart composition with
/// finite differences.
std::shared_ptr<CurveOnSurface> make_expression_curve(
    std::shared_ptr<const SurfacePatch> surface, const std::string& u_expr,
    const std::string& v_expr, double t0, double t1, bool closed, int n_samples = 4096);

} // namespace dspin
