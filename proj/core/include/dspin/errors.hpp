#pragma once

#include <stdexcept>
#include <string>

namespace dspin {

enum class Errc {
  // geometry
  out_of_domain,
  degenerate_chart,
  singular_metric,
  irregular_curve,
  vanishing_curvature,
  left_chart_domain,
  not_closed,
  unknown_curve,
  // numerics
  step_too_large,
  region_not_resolved,
  zero_axis,
  tolerance_not_met,
  grid_too_coarse,
  zero_length_segment,
  fit_failed,
  // configuration
  config_invalid,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

  // process exit code used by the CLI: 2 config, 3 geometry, 4 numerics
  int exit_code() const {
    switch (code_) {
      case Errc::config_invalid:
        return 2;
      case Errc::out_of_domain:
      case Errc::degenerate_chart:
      case Errc::singular_metric:
      case Errc::irregular_curve:
      case Errc::vanishing_curvature:
      case Errc::left_chart_domain:
      case Errc::not_closed:
      case Errc::unknown_curve:
        return 3;
      default:
        return 4;
    }
  }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace dspin
