#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dspin/curve.hpp"
#include "dspin/hamiltonian.hpp"
#include "dspin/su2.hpp"

namespace dspin {

inline constexpr const char* kEngineVersion = "1.0.0";

enum class RunKind {
  describe,
  frames,
  fermi_check,
  texture,
  wilson,
  flux,
  conductance,
  convention_report,
};

const char* run_kind_name(RunKind k);

struct SurfaceConfig {
  std::string kind = "cylinder"; // cylinder | sphere | plane
  double radius = 1.0;
  Vec3 center = Vec3::Zero();
  std::string orientation = "outward";
};

struct CustomCurveConfig {
  std::string u_expr, v_expr;
  double t0 = 0, t1 = kTwoPi;
  bool closed = false;
};

struct GridConfig {
  int n = 512;             // samples for describe/frames/texture grids
  int segments = 100000;   // path-ordering segments across the full span
  int quad_n = 512;        // Simpson panels (adiabatic/boundary integrals)
  int region_grid = 2048;  // quadrature rows for region integrals
  int arm_steps = 16384;   // interferometer segments per arm
  int sweep_points = 256;  // conductance sweep grid
  int curve_samples = 4096;
};

struct FermiConfig {
  std::vector<double> phi_points = {kPi / 2, 0.75 * kPi, 1.3 * kPi};
  double q_max = 1e-1, q_min = 1e-3;
  int q_count = 9;
  double fd_step = 0; // 0: automatic
};

struct FluxConfig {
  Vec2 seed = Vec2(0.1, 0.0);
  int euler_chi = 1;
  bool whole_sphere = false;
};

struct InterferometerConfig {
  double phi_in = 0.0;
  double phi_out = kPi;
  bool dynamical_phase = false;
  double wavenumber = 0.0;
};

struct ScenarioConfig {
  RunKind run = RunKind::describe;
  CatalogCurveSpec curve;
  bool use_custom_curve = false;
  SurfaceConfig surface;
  CustomCurveConfig custom;
  GridConfig grid;
  Vec3 initial_bloch = Vec3(1, 0, 0);
  Direction direction = Direction::forward;
  std::optional<Vec3> extra_field;
  InterferometerConfig interferometer;
  FermiConfig fermi;
  FluxConfig flux;
  std::string basename; // defaults to the run kind name
};

/// Strict parser: unknown keys are rejected with the offending key named.
ScenarioConfig parse_config_json(const std::string& text);
ScenarioConfig parse_config_file(const std::filesystem::path& path);

/// Canonical serialization with every field materialized; parsing it back and
/// re-serializing reproduces the same bytes.
std::string canonical_config_json(const ScenarioConfig& cfg);

/// JSON schema for the config document.
std::string config_schema_json();

std::shared_ptr<CurveOnSurface> build_curve(const ScenarioConfig& cfg);
SurfacePatch build_surface(const SurfaceConfig& cfg);

struct RunResult {
  std::vector<std::string> files; // paths written, manifest last
  std::vector<std::string> warnings;
};

/// Executes a scenario; all outputs are deterministic functions of the config
/// and engine version, written atomically (temp + rename).
RunResult run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

// ---- convention report ------------------------------------------------------

struct ConventionRow {
  std::string curve;
  double max_kappa_n_err = 0;
  double max_abs_kappa_g_err = 0;
  double max_abs_tau_g_err = 0;
  double max_v_sg_err = 0;        // against the validated closed form
  double max_v_sg_printed_dev = 0; // deviation of the printed form (flagged curves)
  std::string kappa_g_sign;       // match | flip | mixed | zero
  std::string kappa_n_sign;
  std::string tau_g_sign;
};

struct ConventionReport {
  std::vector<ConventionRow> rows;
  std::vector<ReferenceFlag> flags; // exactly the two documented discrepancies
  std::string tau_g_branch;         // which tau/theta' relation the frames satisfy
  double tau_g_branch_residual = 0;
};

ConventionReport build_convention_report(int grid_points = 256);

// ---- small utilities shared with tests --------------------------------------

std::string format_g17(double v);
std::string sha256_hex(const std::string& data);

} // namespace dspin
