#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dspin/expression.hpp"
#include "dspin/scenario.hpp"
#include "support/curves.hpp"

using namespace dspin;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int line_count(const std::string& text) {
  int n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

std::filesystem::path fresh_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() / ("dspin_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

} // namespace

TEST_SUITE_BEGIN("scenario");

TEST_CASE("config parsing") {
  SUBCASE("round-trip is byte idempotent") {
    const std::string text = R"({
      "run": "texture",
      "curve": {"kind": "helix_const", "params": {"rho": 1.0, "c": 1.0}},
      "grid": {"n": 64},
      "initial_bloch": [1, 0, 0]
    })";
    const ScenarioConfig a = parse_config_json(text);
    const std::string s1 = canonical_config_json(a);
    const ScenarioConfig b = parse_config_json(s1);
    const std::string s2 = canonical_config_json(b);
    CHECK(s1 == s2);
  }
  SUBCASE("unknown keys are rejected with the key named") {
    const std::string text = R"({"run": "describe", "curve": {"kid": "helix_const"}})";
    try {
      parse_config_json(text);
      FAIL("expected a config error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::config_invalid);
      CHECK(std::string(e.what()).find("kid") != std::string::npos);
      CHECK(e.exit_code() == 2);
    }
  }
  SUBCASE("defaults are c = rho = 1, f = 5") {
    const ScenarioConfig cfg = parse_config_json(R"({"run": "describe"})");
    CHECK(cfg.curve.params.rho == 1.0);
    CHECK(cfg.curve.params.c == 1.0);
    CHECK(cfg.curve.params.f == 5.0);
  }
  SUBCASE("bad value types are config errors") {
    CHECK_THROWS_AS(parse_config_json(R"({"run": "describe", "grid": {"n": "many"}})"), Error);
    CHECK_THROWS_AS(parse_config_json(R"({"run": 7})"), Error);
    CHECK_THROWS_AS(parse_config_json("not json"), Error);
  }
  SUBCASE("schema document mentions every top-level key") {
    const std::string schema = config_schema_json();
    for (const char* key : {"run", "curve", "surface", "custom", "grid", "initial_bloch",
                            "direction", "extra_field", "interferometer", "fermi", "flux",
                            "output"}) {
      CHECK(schema.find(std::string("\"") + key + "\"") != std::string::npos);
    }
  }
}

TEST_CASE("texture run: row-count contract and determinism") {
  ScenarioConfig cfg = parse_config_json(R"({
    "run": "texture",
    "curve": {"kind": "helix_const"},
    "grid": {"n": 512, "segments": 8192},
    "initial_bloch": [1, 0, 0],
    "output": {"basename": "c1"}
  })");
  const auto dir1 = fresh_dir("tex1");
  const auto dir2 = fresh_dir("tex2");
  const RunResult r1 = run_scenario(cfg, dir1);
  const RunResult r2 = run_scenario(cfg, dir2);

  const std::string csv = slurp((dir1 / "c1.csv").string());
  CHECK(line_count(csv) == 514); // header + 513 data rows for grid_n = 512
  CHECK(csv.substr(0, 5) == "s,phi");

  // byte-identical outputs across runs
  CHECK(csv == slurp((dir2 / "c1.csv").string()));
  CHECK(slurp((dir1 / "c1.manifest.json").string()) ==
        slurp((dir2 / "c1.manifest.json").string()));

  // manifest carries both precession residuals
  const std::string manifest = slurp((dir1 / "c1.manifest.json").string());
  CHECK(manifest.find("lab_law_r1") != std::string::npos);
  CHECK(manifest.find("darboux_doubled_r2") != std::string::npos);
  CHECK(manifest.find("config_sha256") != std::string::npos);
}

TEST_CASE("describe run: viviani on sphere has constant kappa_n = -1/2") {
  ScenarioConfig cfg = parse_config_json(R"({
    "run": "describe",
    "curve": {"kind": "viviani_on_sphere"},
    "grid": {"n": 64},
    "output": {"basename": "viv"}
  })");
  const auto dir = fresh_dir("describe");
  run_scenario(cfg, dir);
  std::ifstream in((dir / "viv.csv").string());
  std::string line;
  std::getline(in, line); // header
  CHECK(line == "s,phi,kappa_g,kappa_n,tau_g,beta_mag,V_g,V_sg,adiabaticity");
  int rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    REQUIRE(vals.size() == 9);
    CHECK(vals[3] == doctest::Approx(-0.5).epsilon(1e-7)); // kappa_n
    CHECK(std::abs(vals[6]) < 1e-10);                      // V_g = 0 on the sphere
    ++rows;
  }
  CHECK(rows == 65);
}

TEST_CASE("flux run: spherical cap JSON report") {
  ScenarioConfig cfg = parse_config_json(R"({
    "run": "flux",
    "curve": {"kind": "latitude_circle", "params": {"alpha": 1.0471975511965976, "r": 1.0}},
    "grid": {"region": 4096, "quad": 2048},
    "flux": {"seed": [0.01, 0.0], "euler_chi": 1},
    "output": {"basename": "cap"}
  })");
  const auto dir = fresh_dir("flux");
  run_scenario(cfg, dir);
  const std::string j = slurp((dir / "cap.json").string());
  CHECK(j.find("\"flux_over_Phi0\": 0.5") != std::string::npos);
  CHECK(j.find("gb_residual") != std::string::npos);
}

TEST_CASE("wilson run on a closed catalog curve") {
  ScenarioConfig cfg = parse_config_json(R"({
    "run": "wilson",
    "curve": {"kind": "viviani_on_sphere"},
    "grid": {"segments": 20000, "quad": 512},
    "output": {"basename": "w"}
  })");
  const auto dir = fresh_dir("wilson");
  run_scenario(cfg, dir);
  const std::string csv = slurp((dir / "w.csv").string());
  CHECK(csv.find("curve,n,Re_tr,Im_tr,Phi_adiabatic") == 0);
  CHECK(csv.find("viviani_on_sphere,20000,") != std::string::npos);
}

TEST_CASE("convention report flags exactly the two known discrepancies") {
  const ConventionReport rep = build_convention_report(64);
  REQUIRE(rep.flags.size() == 2);
  CHECK(rep.flags[0].curve == "helix_exp");
  CHECK(rep.flags[1].curve == "viviani_on_sphere");
  CHECK(rep.tau_g_branch_residual < 1e-6);

  for (const auto& row : rep.rows) {
    CAPTURE(row.curve);
    CHECK(row.max_kappa_n_err < 1e-6);
    CHECK(row.max_abs_kappa_g_err < 1e-6);
    CHECK(row.max_abs_tau_g_err < 1e-6);
    CHECK(row.max_v_sg_err < 1e-6);
    if (row.curve == "helix_const") {
      CHECK(row.kappa_g_sign == "zero"); // geodesic: no sign to compare
      CHECK(row.tau_g_sign == "match");
    }
    if (row.curve == "viviani_on_sphere") {
      CHECK(row.kappa_g_sign == "flip");
      CHECK(row.max_v_sg_printed_dev == doctest::Approx(1.0 / 16.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("expression curves") {
  SUBCASE("plane circle from expressions matches the analytic catalog") {
    auto surf = std::make_shared<SurfacePatch>(make_plane());
    auto c = make_expression_curve(surf, "2*cos(t)", "2*sin(t)", 0.0, kTwoPi, true, 2048);
    CHECK(c->length() == doctest::Approx(2.0 * kTwoPi).epsilon(1e-9));
    const DarbouxSample d = c->darboux_sample(1.0);
    CHECK(d.kappa_g == doctest::Approx(-0.5).epsilon(1e-6));
  }
  SUBCASE("parse errors name the offender") {
    CHECK_THROWS_AS(compile_expression("2*"), Error);
    CHECK_THROWS_AS(compile_expression("sin 1"), Error);
    try {
      compile_expression("frob(t)");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("frob") != std::string::npos);
    }
  }
  SUBCASE("operator precedence and functions") {
    auto f = compile_expression("1 + 2*t^2 - sin(pi/2)");
    CHECK(f(2.0) == doctest::Approx(1.0 + 8.0 - 1.0).epsilon(1e-14));
  }
}

TEST_CASE("sha256 of the empty string is the reference digest") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_SUITE_END();
