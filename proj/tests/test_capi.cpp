// Exercises the shared-library surface exactly as an external C client would.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "boltzmix.h"

namespace {
const char* kSmallConfig =
    "grid.points = 8\n"
    "grid.half_width = 6.0\n"
    "run.t_end = 0.05\n"
    "run.sample_every = 1\n"
    "scenario.name = two_species_relax\n";
}

TEST_CASE("stateless kinematics through the C surface") {
  double out = 0.0;
  const double v0[3] = {0, 0, 0};
  CHECK(bmx_maxwellian(2.0 * M_PI, 1.0, v0, &out) == BMX_OK);
  CHECK(out == doctest::Approx(1.0));
  CHECK(bmx_maxwellian(-1.0, 1.0, v0, &out) == BMX_ERR_INVALID_ARGUMENT);
  CHECK(std::string(bmx_last_error()).find("positive") != std::string::npos);

  CHECK(bmx_velocity_weight(5.0, v0, &out) == BMX_OK);
  CHECK(out == 1.0);

  const double v[3] = {0, 0, 0}, vs[3] = {1, 0, 0}, omega[3] = {1, 0, 0};
  double vp[3], vsp[3];
  CHECK(bmx_post_collision_omega(1.0, 3.0, v, vs, omega, vp, vsp) == BMX_OK);
  CHECK(vp[0] == doctest::Approx(1.5));
  CHECK(vsp[0] == doctest::Approx(0.5));
  const double bad_sigma[3] = {0.5, 0, 0};
  CHECK(bmx_post_collision_sigma(1.0, 1.0, v, vs, bad_sigma, vp, vsp) ==
        BMX_ERR_INVALID_ARGUMENT);

  double center[3], radius = 0.0;
  int degenerate = -1;
  CHECK(bmx_carleman_sphere(2.0, 1.0, v, vs, center, &radius, &degenerate) == BMX_OK);
  CHECK(radius == doctest::Approx(1.0));
  CHECK(center[0] == doctest::Approx(-1.0));
  CHECK(degenerate == 0);
  CHECK(bmx_carleman_sphere(1.0, 1.0, v, vs, center, &radius, &degenerate) == BMX_OK);
  CHECK(degenerate == 1);

  double lhs = 0, rhs = 1;
  const double vv[3] = {1.2, -0.4, 2.0};
  CHECK(bmx_exponent_cancellation(1.0, 2.5, vv, vv, &lhs, &rhs) == BMX_OK);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  CHECK(bmx_exponent_cancellation(1.0, 1.0, vv, vv, &lhs, &rhs) == BMX_ERR_INVALID_ARGUMENT);

  double quad = 0, closed = 0;
  const double x[3] = {0, 0, 1};
  CHECK(bmx_sphere_average_exp(32, 16, 1.0, x, &quad, &closed) == BMX_OK);
  CHECK(quad == doctest::Approx(closed).epsilon(1e-9));
}

TEST_CASE("config, system, state, step lifecycle") {
  bmx_config* cfg = nullptr;
  REQUIRE(bmx_config_load_string(kSmallConfig, &cfg) == BMX_OK);
  CHECK(bmx_config_set(cfg, "kernel.gamma", "1.0") == BMX_OK);
  CHECK(bmx_config_set(cfg, "kernel.gama", "1.0") == BMX_ERR_CONFIG);
  CHECK(std::string(bmx_last_error()).find("kernel.gama") != std::string::npos);

  size_t needed = 0;
  CHECK(bmx_config_serialize(cfg, nullptr, 0, &needed) == BMX_OK);
  std::vector<char> buf(needed);
  CHECK(bmx_config_serialize(cfg, buf.data(), buf.size(), &needed) == BMX_OK);
  CHECK(std::string(buf.data()).find("kernel.gamma = 1") != std::string::npos);

  bmx_system* sys = nullptr;
  REQUIRE(bmx_system_create(cfg, &sys) == BMX_OK);
  int ns = 0;
  size_t nn = 0;
  CHECK(bmx_system_species_count(sys, &ns) == BMX_OK);
  CHECK(ns == 2);
  CHECK(bmx_system_node_count(sys, &nn) == BMX_OK);
  CHECK(nn == 512u);
  std::vector<double> nu(nn);
  CHECK(bmx_system_collision_frequency(sys, 0, nu.data()) == BMX_OK);
  for (double x : nu) CHECK(x > 0.0);
  double defect = -1.0;
  CHECK(bmx_system_mass_defect(sys, &defect) == BMX_OK);
  CHECK(defect >= 0.0);

  bmx_state* st = nullptr;
  REQUIRE(bmx_state_create(sys, cfg, &st) == BMX_OK);
  double min_v = -1.0;
  CHECK(bmx_state_min_value(st, &min_v) == BMX_OK);
  CHECK(min_v >= 0.0);

  std::vector<double> gain(nn), loss(nn);
  CHECK(bmx_collision_tally(sys, st, 0, 0, gain.data(), loss.data()) == BMX_OK);
  for (size_t k = 0; k < nn; ++k) {
    CHECK(gain[k] >= 0.0);
    CHECK(loss[k] >= 0.0);
  }

  CHECK(bmx_step(sys, st, 0.05) == BMX_OK);
  CHECK(bmx_state_min_value(st, &min_v) == BMX_OK);
  CHECK(min_v >= 0.0);

  size_t diag_len = 0;
  CHECK(bmx_diagnostics(sys, st, 0.05, nullptr, 0, &diag_len) == BMX_OK);
  CHECK(diag_len == 9u + 4u * 2u);
  std::vector<double> diag(diag_len);
  CHECK(bmx_diagnostics(sys, st, 0.05, diag.data(), diag.size(), nullptr) == BMX_OK);
  CHECK(diag[0] == 0.05);
  CHECK(diag[1] == doctest::Approx(1.0).epsilon(1e-4));  // mass_1

  // round-trip state values
  std::vector<double> vals(nn);
  CHECK(bmx_state_get(st, 0, 1, vals.data()) == BMX_OK);
  CHECK(bmx_state_set(st, 0, 1, vals.data()) == BMX_OK);
  CHECK(bmx_state_get(st, 5, 1, vals.data()) == BMX_ERR_INVALID_ARGUMENT);

  bmx_state_destroy(st);
  bmx_system_destroy(sys);
  bmx_config_destroy(cfg);
}

TEST_CASE("simulate writes deterministic outputs") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "bmx_capi_sim";
  fs::remove_all(dir);

  bmx_config* cfg = nullptr;
  REQUIRE(bmx_config_load_string(kSmallConfig, &cfg) == BMX_OK);
  REQUIRE(bmx_simulate(cfg, (dir / "a").c_str()) == BMX_OK);
  REQUIRE(bmx_simulate(cfg, (dir / "b").c_str()) == BMX_OK);

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  };
  const std::string a = slurp(dir / "a" / "diagnostics.csv");
  CHECK(a == slurp(dir / "b" / "diagnostics.csv"));  // bitwise identical
  CHECK(a.find("time,mass_1,mass_2,px,py,pz,energy") == 0);
  CHECK(fs::exists(dir / "a" / "resolved.cfg"));

  bmx_config_destroy(cfg);
  fs::remove_all(dir);
}

TEST_CASE("verify dispatch and degenerate-mass guard") {
  bmx_config* cfg = nullptr;
  REQUIRE(bmx_config_create(&cfg) == BMX_OK);
  CHECK(bmx_verify(cfg, "definitely_not_a_suite", nullptr) == BMX_ERR_CONFIG);

  // equal masses: the carleman suite must refuse with a clear message
  REQUIRE(bmx_config_set(cfg, "species.2.mass", "1.0") == BMX_OK);
  CHECK(bmx_verify(cfg, "carleman", nullptr) == BMX_ERR_CONFIG);
  CHECK(std::string(bmx_last_error()).find("hyperplane") != std::string::npos);
  bmx_config_destroy(cfg);
}
