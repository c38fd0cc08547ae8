// Batch front end for the boltzmix shared library. Everything goes through
// the C API.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "boltzmix.h"

namespace {

struct ConfigHandle {
  bmx_config* cfg = nullptr;
  ~ConfigHandle() { bmx_config_destroy(cfg); }
};

int load_config(const std::string& path, const std::vector<std::string>& overrides,
                unsigned workers, long long seed, bool plots, ConfigHandle& handle) {
  bmx_status st = path.empty() ? bmx_config_create(&handle.cfg)
                               : bmx_config_load_file(path.c_str(), &handle.cfg);
  if (st != BMX_OK) {
    std::fprintf(stderr, "error: %s\n", bmx_last_error());
    return 1;
  }
  for (const auto& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: override '%s' is not key=value\n", kv.c_str());
      return 1;
    }
    st = bmx_config_set(handle.cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (st != BMX_OK) {
      std::fprintf(stderr, "error: %s\n", bmx_last_error());
      return 1;
    }
  }
  if (workers > 0 &&
      bmx_config_set(handle.cfg, "run.workers", std::to_string(workers).c_str()) != BMX_OK) {
    std::fprintf(stderr, "error: %s\n", bmx_last_error());
    return 1;
  }
  if (seed >= 0 &&
      bmx_config_set(handle.cfg, "run.seed", std::to_string(seed).c_str()) != BMX_OK) {
    std::fprintf(stderr, "error: %s\n", bmx_last_error());
    return 1;
  }
  if (plots && bmx_config_set(handle.cfg, "output.plots", "true") != BMX_OK) {
    std::fprintf(stderr, "error: %s\n", bmx_last_error());
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"boltzmix: multi-species Boltzmann simulation and verification"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", suite, sweep_key, sweep_values;
  std::vector<std::string> overrides;
  unsigned workers = 0;
  long long seed = -1;
  bool plots = false;

  app.add_option("--config", config_path, "configuration file (dotted key = value lines)");
  app.add_option("--set", overrides, "override a config key, e.g. --set kernel.gamma=1")
      ->take_all();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--workers", workers, "worker thread count (0 = hardware)");
  app.add_option("--seed", seed, "random seed");
  app.add_flag("--plots", plots, "emit SVG plots");

  auto* verify = app.add_subcommand("verify", "run a property-verification suite");
  verify->add_option("suite", suite, "identities|conservation|spectral|entropy|carleman")
      ->required();

  auto* simulate = app.add_subcommand("simulate", "run the configured scenario");

  auto* sweep = app.add_subcommand("sweep", "one run per value of a config key");
  sweep->add_option("key", sweep_key, "dotted config key, e.g. kernel.gamma")->required();
  sweep->add_option("values", sweep_values, "comma-separated values")->required();

  CLI11_PARSE(app, argc, argv);

  ConfigHandle handle;
  if (const int rc = load_config(config_path, overrides, workers, seed, plots, handle)) return rc;

  if (verify->parsed()) {
    const std::string report = out_dir + "/report_" + suite + ".txt";
    const bmx_status st = bmx_verify(handle.cfg, suite.c_str(), report.c_str());
    std::printf("%s", bmx_last_error());
    if (st == BMX_OK) {
      std::printf("report written to %s\n", report.c_str());
      return 0;
    }
    if (st == BMX_ERR_CHECK_FAILED) {
      std::fprintf(stderr, "verify %s FAILED (report: %s)\n", suite.c_str(), report.c_str());
      return 2;
    }
    std::fprintf(stderr, "error: %s\n", bmx_last_error());
    return 1;
  }
  if (simulate->parsed()) {
    const bmx_status st = bmx_simulate(handle.cfg, out_dir.c_str());
    if (st != BMX_OK) {
      std::fprintf(stderr, "error: %s\n", bmx_last_error());
      return 1;
    }
    std::printf("run written to %s\n", out_dir.c_str());
    return 0;
  }
  if (sweep->parsed()) {
    const bmx_status st =
        bmx_sweep(handle.cfg, sweep_key.c_str(), sweep_values.c_str(), out_dir.c_str());
    if (st != BMX_OK) {
      std::fprintf(stderr, "error: %s\n", bmx_last_error());
      return 1;
    }
    std::printf("sweep written to %s\n", out_dir.c_str());
    return 0;
  }
  return 1;
}
