// Command-line front end for the drift-compensation simulator.

#include <b92/harness.hpp>
#include <b92/security.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int cmd_run(const std::optional<std::string>& config_path,
            const std::optional<std::string>& preset_name,
            const std::optional<std::uint64_t>& seed,
            const std::optional<int>& replicas, const std::string& out_dir,
            bool events_csv) {
  b92::ScenarioConfig cfg;
  if (config_path && preset_name) {
    std::cerr << "error: --config and --preset are mutually exclusive\n";
    return kExitConfig;
  }
  try {
    if (config_path) {
      std::string text;
      try {
        text = read_file(*config_path);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
      }
      cfg = b92::load_config(text);
    } else {
      cfg = b92::preset(preset_name.value_or("fig3-top"));
    }
    if (seed) {
      cfg.seed = *seed;
    }
    if (replicas) {
      cfg.replicas = *replicas;
    }
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    b92::OutputOptions out;
    out.out_dir = std::filesystem::path(out_dir);
    out.events_csv = events_csv;
    const auto result = b92::run_scenario(cfg, out);
    std::printf("kicks=%llu abstains=%llu excluded=%llu\n",
                static_cast<unsigned long long>(result.kick_count),
                static_cast<unsigned long long>(result.abstain_count),
                static_cast<unsigned long long>(result.excluded_windows));
    std::printf("residual_mean_rad=%.6f residual_std_rad=%.6f\n",
                result.residual_mean_rad, result.residual_std_rad);
    std::printf("outputs written to %s\n", out_dir.c_str());
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_threshold(double theta, const std::string& bound_name) {
  try {
    const b92::PhaseErrorBound bound = bound_name == "naive"
                                           ? b92::naive_phase_bound()
                                           : b92::worst_case_phase_bound();
    const auto threshold = b92::gain_threshold(theta, bound);
    std::printf("theta_rad=%.10f bound=%s\n", theta, bound_name.c_str());
    if (threshold) {
      std::printf("threshold_rad=%.10f\n", *threshold);
      if (*threshold >= std::numbers::pi) {
        std::printf("note=gain stays positive over the whole interval\n");
      }
    } else {
      std::printf("threshold_rad=nan\nnote=no positive gain even at eps=0\n");
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }
}

int cmd_curves(const std::optional<std::string>& out_path, double step) {
  try {
    if (!(step > 0.0)) {
      std::cerr << "configuration error: --step must be positive\n";
      return kExitConfig;
    }
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (out_path) {
      file.open(*out_path);
      if (!file) {
        std::cerr << "runtime error: cannot write " << *out_path << '\n';
        return kExitRuntime;
      }
      os = &file;
    }
    const double thetas[] = {5.0 * std::numbers::pi / 18.0,
                             std::numbers::pi / 3.0,
                             4.0 * std::numbers::pi / 9.0};
    *os << "theta_rad,basis,eps_rad,ratio\n";
    char buf[128];
    for (double theta : thetas) {
      for (int k = 0; k < 2; ++k) {
        const int n = static_cast<int>(std::ceil(2.0 * std::numbers::pi / step));
        for (int i = 0; i <= n; ++i) {
          const double eps =
              -std::numbers::pi + 2.0 * std::numbers::pi * i / n;
          std::snprintf(buf, sizeof buf, "%.10f,%d,%.10f,%.10f\n", theta, k,
                        eps, b92::control_function(k, theta, eps));
          *os << buf;
        }
      }
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo simulator for drift-compensated asymmetric QKD"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "simulate a scenario and write outputs");
  std::optional<std::string> config_path;
  std::optional<std::string> preset_name;
  std::optional<std::uint64_t> seed;
  std::optional<int> replicas;
  std::string out_dir = "out";
  bool events_csv = false;
  run->add_option("--config", config_path, "configuration file path");
  run->add_option("--preset", preset_name,
                  "named preset: fig3-top, fig3-bottom, zero-noise");
  run->add_option("--seed", seed, "override the base seed");
  run->add_option("--replicas", replicas, "override the replica count");
  run->add_option("--out", out_dir, "output directory (default: out)");
  run->add_flag("--events-csv", events_csv, "also write decimated event traces");

  auto* threshold = app.add_subcommand(
      "threshold", "largest residual drift with positive key gain");
  double theta = std::numbers::pi / 3.0;
  std::string bound_name = "naive";
  threshold->add_option("--theta", theta, "signal half-angle, rad");
  threshold->add_option("--bound", bound_name, "phase-error bound")
      ->check(CLI::IsMember({"naive", "worst-case"}));

  auto* curves = app.add_subcommand(
      "curves", "emit control-ratio tables for the three reference angles");
  std::optional<std::string> curves_out;
  double curves_step = 0.01;
  curves->add_option("--out", curves_out, "output CSV path (default: stdout)");
  curves->add_option("--step", curves_step, "eps grid spacing, rad");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (run->parsed()) {
    return cmd_run(config_path, preset_name, seed, replicas, out_dir, events_csv);
  }
  if (threshold->parsed()) {
    return cmd_threshold(theta, bound_name);
  }
  return cmd_curves(curves_out, curves_step);
}
