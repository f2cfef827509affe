#pragma once

#include <b92/feedback.hpp>
#include <b92/quantum.hpp>
#include <b92/trajectory.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace b92 {

/// Which controller a scenario runs in the loop.
enum class ControllerKind : std::uint8_t { Off, Fast, Slow };

/// Declarative description of a drift trajectory; kept alongside the
/// built NoiseTrajectory so runs can echo their exact configuration.
struct TrajectorySpec {
  enum class Kind : std::uint8_t { Constant, Linear, Step };

  Kind kind = Kind::Linear;
  double value_rad = 0.0;        ///< constant: fixed drift
  double rate_rad_per_s = 0.05;  ///< linear: drift rate
  double offset_rad = 0.0;       ///< linear: drift at t = 0
  double initial_rad = 0.0;      ///< step: value before the first step
  std::vector<StepPoint> schedule;  ///< step: (time, new value) points

  NoiseTrajectory build() const;
};

/// Fully resolved run description. Field defaults reproduce the
/// "fig3-top" preset, so an empty configuration file is runnable.
struct ScenarioConfig {
  ProtocolParams protocol{
      /*theta=*/1.0471975511965976,  // pi/3
      /*trigger_rate_hz=*/2e6,
      /*mean_photon_number=*/0.5,
      /*detector_efficiency=*/0.1,
      /*channel_transmittance=*/0.1,
  };
  TrajectorySpec trajectory;
  ControllerKind controller = ControllerKind::Fast;
  FeedbackConfig feedback{
      FeedbackMode::Fast,
      /*window=*/5000,
      /*theta=*/1.0471975511965976,
      /*grid_resolution=*/1e-3,
      /*max_kick=*/std::nullopt,
      /*fast_basis=*/FastBasis::Basis0,
  };
  double duration_s = 60.0;
  std::uint64_t seed = 1;
  int replicas = 1;
  std::uint64_t events_stride = 100;  ///< decimation for events.csv
  std::string preset_name = "fig3-top";

  /// Throws std::domain_error / ConfigError naming the offending field.
  void validate() const;
};

/// Configuration or validation failure; line is 0 when the error is not
/// tied to a specific input line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_ = 0;
};

/// Baseline configuration (identical to preset("fig3-top")).
ScenarioConfig default_config();

/// Named presets: "fig3-top" (linear drift, fast feedback),
/// "fig3-bottom" (2 rad step schedule, slow feedback), "zero-noise"
/// (constant zero drift, fast feedback). Throws ConfigError on unknown
/// names.
ScenarioConfig preset(std::string_view name);

/// Parses key = value configuration text. Grammar: '[section]' headers
/// over flat 'key = value' lines; '#' starts a comment; unknown
/// sections or keys fail with their line number. Sections and keys are
/// documented in the README. An empty document yields default_config().
ScenarioConfig load_config(std::string_view text);

}  // namespace b92
