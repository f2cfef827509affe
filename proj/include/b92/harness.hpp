#pragma once

#include <b92/config.hpp>
#include <b92/simulation.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace b92 {

/// Residual misalignment at one kick: the drift the channel actually had
/// at the kick time minus the correction in force just before the kick.
struct ResidualSample {
  std::uint64_t kick_index = 0;
  double time_s = 0.0;
  double residual_rad = 0.0;
  bool excluded = false;  ///< dropped from the statistics (step window)
};

struct ResidualStats {
  double mean_rad = 0.0;  ///< 0 when no samples were included
  double std_rad = 0.0;   ///< sample standard deviation (n - 1)
  std::uint64_t samples = 0;
  std::uint64_t excluded = 0;
  std::vector<ResidualSample> all;  ///< one entry per kick, in order
};

/// Evaluates residuals at kick times. When exclude_step_windows is set,
/// the first kick at or after each trajectory discontinuity is marked
/// excluded and dropped from mean/std (the window it closes saw mixed
/// drift; this matches ignoring the jumps when quoting statistics).
ResidualStats residual_stats(const std::vector<KickRecord>& kicks,
                             const NoiseTrajectory& trajectory,
                             bool exclude_step_windows = true);

struct ReplicaResult {
  int replica = 0;
  std::uint64_t seed = 0;
  std::vector<KickRecord> kicks;
  ResidualStats residuals;
  TransmissionCounts counts;
};

struct ScenarioResult {
  // Pooled over every included kick of every replica.
  double residual_mean_rad = 0.0;
  double residual_std_rad = 0.0;
  std::uint64_t kick_count = 0;
  std::uint64_t abstain_count = 0;
  std::uint64_t excluded_windows = 0;
  std::vector<ReplicaResult> replicas;
};

struct OutputOptions {
  std::optional<std::filesystem::path> out_dir;  ///< no files when empty
  bool events_csv = false;  ///< write decimated per-event traces
};

/// Runs every replica of the scenario (replica r uses seed + r) and
/// pools the residual statistics. With an out_dir set, writes kicks.csv
/// for replica 0 (kicks_rNNN.csv for the rest), summary.json, and
/// optional events.csv files. Replicas run concurrently; outputs are
/// ordered by replica index and fully determined by the configuration.
ScenarioResult run_scenario(const ScenarioConfig& cfg,
                            const OutputOptions& out = {});

/// Serializes the pooled summary, per-replica stats, and the resolved
/// configuration. Full double precision, stable key order, no
/// timestamps: the same run always produces the same bytes.
std::string summary_json(const ScenarioConfig& cfg, const ScenarioResult& result);

/// Writes one replica's kick log. Columns: kick_index, time_s,
/// window_events, r0_star, r1_star, eps_hat_rad, applied_correction_rad,
/// abstained, true_eps_rad, residual_rad. Missing ratios and abstained
/// estimates are written as nan.
void write_kicks_csv(const std::filesystem::path& path,
                     const std::vector<KickRecord>& kicks,
                     const NoiseTrajectory& trajectory);

}  // namespace b92
