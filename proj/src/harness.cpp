#include <b92/harness.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <set>
#include <utility>

namespace b92 {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_optional(const std::optional<double>& v) {
  return v ? fmt_double(*v) : "nan";
}

std::string replica_file(const std::string& stem, int replica) {
  if (replica == 0) {
    return stem + ".csv";
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "_r%03d.csv", replica);
  return stem + buf;
}

struct Moments {
  double mean = 0.0;
  double std = 0.0;
  std::uint64_t n = 0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  m.n = xs.size();
  if (xs.empty()) {
    return m;
  }
  double sum = 0.0;
  for (double x : xs) {
    sum += x;
  }
  m.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) {
      const double d = x - m.mean;
      ss += d * d;
    }
    m.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

const char* kind_name(TrajectorySpec::Kind k) {
  switch (k) {
    case TrajectorySpec::Kind::Constant:
      return "constant";
    case TrajectorySpec::Kind::Linear:
      return "linear";
    case TrajectorySpec::Kind::Step:
      return "step";
  }
  return "?";
}

const char* mode_name(ControllerKind k) {
  switch (k) {
    case ControllerKind::Off:
      return "off";
    case ControllerKind::Fast:
      return "fast";
    case ControllerKind::Slow:
      return "slow";
  }
  return "?";
}

const char* basis_name(FastBasis b) {
  switch (b) {
    case FastBasis::Basis0:
      return "0";
    case FastBasis::Basis1:
      return "1";
    case FastBasis::Average:
      return "average";
  }
  return "?";
}

ReplicaResult run_replica(const ScenarioConfig& cfg, const NoiseTrajectory& traj,
                          int replica, const OutputOptions& out) {
  ReplicaResult result;
  result.replica = replica;
  result.seed = cfg.seed + static_cast<std::uint64_t>(replica);

  NoopController noop;
  std::optional<WindowedController> windowed;
  FeedbackController* controller = &noop;
  if (cfg.controller != ControllerKind::Off) {
    windowed.emplace(cfg.feedback);
    controller = &*windowed;
  }

  std::ofstream events;
  EventSink sink;
  std::uint64_t event_counter = 0;
  if (out.out_dir && out.events_csv) {
    events.open(*out.out_dir / replica_file("events", replica));
    events << "pulse_index,time_s,alice_bit,bob_basis,outcome,true_eps_rad,"
              "residual_rad\n";
    sink = [&](const DetectionEvent& ev) {
      if (event_counter++ % cfg.events_stride != 0) {
        return;
      }
      events << ev.pulse_index << ',' << fmt_double(ev.time_s) << ','
             << ev.alice_bit << ',' << ev.bob_basis << ','
             << (ev.outcome == Outcome::Conclusive ? "conclusive" : "inconclusive")
             << ',' << fmt_double(ev.true_eps) << ','
             << fmt_double(wrap_angle(ev.true_eps - controller->correction()))
             << '\n';
    };
  }

  auto run = run_transmission(cfg.protocol, traj, *controller, cfg.duration_s,
                              result.seed, sink);
  result.kicks = std::move(run.kicks);
  result.counts = run.counts;
  result.residuals = residual_stats(result.kicks, traj, true);
  return result;
}

}  // namespace

ResidualStats residual_stats(const std::vector<KickRecord>& kicks,
                             const NoiseTrajectory& trajectory,
                             bool exclude_step_windows) {
  ResidualStats stats;
  stats.all.reserve(kicks.size());

  std::set<std::size_t> excluded_idx;
  if (exclude_step_windows) {
    for (double s : trajectory.discontinuities()) {
      for (std::size_t i = 0; i < kicks.size(); ++i) {
        if (kicks[i].time_s >= s) {
          excluded_idx.insert(i);
          break;
        }
      }
    }
  }

  std::vector<double> included;
  included.reserve(kicks.size());
  double correction_before = 0.0;
  for (std::size_t i = 0; i < kicks.size(); ++i) {
    ResidualSample s;
    s.kick_index = kicks[i].kick_index;
    s.time_s = kicks[i].time_s;
    s.residual_rad =
        wrap_angle(trajectory.eval(kicks[i].time_s) - correction_before);
    s.excluded = excluded_idx.count(i) > 0;
    if (s.excluded) {
      ++stats.excluded;
    } else {
      included.push_back(s.residual_rad);
    }
    stats.all.push_back(s);
    correction_before = kicks[i].applied_correction;
  }

  const Moments m = moments(included);
  stats.mean_rad = m.mean;
  stats.std_rad = m.std;
  stats.samples = m.n;
  return stats;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const OutputOptions& out) {
  cfg.validate();
  const NoiseTrajectory traj = cfg.trajectory.build();
  if (out.out_dir) {
    std::filesystem::create_directories(*out.out_dir);
  }

  ScenarioResult result;
  result.replicas.resize(static_cast<std::size_t>(cfg.replicas));
  if (cfg.replicas == 1) {
    result.replicas[0] = run_replica(cfg, traj, 0, out);
  } else {
    std::vector<std::future<ReplicaResult>> futures;
    futures.reserve(result.replicas.size());
    for (int r = 0; r < cfg.replicas; ++r) {
      futures.push_back(std::async(std::launch::async, run_replica,
                                   std::cref(cfg), std::cref(traj), r,
                                   std::cref(out)));
    }
    for (int r = 0; r < cfg.replicas; ++r) {
      result.replicas[static_cast<std::size_t>(r)] = futures[static_cast<std::size_t>(r)].get();
    }
  }

  std::vector<double> pooled;
  for (const auto& rep : result.replicas) {
    result.kick_count += rep.kicks.size();
    result.excluded_windows += rep.residuals.excluded;
    for (const auto& k : rep.kicks) {
      if (k.abstained) {
        ++result.abstain_count;
      }
    }
    for (const auto& s : rep.residuals.all) {
      if (!s.excluded) {
        pooled.push_back(s.residual_rad);
      }
    }
  }
  const Moments m = moments(pooled);
  result.residual_mean_rad = m.mean;
  result.residual_std_rad = m.std;

  if (out.out_dir) {
    for (const auto& rep : result.replicas) {
      write_kicks_csv(*out.out_dir / replica_file("kicks", rep.replica),
                      rep.kicks, traj);
    }
    std::ofstream summary(*out.out_dir / "summary.json");
    summary << summary_json(cfg, result) << '\n';
  }
  return result;
}

std::string summary_json(const ScenarioConfig& cfg, const ScenarioResult& result) {
  nlohmann::json traj;
  traj["kind"] = kind_name(cfg.trajectory.kind);
  switch (cfg.trajectory.kind) {
    case TrajectorySpec::Kind::Constant:
      traj["value_rad"] = cfg.trajectory.value_rad;
      break;
    case TrajectorySpec::Kind::Linear:
      traj["rate_rad_per_s"] = cfg.trajectory.rate_rad_per_s;
      traj["offset_rad"] = cfg.trajectory.offset_rad;
      break;
    case TrajectorySpec::Kind::Step: {
      traj["initial_rad"] = cfg.trajectory.initial_rad;
      auto& steps = traj["steps"] = nlohmann::json::array();
      for (const auto& p : cfg.trajectory.schedule) {
        steps.push_back({{"time_s", p.time_s}, {"value_rad", p.value_rad}});
      }
      break;
    }
  }

  nlohmann::json feedback;
  feedback["mode"] = mode_name(cfg.controller);
  if (cfg.controller != ControllerKind::Off) {
    feedback["window"] = cfg.feedback.window;
    feedback["grid_resolution_rad"] = cfg.feedback.grid_resolution;
    feedback["max_kick_rad"] =
        cfg.feedback.max_kick ? nlohmann::json(*cfg.feedback.max_kick)
                              : nlohmann::json(nullptr);
    feedback["fast_basis"] = basis_name(cfg.feedback.fast_basis);
  }

  nlohmann::json j;
  j["preset"] = cfg.preset_name;
  j["config"] = {
      {"protocol",
       {{"theta_rad", cfg.protocol.theta},
        {"trigger_rate_hz", cfg.protocol.trigger_rate_hz},
        {"mean_photon_number", cfg.protocol.mean_photon_number},
        {"detector_efficiency", cfg.protocol.detector_efficiency},
        {"channel_transmittance", cfg.protocol.channel_transmittance},
        {"eta", cfg.protocol.eta()}}},
      {"trajectory", traj},
      {"feedback", feedback},
      {"run",
       {{"duration_s", cfg.duration_s},
        {"seed", cfg.seed},
        {"replicas", cfg.replicas}}},
      {"output", {{"events_stride", cfg.events_stride}}},
  };

  j["results"]["residual_mean_rad"] = result.residual_mean_rad;
  j["results"]["residual_std_rad"] = result.residual_std_rad;
  j["results"]["kick_count"] = result.kick_count;
  j["results"]["abstain_count"] = result.abstain_count;
  j["results"]["excluded_windows"] = result.excluded_windows;
  auto& reps = j["results"]["replicas"] = nlohmann::json::array();
  for (const auto& rep : result.replicas) {
    reps.push_back({{"replica", rep.replica},
                    {"seed", rep.seed},
                    {"residual_mean_rad", rep.residuals.mean_rad},
                    {"residual_std_rad", rep.residuals.std_rad},
                    {"kick_count", rep.kicks.size()},
                    {"abstain_count",
                     [&] {
                       std::uint64_t n = 0;
                       for (const auto& k : rep.kicks) {
                         n += k.abstained ? 1 : 0;
                       }
                       return n;
                     }()},
                    {"excluded_windows", rep.residuals.excluded},
                    {"total_pulses", rep.counts.total_pulses},
                    {"nonvacuum_events", rep.counts.nonvacuum_events},
                    {"conclusive", rep.counts.conclusive},
                    {"inconclusive", rep.counts.inconclusive},
                    {"bit_errors", rep.counts.bit_errors}});
  }
  return j.dump(2);
}

void write_kicks_csv(const std::filesystem::path& path,
                     const std::vector<KickRecord>& kicks,
                     const NoiseTrajectory& trajectory) {
  const ResidualStats stats = residual_stats(kicks, trajectory, true);
  std::ofstream f(path);
  f << "kick_index,time_s,window_events,r0_star,r1_star,eps_hat_rad,"
       "applied_correction_rad,abstained,true_eps_rad,residual_rad\n";
  for (std::size_t i = 0; i < kicks.size(); ++i) {
    const auto& k = kicks[i];
    f << k.kick_index << ',' << fmt_double(k.time_s) << ',' << k.window_events
      << ',' << fmt_optional(k.r0_star) << ',' << fmt_optional(k.r1_star) << ','
      << fmt_optional(k.eps_hat) << ',' << fmt_double(k.applied_correction)
      << ',' << (k.abstained ? 1 : 0) << ','
      << fmt_double(trajectory.eval(k.time_s)) << ','
      << fmt_double(stats.all[i].residual_rad) << '\n';
  }
}

}  // namespace b92
