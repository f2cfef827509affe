#include <b92/config.hpp>

#include <charconv>
#include <cmath>
#include <optional>
#include <utility>

namespace b92 {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_double(std::string_view v, int line, std::string_view key) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw ConfigError(line, "value of '" + std::string(key) + "' is not a number");
  }
  return out;
}

std::uint64_t parse_u64(std::string_view v, int line, std::string_view key) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto res = std::from_chars(v.data(), end, out);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw ConfigError(line,
                      "value of '" + std::string(key) + "' is not a non-negative integer");
  }
  return out;
}

std::vector<StepPoint> parse_steps(std::string_view v, int line) {
  std::vector<StepPoint> points;
  while (!v.empty()) {
    const auto comma = v.find(',');
    std::string_view item = trim(v.substr(0, comma));
    v = (comma == std::string_view::npos) ? std::string_view{}
                                          : v.substr(comma + 1);
    if (item.empty()) {
      continue;
    }
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw ConfigError(line, "steps entries must look like 'time:value'");
    }
    StepPoint p;
    p.time_s = parse_double(trim(item.substr(0, colon)), line, "steps");
    p.value_rad = parse_double(trim(item.substr(colon + 1)), line, "steps");
    points.push_back(p);
  }
  if (points.empty()) {
    throw ConfigError(line, "steps must contain at least one 'time:value' entry");
  }
  return points;
}

}  // namespace

NoiseTrajectory TrajectorySpec::build() const {
  switch (kind) {
    case Kind::Constant:
      return NoiseTrajectory::constant(value_rad);
    case Kind::Linear:
      return NoiseTrajectory::linear(rate_rad_per_s, offset_rad);
    case Kind::Step:
      return NoiseTrajectory::steps(initial_rad, schedule);
  }
  throw std::logic_error("unreachable trajectory kind");
}

void ScenarioConfig::validate() const {
  protocol.validate();
  if (controller != ControllerKind::Off) {
    feedback.validate();
    if (feedback.theta != protocol.theta) {
      throw ConfigError(0, "feedback.theta must match protocol.theta_rad");
    }
  }
  if (!(duration_s > 0.0)) {
    throw ConfigError(0, "run.duration_s must be positive");
  }
  if (replicas < 1) {
    throw ConfigError(0, "run.replicas must be at least 1");
  }
  if (events_stride < 1) {
    throw ConfigError(0, "output.events_stride must be at least 1");
  }
  if (trajectory.kind == TrajectorySpec::Kind::Step && trajectory.schedule.empty()) {
    throw ConfigError(0, "trajectory.steps must be given for kind = step");
  }
  trajectory.build();  // surfaces unsorted schedules
}

ConfigError::ConfigError(int line, const std::string& message)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                  : message),
      line_(line) {}

ScenarioConfig default_config() { return ScenarioConfig{}; }

ScenarioConfig preset(std::string_view name) {
  ScenarioConfig cfg;
  if (name == "fig3-top") {
    return cfg;
  }
  if (name == "fig3-bottom") {
    cfg.trajectory.kind = TrajectorySpec::Kind::Step;
    cfg.trajectory.initial_rad = 0.0;
    cfg.trajectory.schedule = {{7.5, 2.0}, {15.0, 0.0}, {22.5, 2.0}};
    cfg.controller = ControllerKind::Slow;
    cfg.feedback.mode = FeedbackMode::Slow;
    cfg.feedback.window = 1000;
    cfg.duration_s = 30.0;
    cfg.preset_name = "fig3-bottom";
    return cfg;
  }
  if (name == "zero-noise") {
    cfg.trajectory.kind = TrajectorySpec::Kind::Constant;
    cfg.trajectory.value_rad = 0.0;
    cfg.preset_name = "zero-noise";
    return cfg;
  }
  throw ConfigError(0, "unknown preset '" + std::string(name) + "'");
}

ScenarioConfig load_config(std::string_view text) {
  ScenarioConfig cfg;
  cfg.preset_name = "custom";
  std::string section;
  bool window_set = false;
  bool mode_is_slow = false;

  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = (nl == std::string_view::npos) ? std::string_view{} : text.substr(nl + 1);

    const auto hash = line.find('#');
    if (hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(line_no, "unterminated section header");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section != "protocol" && section != "trajectory" &&
          section != "feedback" && section != "run" && section != "output") {
        throw ConfigError(line_no, "unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(line_no, "expected 'key = value'");
    }
    const std::string key = std::string(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(line_no, "empty key");
    }
    if (section.empty()) {
      throw ConfigError(line_no, "key '" + key + "' appears before any [section]");
    }

    if (section == "protocol") {
      if (key == "theta_rad") {
        cfg.protocol.theta = parse_double(value, line_no, key);
      } else if (key == "trigger_rate_hz") {
        cfg.protocol.trigger_rate_hz = parse_double(value, line_no, key);
      } else if (key == "mean_photon_number") {
        cfg.protocol.mean_photon_number = parse_double(value, line_no, key);
      } else if (key == "detector_efficiency") {
        cfg.protocol.detector_efficiency = parse_double(value, line_no, key);
      } else if (key == "channel_transmittance") {
        cfg.protocol.channel_transmittance = parse_double(value, line_no, key);
      } else {
        throw ConfigError(line_no, "unknown key '" + key + "' in [protocol]");
      }
    } else if (section == "trajectory") {
      if (key == "kind") {
        if (value == "constant") {
          cfg.trajectory.kind = TrajectorySpec::Kind::Constant;
        } else if (value == "linear") {
          cfg.trajectory.kind = TrajectorySpec::Kind::Linear;
        } else if (value == "step" || value == "piecewise") {
          cfg.trajectory.kind = TrajectorySpec::Kind::Step;
        } else {
          throw ConfigError(line_no, "trajectory.kind must be constant, linear, or step");
        }
      } else if (key == "value_rad") {
        cfg.trajectory.value_rad = parse_double(value, line_no, key);
      } else if (key == "rate_rad_per_s") {
        cfg.trajectory.rate_rad_per_s = parse_double(value, line_no, key);
      } else if (key == "offset_rad") {
        cfg.trajectory.offset_rad = parse_double(value, line_no, key);
      } else if (key == "initial_rad") {
        cfg.trajectory.initial_rad = parse_double(value, line_no, key);
      } else if (key == "steps") {
        cfg.trajectory.schedule = parse_steps(value, line_no);
      } else {
        throw ConfigError(line_no, "unknown key '" + key + "' in [trajectory]");
      }
    } else if (section == "feedback") {
      if (key == "mode") {
        if (value == "fast") {
          cfg.controller = ControllerKind::Fast;
          cfg.feedback.mode = FeedbackMode::Fast;
        } else if (value == "slow") {
          cfg.controller = ControllerKind::Slow;
          cfg.feedback.mode = FeedbackMode::Slow;
          mode_is_slow = true;
        } else if (value == "off") {
          cfg.controller = ControllerKind::Off;
        } else {
          throw ConfigError(line_no, "feedback.mode must be fast, slow, or off");
        }
      } else if (key == "window") {
        cfg.feedback.window = parse_u64(value, line_no, key);
        window_set = true;
      } else if (key == "grid_resolution_rad") {
        cfg.feedback.grid_resolution = parse_double(value, line_no, key);
      } else if (key == "max_kick_rad") {
        if (value.empty()) {
          cfg.feedback.max_kick = std::nullopt;
        } else {
          cfg.feedback.max_kick = parse_double(value, line_no, key);
        }
      } else if (key == "fast_basis") {
        if (value == "0") {
          cfg.feedback.fast_basis = FastBasis::Basis0;
        } else if (value == "1") {
          cfg.feedback.fast_basis = FastBasis::Basis1;
        } else if (value == "average") {
          cfg.feedback.fast_basis = FastBasis::Average;
        } else {
          throw ConfigError(line_no, "feedback.fast_basis must be 0, 1, or average");
        }
      } else {
        throw ConfigError(line_no, "unknown key '" + key + "' in [feedback]");
      }
    } else if (section == "run") {
      if (key == "duration_s") {
        cfg.duration_s = parse_double(value, line_no, key);
      } else if (key == "seed") {
        cfg.seed = parse_u64(value, line_no, key);
      } else if (key == "replicas") {
        const auto r = parse_u64(value, line_no, key);
        if (r < 1 || r > 1'000'000) {
          throw ConfigError(line_no, "run.replicas must lie in [1, 1000000]");
        }
        cfg.replicas = static_cast<int>(r);
      } else {
        throw ConfigError(line_no, "unknown key '" + key + "' in [run]");
      }
    } else {  // output
      if (key == "events_stride") {
        cfg.events_stride = parse_u64(value, line_no, key);
      } else {
        throw ConfigError(line_no, "unknown key '" + key + "' in [output]");
      }
    }
  }

  // Slow mode defaults to the shorter acquisition window unless the file
  // pinned one explicitly.
  if (mode_is_slow && !window_set) {
    cfg.feedback.window = 1000;
  }
  cfg.feedback.theta = cfg.protocol.theta;

  try {
    cfg.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(0, e.what());
  }
  return cfg;
}

}  // namespace b92
