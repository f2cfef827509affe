#pragma once

#include <vector>

namespace b92 {

/// One entry of a piecewise-constant schedule: from time_s onward
/// (inclusive) the trajectory takes the given value.
struct StepPoint {
  double time_s = 0.0;
  double value_rad = 0.0;
};

/// Deterministic phase-drift trajectory eps(t), always reported wrapped
/// to (-pi, pi].
class NoiseTrajectory {
 public:
  /// eps(t) = value for all t.
  static NoiseTrajectory constant(double value_rad);

  /// eps(t) = offset + rate * t.
  static NoiseTrajectory linear(double rate_rad_per_s, double offset_rad = 0.0);

  /// Piecewise-constant schedule starting at initial_rad; each point
  /// replaces the value from its time onward. Points must be strictly
  /// increasing in time (throws std::invalid_argument otherwise).
  static NoiseTrajectory steps(double initial_rad, std::vector<StepPoint> schedule);

  /// Single step: initial value 0, jumping to amplitude_rad at time at_s.
  static NoiseTrajectory step(double amplitude_rad, double at_s);

  /// Drift angle at time t, wrapped to (-pi, pi].
  double eval(double t_s) const;

  /// Times of the schedule's discontinuities, in increasing order.
  /// Empty for constant and linear trajectories.
  const std::vector<double>& discontinuities() const { return jump_times_; }

 private:
  NoiseTrajectory() = default;

  double offset_ = 0.0;
  double rate_ = 0.0;
  std::vector<StepPoint> schedule_;
  std::vector<double> jump_times_;
};

}  // namespace b92
