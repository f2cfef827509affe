#include <b92/trajectory.hpp>

#include <b92/quantum.hpp>

#include <stdexcept>
#include <utility>

namespace b92 {

NoiseTrajectory NoiseTrajectory::constant(double value_rad) {
  NoiseTrajectory t;
  t.offset_ = value_rad;
  return t;
}

NoiseTrajectory NoiseTrajectory::linear(double rate_rad_per_s, double offset_rad) {
  NoiseTrajectory t;
  t.offset_ = offset_rad;
  t.rate_ = rate_rad_per_s;
  return t;
}

NoiseTrajectory NoiseTrajectory::steps(double initial_rad,
                                       std::vector<StepPoint> schedule) {
  for (std::size_t i = 1; i < schedule.size(); ++i) {
    if (!(schedule[i].time_s > schedule[i - 1].time_s)) {
      throw std::invalid_argument("step times must be strictly increasing");
    }
  }
  NoiseTrajectory t;
  t.offset_ = initial_rad;
  t.schedule_ = std::move(schedule);
  t.jump_times_.reserve(t.schedule_.size());
  for (const auto& p : t.schedule_) {
    t.jump_times_.push_back(p.time_s);
  }
  return t;
}

NoiseTrajectory NoiseTrajectory::step(double amplitude_rad, double at_s) {
  return steps(0.0, {{at_s, amplitude_rad}});
}

double NoiseTrajectory::eval(double t_s) const {
  double v = offset_ + rate_ * t_s;
  for (const auto& p : schedule_) {
    if (t_s >= p.time_s) {
      v = p.value_rad;
    } else {
      break;
    }
  }
  return wrap_angle(v);
}

}  // namespace b92
