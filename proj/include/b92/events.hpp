#pragma once

#include <cstdint>

namespace b92 {

/// What Bob's detectors reported for one pulse.
enum class Outcome : std::uint8_t {
  Vacuum,        ///< nothing fired
  Conclusive,    ///< orthogonal-state detector fired: bit identified
  Inconclusive,  ///< signal-state detector fired: no information
};

/// Full record of one simulated pulse. Analysis-side only; the feedback
/// controller never sees this type.
struct DetectionEvent {
  std::uint64_t pulse_index = 0;
  double time_s = 0.0;
  int alice_bit = 0;
  int bob_basis = 0;
  Outcome outcome = Outcome::Vacuum;
  double true_eps = 0.0;  ///< drift angle the pulse actually experienced
};

/// The only view of an event the feedback controller receives. Alice's
/// bit and the true drift are structurally absent, which enforces the
/// blinding boundary at the type level.
struct ControlObservation {
  int bob_basis = 0;
  Outcome outcome = Outcome::Vacuum;
};

}  // namespace b92
