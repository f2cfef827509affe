#pragma once

#include <b92/events.hpp>
#include <b92/feedback.hpp>
#include <b92/quantum.hpp>
#include <b92/rng.hpp>
#include <b92/trajectory.hpp>

#include <cstdint>
#include <functional>
#include <vector>

namespace b92 {

/// Simulates one pulse at effective drift eps_effective (true drift minus
/// applied correction). Draw order per pulse: alice bit, bob basis,
/// detection, then conclusive/inconclusive for detected pulses. With
/// eta = 0 every pulse is Vacuum and the state draw is skipped.
/// pulse_index only stamps the returned event (time = index / f).
DetectionEvent simulate_pulse(const ProtocolParams& params,
                              double eps_effective, Rng& rng,
                              std::uint64_t pulse_index = 0);

/// Aggregate counters for one transmission.
struct TransmissionCounts {
  std::uint64_t total_pulses = 0;
  std::uint64_t nonvacuum_events = 0;
  std::uint64_t conclusive = 0;
  std::uint64_t inconclusive = 0;
  std::uint64_t bit_errors = 0;  ///< conclusive events decoding the wrong bit
};

struct TransmissionResult {
  std::vector<KickRecord> kicks;
  TransmissionCounts counts;
};

/// Optional per-event callback; receives every non-vacuum event.
using EventSink = std::function<void(const DetectionEvent&)>;

/// Runs floor(f * duration_s) pulses against the drift trajectory with
/// the given controller in the loop. Each pulse sees
/// eps = wrap(trajectory(t) - correction); after the pulse, its blinded
/// observation is offered to the controller, so a kick affects only
/// subsequent pulses. Vacuum pulses carry no information and are skipped
/// in bulk by geometric gap sampling, which leaves all observable
/// statistics identical to pulse-by-pulse simulation. The same seed and
/// configuration reproduce the identical result bit for bit.
TransmissionResult run_transmission(const ProtocolParams& params,
                                    const NoiseTrajectory& trajectory,
                                    FeedbackController& controller,
                                    double duration_s, std::uint64_t seed,
                                    const EventSink& sink = {});

}  // namespace b92
