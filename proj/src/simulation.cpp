#include <b92/simulation.hpp>

#include <cmath>
#include <stdexcept>

namespace b92 {

namespace {

// Conclusive-click probability for a detected pulse given Alice's bit j
// and Bob's basis k, from the overlap of the drifted signal state with
// Bob's orthogonal-state projector.
double conclusive_prob(int j, int k, double theta, double eps) {
  const double amp = inner(orthogonal_state(k, theta), drifted_state(j, theta, eps));
  return amp * amp;
}

}  // namespace

DetectionEvent simulate_pulse(const ProtocolParams& params,
                              double eps_effective, Rng& rng,
                              std::uint64_t pulse_index) {
  DetectionEvent ev;
  ev.pulse_index = pulse_index;
  ev.time_s = params.trigger_rate_hz > 0.0
                  ? static_cast<double>(pulse_index) / params.trigger_rate_hz
                  : 0.0;
  ev.true_eps = wrap_angle(eps_effective);
  ev.alice_bit = rng.bit();
  ev.bob_basis = rng.bit();
  if (!rng.bernoulli(params.eta())) {
    ev.outcome = Outcome::Vacuum;
    return ev;
  }
  const double p = conclusive_prob(ev.alice_bit, ev.bob_basis, params.theta,
                                   ev.true_eps);
  ev.outcome = rng.bernoulli(p) ? Outcome::Conclusive : Outcome::Inconclusive;
  return ev;
}

TransmissionResult run_transmission(const ProtocolParams& params,
                                    const NoiseTrajectory& trajectory,
                                    FeedbackController& controller,
                                    double duration_s, std::uint64_t seed,
                                    const EventSink& sink) {
  params.validate();
  if (!(duration_s > 0.0)) {
    throw std::domain_error("duration_s must be positive");
  }

  const double f = params.trigger_rate_hz;
  const auto total =
      static_cast<std::uint64_t>(std::floor(f * duration_s));
  const double eta = params.eta();

  Rng rng(seed);
  TransmissionResult res;
  res.counts.total_pulses = total;
  if (total == 0) {
    return res;
  }

  // Vacuum pulses are independent of everything else, so the stream of
  // non-vacuum pulse indices is a geometric walk; only those pulses are
  // materialized.
  std::uint64_t index = rng.geometric_gap(eta) - 1;
  while (index < total) {
    const double t = static_cast<double>(index) / f;

    DetectionEvent ev;
    ev.pulse_index = index;
    ev.time_s = t;
    ev.true_eps = trajectory.eval(t);
    ev.alice_bit = rng.bit();
    ev.bob_basis = rng.bit();
    const double eps_eff = wrap_angle(ev.true_eps - controller.correction());
    const double p =
        conclusive_prob(ev.alice_bit, ev.bob_basis, params.theta, eps_eff);
    ev.outcome = rng.bernoulli(p) ? Outcome::Conclusive : Outcome::Inconclusive;

    ++res.counts.nonvacuum_events;
    if (ev.outcome == Outcome::Conclusive) {
      ++res.counts.conclusive;
      // Bob decodes the bit opposite to his basis; a conclusive click
      // with alice_bit == bob_basis decodes wrongly.
      if (ev.alice_bit == ev.bob_basis) {
        ++res.counts.bit_errors;
      }
    } else {
      ++res.counts.inconclusive;
    }

    if (sink) {
      sink(ev);
    }
    if (auto kick = controller.offer({ev.bob_basis, ev.outcome}, t)) {
      res.kicks.push_back(*kick);
    }

    const std::uint64_t gap = rng.geometric_gap(eta);
    if (gap > total - 1 - index) {
      break;
    }
    index += gap;
  }
  return res;
}

}  // namespace b92
