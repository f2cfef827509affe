#pragma once

#include <cstdint>

namespace b92 {

/// Qubit state with real amplitudes in the linear-polarization basis.
/// Every state used by the protocol lives in the real span of the two
/// basis vectors, so complex amplitudes are never needed.
struct StateVector {
  double c0 = 0.0;  ///< amplitude on the first basis vector
  double c1 = 0.0;  ///< amplitude on the second basis vector

  double norm2() const { return c0 * c0 + c1 * c1; }
};

/// Real inner product <a|b>.
double inner(const StateVector& a, const StateVector& b);

/// 2x2 real symmetric density matrix.
struct DensityMatrix2 {
  double m00 = 0.0;
  double m01 = 0.0;
  double m10 = 0.0;
  double m11 = 0.0;

  double trace() const { return m00 + m11; }
};

/// Source and channel parameters for one run.
struct ProtocolParams {
  double theta = 0.0;                 ///< half-angle between the two signal states, rad
  double trigger_rate_hz = 0.0;       ///< pulse rate f
  double mean_photon_number = 0.0;    ///< mu, mean photons per pulse
  double detector_efficiency = 0.0;   ///< eta_B in [0,1]
  double channel_transmittance = 0.0; ///< eta_C in [0,1]

  /// Total per-pulse detection probability eta = mu * eta_B * eta_C.
  double eta() const {
    return mean_photon_number * detector_efficiency * channel_transmittance;
  }

  /// Throws std::domain_error naming the offending field if any parameter
  /// is out of range (theta must lie in (0, pi/2), eta in (0, 1]).
  void validate() const;
};

/// Wraps an angle to (-pi, pi].
double wrap_angle(double x);

/// Signal state for bit j: (cos(theta/2), +/- sin(theta/2)), sign (-1)^j.
/// Throws std::domain_error unless j is 0/1 and theta is in (0, pi/2).
StateVector signal_state(int j, double theta);

/// State orthogonal to signal_state(j, theta); detecting it identifies
/// the opposite bit conclusively.
StateVector orthogonal_state(int j, double theta);

/// Equal mixture of the two signal states: diag(cos^2(theta/2), sin^2(theta/2)).
DensityMatrix2 source_density(double theta);

/// Applies the channel's phase-drift rotation by eps to a state.
/// The sign convention is fixed by rotate(signal_state(0, theta), eps)
/// having polar angle (theta + eps)/2.
StateVector rotate(const StateVector& s, double eps);

/// Signal state for bit j after a channel drift of eps.
StateVector drifted_state(int j, double theta, double eps);

/// Probability that a pulse fires Bob's basis-k detector inconclusively:
/// eta * (2 + cos(eps) + cos(2*theta - (-1)^k * eps)) / 4.
/// Throws std::domain_error on k outside {0,1}, theta outside (0, pi/2),
/// or eta outside (0, 1].
double p_inconclusive(int k, double theta, double eps, double eta);

/// Probability of a conclusive basis-k detection:
/// eta * (2 - cos(eps) - cos(2*theta - (-1)^k * eps)) / 4.
/// Same domain checks as p_inconclusive. The two probabilities sum to eta.
double p_conclusive(int k, double theta, double eps, double eta);

}  // namespace b92
