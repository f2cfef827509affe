#pragma once

#include <functional>
#include <optional>

namespace b92 {

/// Per-pulse rates entering the key-gain formula.
struct SecurityRates {
  double lambda_bit = 0.0;     ///< conclusive-and-wrong rate
  double lambda_con = 0.0;     ///< total conclusive rate
  double lambda_ph_bar = 0.0;  ///< upper bound on the phase-error rate
};

/// Binary entropy h(x) = -x log2 x - (1-x) log2 (1-x), with h(0)=h(1)=0.
/// Throws std::domain_error outside [0, 1].
double binary_entropy(double x);

/// Per-pulse rate of conclusive events that decode the wrong bit at
/// residual drift eps: eta * (1 - cos(eps)) / 4. Independent of theta.
double bit_error_rate(double eps, double eta);

/// Per-pulse conclusive rate averaged over Bob's basis:
/// eta * (1 - cos(eps) * cos(theta)^2) / 2.
double conclusive_rate(double theta, double eps, double eta);

/// Fills the directly estimable rates for a residual drift eps_hat.
/// lambda_ph_bar is left at zero; apply a PhaseErrorBound before
/// computing a gain.
SecurityRates estimate_rates_from_eps(double eps_hat, double theta, double eta);

/// Strategy producing an upper bound on the phase-error rate from the
/// estimable rates. Must return a value in [lambda_bit, lambda_con].
using PhaseErrorBound =
    std::function<double(double lambda_bit, double lambda_con)>;

/// Bound assuming the phase-error rate equals the bit-error rate.
PhaseErrorBound naive_phase_bound();

/// Maximally pessimistic bound: every conclusive event may carry a
/// phase error.
PhaseErrorBound worst_case_phase_bound();

/// Applies a bound strategy, returning rates ready for secure_gain.
SecurityRates apply_phase_bound(SecurityRates rates, const PhaseErrorBound& bound);

/// Secure bits per pulse:
/// lambda_con * (1 - h(lambda_bit/lambda_con) - h(lambda_ph_bar/lambda_con)).
/// May be negative; callers interpret the sign. Throws std::domain_error
/// when lambda_con <= 0 (the gain is undefined without conclusive events)
/// or when either ratio leaves [0, 1].
double secure_gain(const SecurityRates& rates);

bool has_positive_gain(const SecurityRates& rates);

/// Largest residual drift that still yields positive gain at the given
/// theta under the bound: the first strict sign change of the gain on
/// [0, pi], located by grid scan plus bisection to 1e-5 rad. Detector
/// efficiency scales the gain without moving its sign, so the result is
/// eta-independent. Returns empty when the gain is not positive even at
/// eps = 0, and pi when the gain never goes negative (touching zero at
/// isolated points does not end the positive region).
std::optional<double> gain_threshold(double theta, const PhaseErrorBound& bound);

/// Threshold reported in the literature for an externally optimized
/// phase-error bound at theta = pi/3. Documented reference point only;
/// neither built-in bound reproduces it.
inline constexpr double kOptimizedBoundThresholdRad = 0.27646;

}  // namespace b92
