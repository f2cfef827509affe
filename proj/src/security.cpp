#include <b92/security.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace b92 {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kThresholdTolRad = 1e-5;

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < kPi / 2.0)) {
    throw std::domain_error("theta must lie in (0, pi/2)");
  }
}

void check_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::domain_error("eta must lie in (0, 1]");
  }
}

}  // namespace

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("binary_entropy argument must lie in [0, 1]");
  }
  if (x == 0.0 || x == 1.0) {
    return 0.0;
  }
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double bit_error_rate(double eps, double eta) {
  check_eta(eta);
  return eta * (1.0 - std::cos(eps)) / 4.0;
}

double conclusive_rate(double theta, double eps, double eta) {
  check_theta(theta);
  check_eta(eta);
  const double c = std::cos(theta);
  return eta * (1.0 - std::cos(eps) * c * c) / 2.0;
}

SecurityRates estimate_rates_from_eps(double eps_hat, double theta, double eta) {
  SecurityRates r;
  r.lambda_bit = bit_error_rate(eps_hat, eta);
  r.lambda_con = conclusive_rate(theta, eps_hat, eta);
  return r;
}

PhaseErrorBound naive_phase_bound() {
  return [](double lambda_bit, double) { return lambda_bit; };
}

PhaseErrorBound worst_case_phase_bound() {
  return [](double, double lambda_con) { return lambda_con; };
}

SecurityRates apply_phase_bound(SecurityRates rates, const PhaseErrorBound& bound) {
  rates.lambda_ph_bar = bound(rates.lambda_bit, rates.lambda_con);
  if (!(rates.lambda_ph_bar >= 0.0 && rates.lambda_ph_bar <= rates.lambda_con)) {
    throw std::domain_error("phase-error bound left [0, lambda_con]");
  }
  return rates;
}

double secure_gain(const SecurityRates& rates) {
  if (!(rates.lambda_con > 0.0)) {
    throw std::domain_error("gain undefined when lambda_con is not positive");
  }
  const double x_bit = rates.lambda_bit / rates.lambda_con;
  const double x_ph = rates.lambda_ph_bar / rates.lambda_con;
  return rates.lambda_con *
         (1.0 - binary_entropy(x_bit) - binary_entropy(x_ph));
}

bool has_positive_gain(const SecurityRates& rates) {
  return secure_gain(rates) > 0.0;
}

std::optional<double> gain_threshold(double theta, const PhaseErrorBound& bound) {
  check_theta(theta);
  const auto gain_at = [&](double eps) {
    return secure_gain(
        apply_phase_bound(estimate_rates_from_eps(eps, theta, 1.0), bound));
  };

  if (!(gain_at(0.0) > 0.0)) {
    return std::nullopt;
  }

  // Locate the first strict sign change on a grid, then bisect the
  // bracket. A gain that merely touches zero (the worst-case bound does,
  // where the error ratio passes 1/2) does not end the positive region.
  constexpr int kGrid = 4096;
  double lo = 0.0;
  double hi = kPi;
  bool bracketed = false;
  for (int i = 1; i <= kGrid; ++i) {
    const double eps = kPi * static_cast<double>(i) / kGrid;
    if (gain_at(eps) < 0.0) {
      lo = kPi * static_cast<double>(i - 1) / kGrid;
      hi = eps;
      bracketed = true;
      break;
    }
  }
  if (!bracketed) {
    return kPi;  // never strictly negative below pi
  }
  while (hi - lo > kThresholdTolRad / 10.0) {
    const double mid = 0.5 * (lo + hi);
    if (gain_at(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace b92
