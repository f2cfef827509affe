#include <b92/feedback.hpp>

#include <b92/quantum.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace b92 {

namespace {

constexpr double kPi = std::numbers::pi;

void check_basis(int k) {
  if (k != 0 && k != 1) {
    throw std::domain_error("basis index must be 0 or 1");
  }
}

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < kPi / 2.0)) {
    throw std::domain_error("theta must lie in (0, pi/2)");
  }
}

double ratio_mismatch(double theta, double eps, double r0_star, double r1_star) {
  return std::abs(control_function(0, theta, eps) - r0_star) +
         std::abs(control_function(1, theta, eps) - r1_star);
}

double tangent_estimate(int k, double r_star, double theta) {
  const double at_zero = control_function(k, theta, 0.0);
  const double slope = control_slope_at_zero(theta);
  // R_1 mirrors R_0 in eps, so its slope at zero is the negative.
  const double s = (k == 0) ? slope : -slope;
  return (r_star - at_zero) / s;
}

}  // namespace

double control_function(int k, double theta, double eps) {
  check_basis(k);
  check_theta(theta);
  const double sign = (k == 0) ? 1.0 : -1.0;
  const double a = std::cos(eps) + std::cos(2.0 * theta - sign * eps);
  return (2.0 + a) / (2.0 - a);
}

double control_slope_at_zero(double theta) {
  check_theta(theta);
  const double d = 1.0 - std::cos(2.0 * theta);
  return 4.0 * std::sin(2.0 * theta) / (d * d);
}

void ControlEstimate::record(const ControlObservation& obs) {
  if (obs.outcome == Outcome::Vacuum) {
    return;
  }
  check_basis(obs.bob_basis);
  if (obs.outcome == Outcome::Conclusive) {
    ++n_conclusive[obs.bob_basis];
  } else {
    ++n_inconclusive[obs.bob_basis];
  }
}

std::uint64_t ControlEstimate::total() const {
  return n_conclusive[0] + n_conclusive[1] + n_inconclusive[0] +
         n_inconclusive[1];
}

std::optional<double> ControlEstimate::ratio(int k) const {
  check_basis(k);
  if (n_conclusive[k] == 0) {
    return std::nullopt;
  }
  return static_cast<double>(n_inconclusive[k]) /
         static_cast<double>(n_conclusive[k]);
}

std::optional<double> estimate_fast(const ControlEstimate& est, double theta,
                                    FastBasis basis,
                                    std::optional<double> max_kick) {
  check_theta(theta);
  std::optional<double> eps_hat;
  switch (basis) {
    case FastBasis::Basis0:
      if (auto r = est.ratio(0)) {
        eps_hat = tangent_estimate(0, *r, theta);
      }
      break;
    case FastBasis::Basis1:
      if (auto r = est.ratio(1)) {
        eps_hat = tangent_estimate(1, *r, theta);
      }
      break;
    case FastBasis::Average: {
      const auto r0 = est.ratio(0);
      const auto r1 = est.ratio(1);
      // The average needs both bases; abstain if either is missing.
      if (r0 && r1) {
        eps_hat = 0.5 * (tangent_estimate(0, *r0, theta) +
                         tangent_estimate(1, *r1, theta));
      }
      break;
    }
  }
  if (eps_hat && max_kick) {
    if (!(*max_kick > 0.0)) {
      throw std::domain_error("max_kick must be positive");
    }
    eps_hat = std::clamp(*eps_hat, -*max_kick, *max_kick);
  }
  return eps_hat;
}

std::optional<double> estimate_slow(const ControlEstimate& est, double theta,
                                    double resolution) {
  check_theta(theta);
  if (!(resolution > 0.0)) {
    throw std::domain_error("resolution must be positive");
  }
  const auto r0 = est.ratio(0);
  const auto r1 = est.ratio(1);
  if (!r0 || !r1) {
    return std::nullopt;
  }

  const auto objective = [&](double eps) {
    return ratio_mismatch(theta, eps, *r0, *r1);
  };

  // Uniform grid over (-pi, pi]; ties prefer the candidate nearer zero.
  const int n = static_cast<int>(std::ceil(2.0 * kPi / resolution));
  const double h = 2.0 * kPi / n;
  double best_eps = kPi;
  double best_val = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= n; ++i) {
    const double eps = -kPi + h * i;
    const double v = objective(eps);
    const bool better =
        v < best_val ||
        (v == best_val && (std::abs(eps) < std::abs(best_eps) ||
                           (std::abs(eps) == std::abs(best_eps) && eps < best_eps)));
    if (better) {
      best_val = v;
      best_eps = eps;
    }
  }

  // Golden-section pass inside the winning cell.
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best_eps - h;
  double b = best_eps + h;
  double x1 = b - phi * (b - a);
  double x2 = a + phi * (b - a);
  double f1 = objective(x1);
  double f2 = objective(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = objective(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = objective(x2);
    }
  }
  const double refined = 0.5 * (a + b);
  if (objective(refined) <= best_val) {
    best_eps = refined;
  }
  return wrap_angle(best_eps);
}

void FeedbackConfig::validate() const {
  check_theta(theta);
  if (window < 1) {
    throw std::domain_error("window must be at least 1");
  }
  if (!(grid_resolution > 0.0)) {
    throw std::domain_error("grid_resolution must be positive");
  }
  if (max_kick && !(*max_kick > 0.0)) {
    throw std::domain_error("max_kick must be positive");
  }
}

WindowedController::WindowedController(FeedbackConfig config)
    : config_(std::move(config)) {
  config_.validate();
}

std::optional<KickRecord> WindowedController::offer(
    const ControlObservation& obs, double time_s) {
  if (obs.outcome == Outcome::Vacuum) {
    return std::nullopt;
  }
  window_.record(obs);
  if (window_.total() < config_.window) {
    return std::nullopt;
  }

  KickRecord rec;
  rec.kick_index = kicks_fired_;
  rec.time_s = time_s;
  rec.window_events = window_.total();
  rec.r0_star = window_.ratio(0);
  rec.r1_star = window_.ratio(1);

  std::optional<double> eps_hat;
  if (config_.mode == FeedbackMode::Fast) {
    eps_hat = estimate_fast(window_, config_.theta, config_.fast_basis,
                            config_.max_kick);
  } else {
    eps_hat = estimate_slow(window_, config_.theta, config_.grid_resolution);
  }

  if (eps_hat) {
    correction_ = wrap_angle(correction_ + *eps_hat);
    rec.eps_hat = eps_hat;
  } else {
    rec.abstained = true;
  }
  rec.applied_correction = correction_;

  window_.reset();
  ++kicks_fired_;
  return rec;
}

}  // namespace b92
