#include <b92/quantum.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace b92 {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;

void check_bit(int j, const char* name) {
  if (j != 0 && j != 1) {
    throw std::domain_error(std::string(name) + " must be 0 or 1");
  }
}

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < kHalfPi)) {
    throw std::domain_error("theta must lie in (0, pi/2)");
  }
}

void check_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw std::domain_error("eta must lie in (0, 1]");
  }
}

}  // namespace

double inner(const StateVector& a, const StateVector& b) {
  return a.c0 * b.c0 + a.c1 * b.c1;
}

void ProtocolParams::validate() const {
  check_theta(theta);
  if (!(trigger_rate_hz > 0.0)) {
    throw std::domain_error("trigger_rate_hz must be positive");
  }
  if (!(mean_photon_number > 0.0)) {
    throw std::domain_error("mean_photon_number must be positive");
  }
  if (!(detector_efficiency > 0.0 && detector_efficiency <= 1.0)) {
    throw std::domain_error("detector_efficiency must lie in (0, 1]");
  }
  if (!(channel_transmittance > 0.0 && channel_transmittance <= 1.0)) {
    throw std::domain_error("channel_transmittance must lie in (0, 1]");
  }
  check_eta(eta());
}

double wrap_angle(double x) {
  double y = std::remainder(x, 2.0 * kPi);
  if (y <= -kPi) {
    y += 2.0 * kPi;
  }
  return y;
}

StateVector signal_state(int j, double theta) {
  check_bit(j, "j");
  check_theta(theta);
  const double sign = (j == 0) ? 1.0 : -1.0;
  return {std::cos(theta / 2.0), sign * std::sin(theta / 2.0)};
}

StateVector orthogonal_state(int j, double theta) {
  check_bit(j, "j");
  check_theta(theta);
  const double sign = (j == 0) ? 1.0 : -1.0;
  return {std::sin(theta / 2.0), -sign * std::cos(theta / 2.0)};
}

DensityMatrix2 source_density(double theta) {
  check_theta(theta);
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return {c * c, 0.0, 0.0, s * s};
}

StateVector rotate(const StateVector& s, double eps) {
  const double c = std::cos(eps / 2.0);
  const double sn = std::sin(eps / 2.0);
  return {c * s.c0 - sn * s.c1, sn * s.c0 + c * s.c1};
}

StateVector drifted_state(int j, double theta, double eps) {
  return rotate(signal_state(j, theta), eps);
}

double p_inconclusive(int k, double theta, double eps, double eta) {
  check_bit(k, "k");
  check_theta(theta);
  check_eta(eta);
  const double sign = (k == 0) ? 1.0 : -1.0;
  return eta * (2.0 + std::cos(eps) + std::cos(2.0 * theta - sign * eps)) / 4.0;
}

double p_conclusive(int k, double theta, double eps, double eta) {
  check_bit(k, "k");
  check_theta(theta);
  check_eta(eta);
  const double sign = (k == 0) ? 1.0 : -1.0;
  return eta * (2.0 - std::cos(eps) - std::cos(2.0 * theta - sign * eps)) / 4.0;
}

}  // namespace b92
