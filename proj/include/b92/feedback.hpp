#pragma once

#include <b92/events.hpp>

#include <array>
#include <cstdint>
#include <optional>

namespace b92 {

/// Ratio of inconclusive to conclusive detections expected in Bob's
/// basis k at drift eps: (2 + cos(eps) + cos(2*theta - (-1)^k * eps)) /
/// (2 - cos(eps) - cos(2*theta - (-1)^k * eps)).
/// Detector efficiency cancels, which is what makes the ratio usable as
/// a control signal. Periodic in eps; throws std::domain_error on k
/// outside {0,1} or theta outside (0, pi/2).
double control_function(int k, double theta, double eps);

/// d/d(eps) of control_function(0, theta, eps) at eps = 0, in closed
/// form: 4*sin(2*theta) / (1 - cos(2*theta))^2.
double control_slope_at_zero(double theta);

/// Windowed detection tallies per basis, the controller's only state
/// between kicks.
struct ControlEstimate {
  std::array<std::uint64_t, 2> n_conclusive{{0, 0}};
  std::array<std::uint64_t, 2> n_inconclusive{{0, 0}};

  /// Counts a non-vacuum observation. Vacuum observations are ignored.
  void record(const ControlObservation& obs);

  std::uint64_t total() const;

  /// Empirical ratio n_inconclusive[k] / n_conclusive[k]; empty when the
  /// basis has no conclusive counts yet.
  std::optional<double> ratio(int k) const;

  void reset() { *this = ControlEstimate{}; }
};

/// Which basis the tangent estimator reads.
enum class FastBasis : std::uint8_t { Basis0, Basis1, Average };

/// Tangent inversion of the control function around eps = 0:
/// eps_hat = (r_star - R(theta, 0)) / slope, using the chosen basis
/// (for Average, the mean of the two single-basis estimates).
/// Valid while the drift stays inside the ratio's monotone window
/// around zero, which is (theta - pi, theta) for basis 0; relative
/// inversion error stays below 10% for |eps| <= 0.1.
/// Returns empty (abstains) when a needed basis has no conclusive
/// counts. max_kick, if given, clamps the result to [-max_kick, max_kick].
std::optional<double> estimate_fast(const ControlEstimate& est, double theta,
                                    FastBasis basis = FastBasis::Basis0,
                                    std::optional<double> max_kick = std::nullopt);

/// Global inversion of both ratios: minimizes
/// |R_0(theta, eps) - r0_star| + |R_1(theta, eps) - r1_star|
/// over a uniform grid on (-pi, pi] of the given resolution, then
/// refines inside the winning cell with a golden-section pass. Exact
/// ties prefer the candidate closer to zero. The ratio pair identifies
/// eps uniquely on the wrapped interval, so no monotone window is
/// needed. Abstains when either basis lacks conclusive counts.
std::optional<double> estimate_slow(const ControlEstimate& est, double theta,
                                    double resolution = 1e-3);

enum class FeedbackMode : std::uint8_t { Fast, Slow };

struct FeedbackConfig {
  FeedbackMode mode = FeedbackMode::Fast;
  std::uint64_t window = 5000;   ///< non-vacuum events per kick
  double theta = 0.0;
  double grid_resolution = 1e-3; ///< slow-mode grid spacing, rad
  std::optional<double> max_kick;///< fast-mode kick clamp, off by default
  FastBasis fast_basis = FastBasis::Basis0;

  /// Throws std::domain_error naming the offending field.
  void validate() const;
};

/// One feedback kick. applied_correction is the accumulated correction
/// after this kick, wrapped to (-pi, pi].
struct KickRecord {
  std::uint64_t kick_index = 0;
  double time_s = 0.0;
  std::uint64_t window_events = 0;
  std::optional<double> r0_star;
  std::optional<double> r1_star;
  std::optional<double> eps_hat;  ///< empty when the estimator abstained
  double applied_correction = 0.0;
  bool abstained = false;
};

/// Consumes blinded observations and decides corrections.
class FeedbackController {
 public:
  virtual ~FeedbackController() = default;

  /// Offers one observation. Returns a record when this observation
  /// completed a window and triggered a kick (or an abstention).
  virtual std::optional<KickRecord> offer(const ControlObservation& obs,
                                          double time_s) = 0;

  /// Correction currently applied to the channel, wrapped to (-pi, pi].
  virtual double correction() const = 0;
};

/// Controller that never kicks; used for open-loop runs.
class NoopController final : public FeedbackController {
 public:
  std::optional<KickRecord> offer(const ControlObservation&, double) override {
    return std::nullopt;
  }
  double correction() const override { return 0.0; }
};

/// Count-based windowed controller: tallies non-vacuum observations,
/// fires a kick every config.window of them, and resets the window
/// whether or not the estimator abstained. Abstentions leave the
/// correction unchanged but are still logged.
class WindowedController final : public FeedbackController {
 public:
  explicit WindowedController(FeedbackConfig config);

  std::optional<KickRecord> offer(const ControlObservation& obs,
                                  double time_s) override;
  double correction() const override { return correction_; }

  const FeedbackConfig& config() const { return config_; }

 private:
  FeedbackConfig config_;
  ControlEstimate window_;
  double correction_ = 0.0;
  std::uint64_t kicks_fired_ = 0;
};

}  // namespace b92
