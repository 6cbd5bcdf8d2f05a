#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace circmc {

/// Absolute per-component differences between two chains.
struct SeparationProfile {
  std::vector<double> d;

  static SeparationProfile between(std::span<const double> x, std::span<const double> x_prime);
  double mean() const;
  double max() const;
};

struct CoalescenceProbability {
  double exact = 0.0;       // prod_i (1 - d_i / 2w), or 0 if any d_i >= 2w
  double log_approx = 0.0;  // -n dbar / 2w
};

CoalescenceProbability proposal_coalescence_prob(const SeparationProfile& profile, double w);

/// 1 / (coalescent_prob * acceptance_rate). Both arguments in (0,1].
double predict_mean_tries(double coalescent_prob, double acceptance_rate);

enum class GridKind { Single, Multi };

/// Log probability of an accepted coalescent proposal as a function of w:
/// single -n K w - n d/2w, multi -sqrt(n) K w - n d/2w.
double log_coalescence_rate(double d_bar, double k_bar, std::size_t n, GridKind kind, double w);

struct OptimalW {
  double w = 0.0;
  double log_prob = 0.0;
};

OptimalW optimal_w(double d_bar, double k_bar, std::size_t n, GridKind kind);

/// K from acceptance rates measured at several w, by least squares through
/// the origin of -log(acceptance) on w (scaled by n or sqrt(n)).
double estimate_k_bar(std::span<const double> ws, std::span<const double> acceptance_rates,
                      std::size_t n, GridKind kind);

struct DistanceDecrease {
  double expected = 0.0;        // omega (x-x')^T P^2 (x-x')
  double relative = 0.0;        // expected / ((x-x')^T P (x-x'))
  double relative_lower = 0.0;  // omega * smallest eigenvalue of P
  double relative_upper = 0.0;  // omega * largest eigenvalue of P
};

DistanceDecrease expected_sq_distance_decrease(std::span<const double> x,
                                               std::span<const double> x_prime,
                                               const Eigen::MatrixXd& precision, double omega);

enum class ScheduleMode { Varying, Fixed };

double schedule_cost(double d0, double d_star, double r0, ScheduleMode mode);

/// Number of stages when sigma shrinks by e^{-a} per stage.
double stage_count(double d0, double d_star, double a);

/// Coalescence times, right-censored at censor_cap.
struct CoalescenceRecord {
  std::vector<double> times;
  std::vector<bool> censored;
  double censor_cap = 0.0;

  CoalescenceRecord() = default;
  CoalescenceRecord(std::vector<double> times, std::vector<bool> censored, double censor_cap);

  std::size_t events() const;
  std::size_t censored_count() const;
  double total_time() const;
};

struct GeometricEstimate {
  double p_hat = 0.0;
  double tail_beyond_n = 0.0;  // (1 - p_hat)^n
  bool upper_bound_only = false;
};

/// Censored geometric MLE: events / total recorded time. With no events the
/// estimate 1/total is returned and flagged as a bound.
GeometricEstimate estimate_delta_geometric(const CoalescenceRecord& record, std::size_t n);

struct PosteriorSummary {
  double mean = 0.0;
  double lower = 0.0;  // 5% point of the mean time
  double upper = 0.0;  // 95% point of the mean time
  std::size_t events = 0;
  std::size_t censored = 0;
};

/// Exponential coalescence times with a 1/rate prior: rate | data ~
/// Gamma(events, total time). Reports total/events and the reciprocals of
/// the 95% and 5% rate quantiles. Throws std::invalid_argument below two
/// events.
PosteriorSummary coalescence_posterior(const CoalescenceRecord& record);

/// Mean of (y_t - ybar)(y_{t+lag mod N} - ybar).
double circular_autocovariance(std::span<const double> trace, std::size_t lag);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

/// Inputs for the coalescence-time predictions of the varying-sigma study,
/// for w = 0.1, 0.2, 0.4: coalescent-proposal probabilities after the full
/// and the truncated schedule, and acceptance rates of the final update.
struct Table1Inputs {
  std::array<double, 3> w;
  std::array<double, 3> coalescent_full;
  std::array<double, 3> coalescent_truncated;
  std::array<double, 3> accept_multi;
  std::array<double, 3> accept_single;
};

Table1Inputs table1_reference_inputs();

/// Predicted mean tries, rows by w, columns (multi full, multi truncated,
/// component sweep full), rounded to the nearest integer.
std::array<std::array<long, 3>, 3> table1_predictions(const Table1Inputs& inputs);

}  // namespace circmc
