#include "circmc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "circmc/special.hpp"

namespace circmc {

SeparationProfile SeparationProfile::between(std::span<const double> x,
                                             std::span<const double> x_prime) {
  if (x.size() != x_prime.size()) throw std::invalid_argument("separation: dimension mismatch");
  SeparationProfile p;
  p.d.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) p.d[i] = std::fabs(x[i] - x_prime[i]);
  return p;
}

double SeparationProfile::mean() const {
  if (d.empty()) return 0.0;
  return std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
}

double SeparationProfile::max() const {
  return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

CoalescenceProbability proposal_coalescence_prob(const SeparationProfile& profile, double w) {
  if (!(w > 0.0)) throw std::invalid_argument("proposal_coalescence_prob: w must be positive");
  CoalescenceProbability out;
  out.log_approx = -static_cast<double>(profile.d.size()) * profile.mean() / (2.0 * w);
  if (profile.max() >= 2.0 * w) return out;
  double product = 1.0;
  for (double di : profile.d) product *= 1.0 - di / (2.0 * w);
  out.exact = product;
  return out;
}

double predict_mean_tries(double coalescent_prob, double acceptance_rate) {
  if (!(coalescent_prob > 0.0 && coalescent_prob <= 1.0) ||
      !(acceptance_rate > 0.0 && acceptance_rate <= 1.0)) {
    throw std::invalid_argument("predict_mean_tries: probabilities must lie in (0,1]");
  }
  return 1.0 / (coalescent_prob * acceptance_rate);
}

double log_coalescence_rate(double d_bar, double k_bar, std::size_t n, GridKind kind, double w) {
  const double nn = static_cast<double>(n);
  const double accept_scale = kind == GridKind::Single ? nn : std::sqrt(nn);
  return -accept_scale * k_bar * w - nn * d_bar / (2.0 * w);
}

OptimalW optimal_w(double d_bar, double k_bar, std::size_t n, GridKind kind) {
  if (!(d_bar > 0.0) || !(k_bar > 0.0) || n == 0) {
    throw std::invalid_argument("optimal_w: arguments must be positive");
  }
  const double nn = static_cast<double>(n);
  const double w_s = std::sqrt(d_bar / (2.0 * k_bar));
  const double root = std::sqrt(2.0 * d_bar * k_bar);
  if (kind == GridKind::Single) return {w_s, -nn * root};
  return {std::pow(nn, 0.25) * w_s, -std::pow(nn, 0.75) * root};
}

double estimate_k_bar(std::span<const double> ws, std::span<const double> acceptance_rates,
                      std::size_t n, GridKind kind) {
  if (ws.empty() || ws.size() != acceptance_rates.size() || n == 0) {
    throw std::invalid_argument("estimate_k_bar: need matching non-empty probes");
  }
  const double nn = static_cast<double>(n);
  const double scale = kind == GridKind::Single ? nn : std::sqrt(nn);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (!(acceptance_rates[i] > 0.0 && acceptance_rates[i] <= 1.0) || !(ws[i] > 0.0)) {
      throw std::invalid_argument("estimate_k_bar: invalid probe");
    }
    sxy += ws[i] * -std::log(acceptance_rates[i]);
    sxx += ws[i] * ws[i];
  }
  return sxy / (sxx * scale);
}

DistanceDecrease expected_sq_distance_decrease(std::span<const double> x,
                                               std::span<const double> x_prime,
                                               const Eigen::MatrixXd& precision, double omega) {
  const auto d = static_cast<Eigen::Index>(x.size());
  if (x.size() != x_prime.size() || precision.rows() != d || precision.cols() != d) {
    throw std::invalid_argument("expected_sq_distance_decrease: dimension mismatch");
  }
  if (!(omega > 0.0)) throw std::invalid_argument("expected_sq_distance_decrease: omega > 0");
  Eigen::VectorXd diff(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    diff[i] = x[static_cast<std::size_t>(i)] - x_prime[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd pd = precision * diff;
  const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                                  precision, Eigen::EigenvaluesOnly)
                                  .eigenvalues();
  DistanceDecrease out;
  out.expected = omega * pd.squaredNorm();
  const double dist = diff.dot(pd);
  out.relative = dist > 0.0 ? out.expected / dist : 0.0;
  out.relative_lower = omega * eig.minCoeff();
  out.relative_upper = omega * eig.maxCoeff();
  return out;
}

double schedule_cost(double d0, double d_star, double r0, ScheduleMode mode) {
  if (!(d_star > 0.0) || !(d0 >= d_star) || !(r0 > 0.0)) {
    throw std::invalid_argument("schedule_cost: need D0 >= D* > 0 and R0 > 0");
  }
  const double ratio = d0 / d_star;
  if (mode == ScheduleMode::Varying) return (ratio - 1.0) / r0;
  return std::log(ratio) / r0 * ratio;
}

double stage_count(double d0, double d_star, double a) {
  if (!(d_star > 0.0) || !(d0 > 0.0) || !(a > 0.0)) {
    throw std::invalid_argument("stage_count: arguments must be positive");
  }
  return (std::log(d0) - std::log(d_star)) / (2.0 * a);
}

CoalescenceRecord::CoalescenceRecord(std::vector<double> t, std::vector<bool> c, double cap)
    : times(std::move(t)), censored(std::move(c)), censor_cap(cap) {
  if (times.size() != censored.size()) {
    throw std::invalid_argument("CoalescenceRecord: times and flags differ in length");
  }
  if (!(censor_cap > 0.0)) throw std::invalid_argument("CoalescenceRecord: cap must be positive");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || times[i] > censor_cap) {
      throw std::invalid_argument("CoalescenceRecord: time outside [0, cap]");
    }
    if (censored[i] && times[i] != censor_cap) {
      throw std::invalid_argument("CoalescenceRecord: censored time must equal the cap");
    }
  }
}

std::size_t CoalescenceRecord::events() const {
  return static_cast<std::size_t>(std::count(censored.begin(), censored.end(), false));
}

std::size_t CoalescenceRecord::censored_count() const { return times.size() - events(); }

double CoalescenceRecord::total_time() const {
  return std::accumulate(times.begin(), times.end(), 0.0);
}

GeometricEstimate estimate_delta_geometric(const CoalescenceRecord& record, std::size_t n) {
  if (record.times.empty()) throw std::invalid_argument("estimate_delta_geometric: empty record");
  const double total = record.total_time();
  if (!(total > 0.0)) throw std::invalid_argument("estimate_delta_geometric: zero total time");
  GeometricEstimate out;
  const std::size_t events = record.events();
  if (events == 0) {
    out.p_hat = std::min(1.0, 1.0 / total);
    out.upper_bound_only = true;
  } else {
    out.p_hat = std::min(1.0, static_cast<double>(events) / total);
  }
  out.tail_beyond_n = std::pow(1.0 - out.p_hat, static_cast<double>(n));
  return out;
}

PosteriorSummary coalescence_posterior(const CoalescenceRecord& record) {
  const std::size_t events = record.events();
  if (events < 2) throw std::invalid_argument("coalescence_posterior: need at least 2 events");
  const double total = record.total_time();
  const double shape = static_cast<double>(events);
  PosteriorSummary out;
  out.events = events;
  out.censored = record.censored_count();
  out.mean = total / shape;
  out.lower = total / gamma_quantile(shape, 0.95, 1e-8);
  out.upper = total / gamma_quantile(shape, 0.05, 1e-8);
  return out;
}

double circular_autocovariance(std::span<const double> trace, std::size_t lag) {
  const std::size_t n = trace.size();
  if (n == 0 || lag >= n) throw std::invalid_argument("circular_autocovariance: lag outside [0,N)");
  const double mean = std::accumulate(trace.begin(), trace.end(), 0.0) / static_cast<double>(n);
  double total = 0.0;
  for (std::size_t t = 0; t < n; ++t) total += (trace[t] - mean) * (trace[(t + lag) % n] - mean);
  return total / static_cast<double>(n);
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("linear_fit: need at least two paired points");
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("linear_fit: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

Table1Inputs table1_reference_inputs() {
  Table1Inputs in;
  in.w = {0.1, 0.2, 0.4};
  in.coalescent_full = {0.20, 0.48, 0.6993};
  in.coalescent_truncated = {0.0443, 0.245, 0.508};
  in.accept_multi = {0.55, 0.24, 0.041};
  in.accept_single = {0.26, 0.067, 0.0025};
  return in;
}

std::array<std::array<long, 3>, 3> table1_predictions(const Table1Inputs& in) {
  std::array<std::array<long, 3>, 3> out{};
  for (std::size_t i = 0; i < 3; ++i) {
    out[i][0] = std::lround(predict_mean_tries(in.coalescent_full[i], in.accept_multi[i]));
    out[i][1] = std::lround(predict_mean_tries(in.coalescent_truncated[i], in.accept_multi[i]));
    out[i][2] = std::lround(predict_mean_tries(in.coalescent_full[i], in.accept_single[i]));
  }
  return out;
}

}  // namespace circmc
