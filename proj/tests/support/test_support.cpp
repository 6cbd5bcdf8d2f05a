#include "test_support.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <stdexcept>

namespace circmc::testing {

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

double ks_pvalue(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double chi_square_uniform_pvalue(const std::vector<std::size_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (auto c : counts) {
    const double diff = static_cast<double>(c) - expected;
    stat += diff * diff / expected;
  }
  const boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

std::vector<double> finite_difference_gradient(
    const std::function<double(std::span<const double>)>& f, std::vector<double> x, double h) {
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double up = f(x);
    x[i] = saved - h;
    const double down = f(x);
    x[i] = saved;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

double FlatBoxTarget::log_density(std::span<const double> x) const {
  for (double v : x) {
    if (std::abs(v) > half_width_) return -std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

double FlatBoxTarget::energy_and_gradient(std::span<const double> x, std::span<double> grad) const {
  std::fill(grad.begin(), grad.end(), 0.0);
  return -log_density(x);
}

StepStats IdentityKernel::apply(ChainState&, const UniformBlock& block) const {
  (void)block.uniform(0);
  return {};
}

OracleResult theoretical_oracle(const Kernel& kernel, const Target& target,
                                const InitialDistribution& p0, std::uint64_t seed, std::size_t n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("oracle needs even N");
  if (target.exact_sampler_budget() == 0) throw std::invalid_argument("oracle needs an exact sampler");
  const std::size_t half = n / 2;
  auto exact = [&](std::uint64_t id) {
    ChainState s;
    s.x.resize(target.dimension());
    target.sample_exact(UniformBlock(seed, streams::oracle(id), target.exact_sampler_budget()), s.x);
    return s;
  };
  const auto v = simulate_from(kernel, exact(0), seed, 0, half, n);      // v_0..v_{N/2}
  const auto w = simulate_from(kernel, exact(1), seed, half, half, n);   // w_{N/2}..w_N
  const auto v_star = simulate_from(kernel, v.back(), seed, half, half, n);  // v*_{N/2}..v*_N
  const auto w_star = simulate_from(kernel, w.back(), seed, 0, half, n);     // w*_0..w*_{N/2}
  const auto x = run_standard(kernel, p0, seed, n);

  OracleResult out;
  out.y.reserve(n);
  for (std::size_t t = 0; t < half; ++t) out.y.push_back(w_star[t]);
  for (std::size_t t = half; t < n; ++t) out.y.push_back(v_star[t - half]);
  out.event_a = v.back() == w_star.back();
  out.event_b = w.back() == v_star.back();
  out.event_c = x.back() == v_star.back();
  return out;
}

}  // namespace circmc::testing
