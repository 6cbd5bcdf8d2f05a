#include "circmc/targets.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "circmc/special.hpp"

namespace circmc {

double Target::energy_and_gradient(std::span<const double>, std::span<double>) const {
  throw std::logic_error(name() + ": no gradient available");
}

void Target::sample_exact(const UniformBlock&, std::span<double>) const {
  throw std::logic_error(name() + ": no exact sampler available");
}

double Target::cdf(double) const { throw std::logic_error(name() + ": no cdf available"); }

double Target::mean() const { throw std::logic_error(name() + ": no closed-form mean"); }

GaussianTarget::GaussianTarget(Eigen::VectorXd mean, Eigen::MatrixXd covariance, std::string name)
    : mean_(std::move(mean)), covariance_(std::move(covariance)), name_(std::move(name)) {
  const auto d = mean_.size();
  if (d == 0 || covariance_.rows() != d || covariance_.cols() != d) {
    throw std::invalid_argument("GaussianTarget: covariance shape does not match mean");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(covariance_);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("GaussianTarget: covariance is not positive definite");
  }
  chol_ = llt.matrixL();
  precision_ = llt.solve(Eigen::MatrixXd::Identity(d, d));
  precision_ = 0.5 * (precision_ + precision_.transpose());
  precision_rows_.resize(static_cast<std::size_t>(d * d));
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      precision_rows_[static_cast<std::size_t>(i * d + j)] = precision_(i, j);
    }
  }
}

double GaussianTarget::log_density(std::span<const double> x) const {
  const std::size_t d = dimension();
  double diff[64];
  std::vector<double> heap;
  double* dx = diff;
  if (d > 64) {
    heap.resize(d);
    dx = heap.data();
  }
  for (std::size_t i = 0; i < d; ++i) dx[i] = x[i] - mean_[static_cast<Eigen::Index>(i)];
  double q = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double* row = &precision_rows_[i * d];
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) acc += row[j] * dx[j];
    q += dx[i] * acc;
  }
  return -0.5 * q;
}

double GaussianTarget::energy_and_gradient(std::span<const double> x,
                                           std::span<double> grad) const {
  const std::size_t d = dimension();
  std::vector<double> dx(d);
  for (std::size_t i = 0; i < d; ++i) dx[i] = x[i] - mean_[static_cast<Eigen::Index>(i)];
  double q = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double* row = &precision_rows_[i * d];
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) acc += row[j] * dx[j];
    grad[i] = acc;
    q += dx[i] * acc;
  }
  return 0.5 * q;
}

void GaussianTarget::sample_exact(const UniformBlock& block, std::span<double> out) const {
  const auto d = static_cast<Eigen::Index>(dimension());
  Eigen::VectorXd z(d);
  for (Eigen::Index i = 0; i < d; ++i) z[i] = block.normal(static_cast<std::size_t>(i));
  const Eigen::VectorXd x = mean_ + chol_ * z;
  for (Eigen::Index i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] = x[i];
}

std::optional<Conditional> GaussianTarget::conditional(std::span<const double> x,
                                                       std::size_t i) const {
  const std::size_t d = dimension();
  if (i >= d) return std::nullopt;
  const double* row = &precision_rows_[i * d];
  double s = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    if (j != i) s += row[j] * (x[j] - mean_[static_cast<Eigen::Index>(j)]);
  }
  Conditional c;
  c.family = Conditional::Family::Normal;
  c.location = mean_[static_cast<Eigen::Index>(i)] - s / row[i];
  c.scale = 1.0 / std::sqrt(row[i]);
  return c;
}

double GaussianTarget::cdf(double x) const {
  if (dimension() != 1) return Target::cdf(x);
  return normal_cdf((x - mean_[0]) / std::sqrt(covariance_(0, 0)));
}

double GaussianTarget::mean() const {
  if (dimension() != 1) return Target::mean();
  return mean_[0];
}

NormalMixture1d::NormalMixture1d(std::vector<Component> components, std::string name)
    : components_(std::move(components)), name_(std::move(name)) {
  if (components_.empty()) throw std::invalid_argument("NormalMixture1d: no components");
  double total = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight > 0.0) || !(c.sd > 0.0)) {
      throw std::invalid_argument("NormalMixture1d: weights and sds must be positive");
    }
    total += c.weight;
  }
  if (std::fabs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("NormalMixture1d: weights must sum to one");
  }
}

double NormalMixture1d::log_density(std::span<const double> x) const {
  double terms[16];
  std::vector<double> heap;
  double* t = terms;
  if (components_.size() > 16) {
    heap.resize(components_.size());
    t = heap.data();
  }
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const auto& c = components_[k];
    const double z = (x[0] - c.mean) / c.sd;
    t[k] = std::log(c.weight) - std::log(c.sd) - 0.5 * z * z;
    top = std::max(top, t[k]);
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < components_.size(); ++k) sum += std::exp(t[k] - top);
  return top + std::log(sum) - 0.5 * std::log(2.0 * std::numbers::pi);
}

double NormalMixture1d::energy_and_gradient(std::span<const double> x,
                                            std::span<double> grad) const {
  const double lp = log_density(x);
  double g = 0.0;
  for (const auto& c : components_) {
    const double z = (x[0] - c.mean) / c.sd;
    const double log_term = std::log(c.weight) - std::log(c.sd) - 0.5 * z * z -
                            0.5 * std::log(2.0 * std::numbers::pi);
    g += std::exp(log_term - lp) * (x[0] - c.mean) / (c.sd * c.sd);
  }
  grad[0] = g;
  return -lp;
}

void NormalMixture1d::sample_exact(const UniformBlock& block, std::span<double> out) const {
  const double u = block.uniform(0);
  const double z = block.normal(1);
  double cumulative = 0.0;
  const Component* chosen = &components_.back();
  for (const auto& c : components_) {
    cumulative += c.weight;
    if (u < cumulative) {
      chosen = &c;
      break;
    }
  }
  out[0] = chosen->mean + chosen->sd * z;
}

double NormalMixture1d::cdf(double x) const {
  double total = 0.0;
  for (const auto& c : components_) total += c.weight * normal_cdf((x - c.mean) / c.sd);
  return total;
}

double NormalMixture1d::mean() const {
  double total = 0.0;
  for (const auto& c : components_) total += c.weight * c.mean;
  return total;
}

std::shared_ptr<const GaussianTarget> normal1d() {
  return std::make_shared<GaussianTarget>(Eigen::VectorXd::Zero(1),
                                          Eigen::MatrixXd::Identity(1, 1), "normal1d");
}

std::shared_ptr<const NormalMixture1d> bimodal() {
  return std::make_shared<NormalMixture1d>(
      std::vector<NormalMixture1d::Component>{{0.75, -1.0, 1.0}, {0.25, 1.5, 0.1}}, "bimodal");
}

namespace {

Eigen::MatrixXd mvn9_covariance() {
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(9, 9);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) cov(i, j) = i == j ? 1.0 : -0.199;
  }
  for (int i = 6; i < 9; ++i) cov(i, i) = 0.01;
  return cov;
}

}  // namespace

Mvn9Spec mvn9_spec() {
  Mvn9Spec spec;
  spec.covariance = mvn9_covariance();
  spec.precision = spec.covariance.llt().solve(Eigen::MatrixXd::Identity(9, 9));
  spec.precision = 0.5 * (spec.precision + spec.precision.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(spec.precision);
  spec.eigenvalues = solver.eigenvalues().reverse();
  spec.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return spec;
}

std::shared_ptr<const GaussianTarget> mvn9() {
  return std::make_shared<GaussianTarget>(Eigen::VectorXd::Zero(9), mvn9_covariance(), "mvn9");
}

std::vector<double> mvn9_start_x() { return {1.1, 0.5, 0, 0, 0, 0, 0.5, 0.4, 0.3}; }

std::vector<double> mvn9_start_x_prime() { return {-0.9, -0.5, 0, 0, 0, 0, -0.6, -0.4, -0.2}; }

double metric_sq_distance(std::span<const double> x, std::span<const double> x_prime,
                          const Eigen::MatrixXd& precision) {
  const auto d = static_cast<Eigen::Index>(x.size());
  if (x.size() != x_prime.size() || precision.rows() != d || precision.cols() != d) {
    throw std::invalid_argument("metric_sq_distance: dimension mismatch");
  }
  Eigen::VectorXd diff(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    diff[i] = x[static_cast<std::size_t>(i)] - x_prime[static_cast<std::size_t>(i)];
  }
  return std::max(0.0, diff.dot(precision * diff));
}

}  // namespace circmc
