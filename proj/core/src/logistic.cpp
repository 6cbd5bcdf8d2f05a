#include "circmc/logistic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "circmc/io.hpp"

namespace circmc {

void LogisticDataset::validate() const {
  if (predictors.size() != kCases || classes.size() != kCases) {
    throw std::invalid_argument("LogisticDataset: expected exactly 150 cases");
  }
  for (int c : classes) {
    if (c < 1 || c > kClasses) throw std::invalid_argument("LogisticDataset: label outside 1..3");
  }
  for (const auto& row : predictors) {
    for (double v : row) {
      if (!std::isfinite(v)) throw std::invalid_argument("LogisticDataset: non-finite predictor");
    }
  }
}

CoefficientMatrix true_logistic_coefficients() {
  return {{{-2.0, 0.0, 1.0},
           {3.0, 1.0, 0.0},
           {0.0, -2.0, 2.0},
           {0.0, 0.0, 0.0},
           {0.0, 0.0, 0.0}}};
}

std::array<double, 3> class_probabilities(const CoefficientMatrix& b,
                                          const std::array<double, 4>& predictors) {
  std::array<double, 3> z{};
  for (std::size_t k = 0; k < 3; ++k) {
    z[k] = b[0][k];
    for (std::size_t j = 0; j < 4; ++j) z[k] += b[j + 1][k] * predictors[j];
  }
  const double top = std::max({z[0], z[1], z[2]});
  double total = 0.0;
  for (double& v : z) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : z) v /= total;
  return z;
}

LogisticDataset simulate_logistic_dataset(std::uint64_t seed) {
  Eigen::Matrix4d cov = Eigen::Matrix4d::Constant(1.0);
  cov.diagonal().setConstant(2.0);
  const Eigen::Matrix4d chol = cov.llt().matrixL();
  const CoefficientMatrix b = true_logistic_coefficients();

  LogisticDataset data;
  data.predictors.resize(LogisticDataset::kCases);
  data.classes.resize(LogisticDataset::kCases);
  for (std::size_t i = 0; i < LogisticDataset::kCases; ++i) {
    const UniformBlock block(seed, streams::dataset(i), 5);
    Eigen::Vector4d z;
    for (int j = 0; j < 4; ++j) z[j] = block.normal(static_cast<std::size_t>(j));
    const Eigen::Vector4d x = chol * z;
    for (int j = 0; j < 4; ++j) data.predictors[i][static_cast<std::size_t>(j)] = x[j];
    const auto probs = class_probabilities(b, data.predictors[i]);
    const double u = block.uniform(4);
    int label = 3;
    if (u < probs[0]) {
      label = 1;
    } else if (u < probs[0] + probs[1]) {
      label = 2;
    }
    data.classes[i] = label;
  }
  return data;
}

void write_dataset_csv(const LogisticDataset& data, const std::filesystem::path& path) {
  data.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "x1,x2,x3,x4,class\n";
  for (std::size_t i = 0; i < data.predictors.size(); ++i) {
    for (double v : data.predictors[i]) out << format_double(v) << ',';
    out << data.classes[i] << '\n';
  }
}

LogisticDataset read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (line.rfind("x1,x2,x3,x4,class", 0) != 0) {
    throw std::invalid_argument("dataset CSV: unexpected header '" + line + "'");
  }
  LogisticDataset data;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 5) throw std::invalid_argument("dataset CSV: expected 5 columns");
    std::array<double, 4> row{};
    for (std::size_t j = 0; j < 4; ++j) row[j] = parse_double(fields[j]);
    data.predictors.push_back(row);
    data.classes.push_back(static_cast<int>(parse_double(fields[4])));
  }
  data.validate();
  return data;
}

LogisticPosterior::LogisticPosterior(LogisticDataset data) : data_(std::move(data)) {
  data_.validate();
}

namespace {

void check_positive_hyperparameters(std::span<const double> x) {
  for (std::size_t i = LogisticPosterior::kTauBegin; i < LogisticPosterior::kDimension; ++i) {
    if (!(x[i] > 0.0)) throw std::domain_error("logistic posterior: tau must be positive");
  }
}

}  // namespace

double LogisticPosterior::log_likelihood(std::span<const double> x) const {
  double total = 0.0;
  for (std::size_t i = 0; i < data_.predictors.size(); ++i) {
    const auto& row = data_.predictors[i];
    double z[3];
    for (std::size_t k = 0; k < 3; ++k) {
      z[k] = x[k] + x[3 + k] * row[0] + x[6 + k] * row[1] + x[9 + k] * row[2] +
             x[12 + k] * row[3];
    }
    const double top = std::max({z[0], z[1], z[2]});
    const double lse =
        top + std::log(std::exp(z[0] - top) + std::exp(z[1] - top) + std::exp(z[2] - top));
    total += z[data_.classes[i] - 1] - lse;
  }
  return total;
}

double LogisticPosterior::log_prior(std::span<const double> x) const {
  check_positive_hyperparameters(x);
  const double tau_star = x[kTauStar];
  double total = -tau_star;
  for (std::size_t k = 0; k < 3; ++k) total -= 0.5 * x[k] * x[k];
  for (std::size_t j = 1; j <= 4; ++j) {
    const double tau = x[kTauBegin + j - 1];
    double sq = 0.0;
    for (std::size_t k = 0; k < 3; ++k) sq += x[3 * j + k] * x[3 * j + k];
    total += 1.5 * std::log(tau) - 0.5 * tau * sq;
    total += std::log(tau_star) - tau_star * tau;
  }
  return total;
}

double LogisticPosterior::log_density(std::span<const double> x) const {
  const double prior = log_prior(x);
  return prior + log_likelihood(x);
}

double LogisticPosterior::log_density_partial(std::span<const double> x,
                                              CoordRange changed) const {
  if (changed.begin >= kTauBegin) return log_prior(x);
  return log_density(x);
}

double LogisticPosterior::energy_and_gradient(std::span<const double> x,
                                              std::span<double> grad) const {
  const double prior = log_prior(x);
  std::fill(grad.begin(), grad.end(), 0.0);
  double loglik = 0.0;
  for (std::size_t i = 0; i < data_.predictors.size(); ++i) {
    const auto& row = data_.predictors[i];
    const double xi[5] = {1.0, row[0], row[1], row[2], row[3]};
    double z[3];
    for (std::size_t k = 0; k < 3; ++k) {
      z[k] = 0.0;
      for (std::size_t j = 0; j < 5; ++j) z[k] += x[3 * j + k] * xi[j];
    }
    const double top = std::max({z[0], z[1], z[2]});
    double e[3];
    double total = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      e[k] = std::exp(z[k] - top);
      total += e[k];
    }
    const std::size_t c = static_cast<std::size_t>(data_.classes[i] - 1);
    loglik += z[c] - top - std::log(total);
    for (std::size_t k = 0; k < 3; ++k) {
      const double resid = (k == c ? 1.0 : 0.0) - e[k] / total;
      for (std::size_t j = 0; j < 5; ++j) grad[3 * j + k] -= resid * xi[j];
    }
  }
  const double tau_star = x[kTauStar];
  for (std::size_t k = 0; k < 3; ++k) grad[k] += x[k];
  double tau_sum = 0.0;
  for (std::size_t j = 1; j <= 4; ++j) {
    const double tau = x[kTauBegin + j - 1];
    double sq = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      grad[3 * j + k] += tau * x[3 * j + k];
      sq += x[3 * j + k] * x[3 * j + k];
    }
    grad[kTauBegin + j - 1] = -1.5 / tau + 0.5 * sq + tau_star;
    tau_sum += tau;
  }
  grad[kTauStar] = -4.0 / tau_star + tau_sum + 1.0;
  return -(prior + loglik);
}

bool LogisticPosterior::has_conditional(std::size_t i) const { return tau_range().contains(i); }

std::optional<Conditional> LogisticPosterior::conditional(std::span<const double> x,
                                                          std::size_t i) const {
  if (!has_conditional(i)) return std::nullopt;
  const std::size_t j = i - kTauBegin + 1;
  double sq = 0.0;
  for (std::size_t k = 0; k < 3; ++k) sq += x[3 * j + k] * x[3 * j + k];
  const double rate = x[kTauStar] + 0.5 * sq;
  Conditional c;
  c.family = Conditional::Family::Gamma;
  c.shape = 2.5;
  c.location = 0.0;
  c.scale = 1.0 / rate;
  return c;
}

}  // namespace circmc
