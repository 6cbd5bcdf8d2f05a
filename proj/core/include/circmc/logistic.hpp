#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "circmc/targets.hpp"

namespace circmc {

/// Three-class logistic regression data: four predictors per case.
struct LogisticDataset {
  static constexpr std::size_t kCases = 150;
  static constexpr std::size_t kPredictors = 4;
  static constexpr int kClasses = 3;

  std::vector<std::array<double, kPredictors>> predictors;
  std::vector<int> classes;  // values 1..3

  // Throws std::invalid_argument unless there are exactly kCases cases with
  // labels in {1,2,3}.
  void validate() const;
};

/// b(j,k) for j = 0..4 (row 0 is the intercept), k = 1..3.
using CoefficientMatrix = std::array<std::array<double, 3>, 5>;

CoefficientMatrix true_logistic_coefficients();

/// Predictors ~ N(0, Sigma) with variance 2 and covariance 1; classes from
/// the softmax of the true coefficients. Uses its own stream index space so
/// the dataset seed never collides with chain seeds.
LogisticDataset simulate_logistic_dataset(std::uint64_t seed);

/// Class probabilities for one case under coefficients b.
std::array<double, 3> class_probabilities(const CoefficientMatrix& b,
                                          const std::array<double, 4>& predictors);

void write_dataset_csv(const LogisticDataset& data, const std::filesystem::path& path);
LogisticDataset read_dataset_csv(const std::filesystem::path& path);

/// Posterior over (b, tau_1..tau_4, tau_*). State layout:
///   x[3j + (k-1)]  b(j,k), 15 entries
///   x[15 + j - 1]  tau_j,  j = 1..4
///   x[19]          tau_*
/// Priors: b(0,k) ~ N(0,1); b(j,k) | tau_j ~ N(0, 1/tau_j);
/// tau_j | tau_* ~ Exp(rate tau_*); tau_* ~ Exp(1).
class LogisticPosterior : public Target {
 public:
  static constexpr std::size_t kCoefficients = 15;
  static constexpr std::size_t kTauBegin = 15;
  static constexpr std::size_t kTauStar = 19;
  static constexpr std::size_t kDimension = 20;

  explicit LogisticPosterior(LogisticDataset data);

  std::size_t dimension() const override { return kDimension; }
  std::string name() const override { return "logistic"; }

  // Throws std::domain_error when any tau is non-positive.
  double log_density(std::span<const double> x) const override;
  double log_density_partial(std::span<const double> x, CoordRange changed) const override;
  double log_likelihood(std::span<const double> x) const;
  double log_prior(std::span<const double> x) const;

  bool has_gradient() const override { return true; }
  double energy_and_gradient(std::span<const double> x, std::span<double> grad) const override;

  bool has_conditional(std::size_t i) const override;
  // tau_j | rest ~ Gamma(5/2, rate tau_* + sum_k b(j,k)^2 / 2).
  std::optional<Conditional> conditional(std::span<const double> x, std::size_t i) const override;

  static constexpr CoordRange coefficient_range() { return {0, kCoefficients}; }
  static constexpr CoordRange tau_range() { return {kTauBegin, 4}; }
  static constexpr CoordRange tau_star_range() { return {kTauStar, 1}; }
  static constexpr std::size_t index(std::size_t j, std::size_t k) { return 3 * j + (k - 1); }

  const LogisticDataset& data() const { return data_; }

 private:
  LogisticDataset data_;
};

}  // namespace circmc
