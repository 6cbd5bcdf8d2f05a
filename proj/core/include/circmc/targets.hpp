#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "circmc/rng.hpp"
#include "circmc/state.hpp"

namespace circmc {

/// Full conditional of one coordinate as a location-scale family. The
/// coordinate is set to location + scale * F^{-1}(u), F the standard member.
struct Conditional {
  enum class Family { Normal, Gamma };
  Family family = Family::Normal;
  double location = 0.0;
  double scale = 1.0;
  double shape = 1.0;  // Gamma only
};

/// A target density pi, with E(x) = -log pi(x) up to a constant.
class Target {
 public:
  virtual ~Target() = default;

  virtual std::size_t dimension() const = 0;
  virtual std::string name() const = 0;

  virtual double log_density(std::span<const double> x) const = 0;

  // log pi(x) up to a constant that may depend on coordinates outside
  // `changed`. Comparing two states that differ only inside `changed` gives
  // the same ratio as log_density. Targets override this when a cheaper
  // partial evaluation exists.
  virtual double log_density_partial(std::span<const double> x, CoordRange /*changed*/) const {
    return log_density(x);
  }

  virtual bool has_gradient() const { return false; }
  // Returns E(x) and writes dE/dx into grad (length dimension()).
  virtual double energy_and_gradient(std::span<const double> x, std::span<double> grad) const;

  // Number of uniforms consumed by sample_exact; 0 when no exact sampler.
  virtual std::size_t exact_sampler_budget() const { return 0; }
  virtual void sample_exact(const UniformBlock& block, std::span<double> out) const;

  virtual bool has_conditional(std::size_t /*i*/) const { return false; }
  virtual std::optional<Conditional> conditional(std::span<const double> /*x*/,
                                                 std::size_t /*i*/) const {
    return std::nullopt;
  }

  // One-dimensional targets only.
  virtual double cdf(double x) const;
  virtual double mean() const;
};

using TargetPtr = std::shared_ptr<const Target>;

/// Multivariate normal N(mean, covariance).
class GaussianTarget : public Target {
 public:
  GaussianTarget(Eigen::VectorXd mean, Eigen::MatrixXd covariance, std::string name);

  std::size_t dimension() const override { return static_cast<std::size_t>(mean_.size()); }
  std::string name() const override { return name_; }
  double log_density(std::span<const double> x) const override;
  bool has_gradient() const override { return true; }
  double energy_and_gradient(std::span<const double> x, std::span<double> grad) const override;
  std::size_t exact_sampler_budget() const override { return dimension(); }
  void sample_exact(const UniformBlock& block, std::span<double> out) const override;
  bool has_conditional(std::size_t i) const override { return i < dimension(); }
  std::optional<Conditional> conditional(std::span<const double> x, std::size_t i) const override;
  double cdf(double x) const override;
  double mean() const override;

  const Eigen::VectorXd& mean_vector() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return covariance_; }
  const Eigen::MatrixXd& precision() const { return precision_; }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd covariance_;
  Eigen::MatrixXd precision_;
  Eigen::MatrixXd chol_;  // lower factor of covariance
  std::vector<double> precision_rows_;
  std::string name_;
};

/// One-dimensional finite mixture of normals.
class NormalMixture1d : public Target {
 public:
  struct Component {
    double weight;
    double mean;
    double sd;
  };
  NormalMixture1d(std::vector<Component> components, std::string name);

  std::size_t dimension() const override { return 1; }
  std::string name() const override { return name_; }
  double log_density(std::span<const double> x) const override;
  bool has_gradient() const override { return true; }
  double energy_and_gradient(std::span<const double> x, std::span<double> grad) const override;
  // Slot 0 selects the component, slot 1 is its standard normal variate.
  std::size_t exact_sampler_budget() const override { return 2; }
  void sample_exact(const UniformBlock& block, std::span<double> out) const override;
  double cdf(double x) const override;
  double mean() const override;

  const std::vector<Component>& components() const { return components_; }

 private:
  std::vector<Component> components_;
  std::string name_;
};

std::shared_ptr<const GaussianTarget> normal1d();
std::shared_ptr<const NormalMixture1d> bimodal();

struct Mvn9Spec {
  Eigen::MatrixXd covariance;
  Eigen::MatrixXd precision;
  Eigen::VectorXd eigenvalues;  // of the precision, descending
  Eigen::MatrixXd eigenvectors;  // columns aligned with eigenvalues
};

Mvn9Spec mvn9_spec();
std::shared_ptr<const GaussianTarget> mvn9();

/// Start states of the two coupled chains in the nine-dimensional studies.
std::vector<double> mvn9_start_x();
std::vector<double> mvn9_start_x_prime();

/// (x - x')^T P (x - x'). Throws std::invalid_argument on dimension mismatch.
double metric_sq_distance(std::span<const double> x, std::span<const double> x_prime,
                          const Eigen::MatrixXd& precision);

}  // namespace circmc
