#include <gtest/gtest.h>

#include <cmath>

#include "circmc/engine.hpp"
#include "circmc/initial.hpp"
#include "circmc/logistic.hpp"
#include "circmc/schedules.hpp"
#include "circmc/special.hpp"
#include "test_support.hpp"

namespace circmc {
namespace {

struct NamedKernel {
  std::string name;
  KernelPtr kernel;
  std::function<ChainState(std::uint64_t)> state;
};

std::vector<NamedKernel> kernel_zoo() {
  const auto g = mvn9();
  const auto posterior = std::make_shared<LogisticPosterior>(simulate_logistic_dataset(1));
  auto mvn_state = [g](std::uint64_t id) {
    ChainState s{std::vector<double>(9), {}};
    g->sample_exact(UniformBlock(1, streams::auxiliary(id), 9), s.x);
    return s;
  };
  auto mvn_state_p = [mvn_state](std::uint64_t id) {
    auto s = mvn_state(id);
    s.p.assign(9, 0.1 * static_cast<double>(id));
    return s;
  };
  auto logistic_state = [](std::uint64_t id) { return draw_initial(LogisticPriorInit(), 2, id); };
  auto wide_1d = [](std::uint64_t id) { return ChainState{{8.0 * (uniform({3, 0, id}) - 0.5)}, {}}; };

  using RG = RandomGridMetropolis;
  using RW = RandomWalkMetropolis;
  return {
      {"rg_1d", std::make_shared<RG>(bimodal(), RG::Params{.w = 0.5}), wide_1d},
      {"rg_multi", std::make_shared<RG>(g, RG::Params{.w = 0.1}), mvn_state},
      {"rg_component", std::make_shared<RG>(g, RG::Params{.w = 0.12, .mode = UpdateMode::RandomComponent}),
       mvn_state},
      {"rg_log_tau_star",
       std::make_shared<RG>(posterior, RG::Params{.w = 0.1, .coords = LogisticPosterior::tau_star_range(),
                                                  .transform = CoordTransform::Log}),
       logistic_state},
      {"rw_normal", std::make_shared<RW>(g, RW::Params{.scale = 0.05}), mvn_state},
      {"rw_uniform_component",
       std::make_shared<RW>(g, RW::Params{.scale = 0.2, .shape = OffsetShape::Uniform,
                                          .mode = UpdateMode::RandomComponent}),
       mvn_state},
      {"langevin", std::make_shared<Langevin>(g, Langevin::Params{.epsilon = 0.08}), mvn_state},
      {"langevin_persistent", std::make_shared<Langevin>(g, Langevin::Params{.epsilon = 0.08, .alpha = 0.95}),
       mvn_state_p},
      {"gibbs", std::make_shared<GibbsInversion>(g, std::vector<std::size_t>{0, 3, 8}), mvn_state},
      {"gibbs_tau", std::make_shared<GibbsInversion>(posterior, std::vector<std::size_t>{15, 16, 17, 18}),
       logistic_state},
      {"varying_sigma",
       make_varying_sigma_step(g, {{0.04, 5}, {0.02, 5}}, 0.2, GridFinish::ComponentSweep), mvn_state},
      {"logistic_iteration", make_logistic_iteration(posterior), logistic_state},
  };
}

TEST(Properties, FixedVariateBudget) {
  for (const auto& nk : kernel_zoo()) {
    for (std::uint64_t id = 0; id < 20; ++id) {
      std::size_t reads = 0;
      auto s = nk.state(id);
      const auto block =
          block_for(5, id, static_cast<std::int64_t>(nk.kernel->budget())).counting(&reads);
      nk.kernel->apply(s, block);
      EXPECT_EQ(reads, nk.kernel->budget()) << nk.name << " state " << id;
    }
  }
}

TEST(Properties, CoalescencePermanence) {
  for (const auto& nk : kernel_zoo()) {
    for (std::uint64_t id = 0; id < 10; ++id) {
      auto a = nk.state(id);
      auto b = a;
      for (std::uint64_t t = 0; t < 5; ++t) {
        const auto block = block_for(6, t, static_cast<std::int64_t>(nk.kernel->budget()));
        nk.kernel->apply(a, block);
        nk.kernel->apply(b, block);
        ASSERT_EQ(a, b) << nk.name;
      }
    }
  }
}

TEST(Properties, ReplayDeterminism) {
  for (const auto& nk : kernel_zoo()) {
    const auto first = simulate_from(*nk.kernel, nk.state(1), 9, 0, 4, 10);
    const auto second = simulate_from(*nk.kernel, nk.state(1), 9, 0, 4, 10);
    EXPECT_EQ(first, second) << nk.name;
  }
}

TEST(Properties, GridAlignmentAfterBothAccept) {
  const auto flat = std::make_shared<testing::FlatBoxTarget>(9, 1e6);
  const double w = 0.1;
  const RandomGridMetropolis k(flat, {.w = w});
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    ChainState a{mvn9_start_x(), {}};
    ChainState b{mvn9_start_x_prime(), {}};
    for (std::size_t i = 0; i < 9; ++i) b.x[i] += uniform({8, trial, i});
    k.apply(a, block_for(8, trial, 10));
    k.apply(b, block_for(8, trial, 10));
    for (std::size_t i = 0; i < 9; ++i) {
      const double d = a.x[i] - b.x[i];
      EXPECT_NEAR(d, 2 * w * std::round(d / (2 * w)), 1e-12);
    }
    const auto next = block_for(8, trial + 1000, 10);
    for (std::size_t i = 0; i < 9; ++i) {
      const double u1 = next.uniform(i + 1);
      EXPECT_NEAR(rg_grid_point(a.x[i], u1, w) - a.x[i], rg_grid_point(b.x[i], u1, w) - b.x[i], 1e-12);
    }
  }
}

TEST(Properties, GridDifferenceMartingale) {
  const auto flat = std::make_shared<testing::FlatBoxTarget>(1, 1e6);
  const double w = 0.5;
  const RandomGridMetropolis k(flat, {.w = w});
  for (double d0 : {0.37, 0.05, 0.9, 2.6}) {
    const std::size_t n = 100000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t t = 0; t < n; ++t) {
      const auto block = block_for(10, t, 2);
      const double d = k.step({{d0}, {}}, block).x[0] - k.step({{0.0}, {}}, block).x[0];
      sum += d;
      sum_sq += d * d;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / n);
    EXPECT_NEAR(mean, d0, 3 * se + 1e-12) << d0;
  }
}

void expect_stationary(const Kernel& k, const Target& target, std::uint64_t seed) {
  std::vector<double> out;
  const std::size_t n = 100000;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    ChainState s{{0.0}, {}};
    target.sample_exact(UniformBlock(seed, streams::oracle(i), target.exact_sampler_budget()), s.x);
    k.apply(s, block_for(seed, i, static_cast<std::int64_t>(k.budget())));
    out.push_back(s.x[0]);
  }
  const double d = testing::ks_statistic(out, [&](double x) { return target.cdf(x); });
  EXPECT_GT(testing::ks_pvalue(d, n), 0.001) << k.descriptor().dump();
}

TEST(Properties, KernelsPreserveOneDimensionalTargets) {
  const std::vector<TargetPtr> targets = {normal1d(), bimodal()};
  for (const auto& t : targets) {
    expect_stationary(RandomGridMetropolis(t, {.w = 0.5}), *t, 11);
    expect_stationary(RandomWalkMetropolis(t, {.scale = 1.0}), *t, 12);
    expect_stationary(RandomWalkMetropolis(t, {.scale = 0.3, .shape = OffsetShape::Uniform}), *t, 13);
    expect_stationary(Langevin(t, {.epsilon = 0.5}), *t, 14);
  }
  expect_stationary(GibbsInversion(normal1d(), {0}), *normal1d(), 15);
}

TEST(Properties, UncorrectedLangevinEigenContraction) {
  const auto spec = mvn9_spec();
  for (double eps : {0.08, 0.04, 0.14}) {
    const Langevin k(mvn9(), {.epsilon = eps, .corrected = false});
    for (int i = 0; i < 9; ++i) {
      const Eigen::VectorXd v = spec.eigenvectors.col(i);
      ChainState a{mvn9_start_x(), {}};
      ChainState b = a;
      for (int j = 0; j < 9; ++j) b.x[j] += v[j];
      const auto block = block_for(3, static_cast<std::uint64_t>(i), 10);
      k.apply(a, block);
      k.apply(b, block);
      Eigen::VectorXd diff(9);
      for (int j = 0; j < 9; ++j) diff[j] = b.x[j] - a.x[j];
      const double factor = std::abs(1.0 - 0.5 * eps * eps * spec.eigenvalues[i]);
      EXPECT_NEAR(diff.norm(), factor, 1e-10) << eps << " " << i;
      EXPECT_NEAR(std::abs(diff.dot(v)), factor, 1e-10);
    }
  }
}

TEST(Properties, UncorrectedLangevinContractsBelowThreshold) {
  const double lambda_max = mvn9_spec().eigenvalues[0];
  const double threshold = 2.0 / std::sqrt(lambda_max);
  EXPECT_NEAR(threshold, 0.1414, 1e-4);
  for (double eps : {0.05, 0.1, 0.14, 0.1415, 0.15, 0.2}) {
    const double worst = std::abs(1.0 - 0.5 * eps * eps * lambda_max);
    EXPECT_EQ(worst < 1.0, eps < threshold) << eps;
  }
}

TEST(Properties, OneDimensionalLangevinApproach) {
  const Langevin k(normal1d(), {.epsilon = 0.1});
  ChainState a{{-3.0}, {}};
  ChainState b{{2.5}, {}};
  const double start = std::abs(a.x[0] - b.x[0]);
  for (std::uint64_t t = 0; t < 1000; ++t) {
    const auto block = block_for(17, t, 2);
    const double before = b.x[0] - a.x[0];
    const auto sa = k.apply(a, block);
    const auto sb = k.apply(b, block);
    const double after = b.x[0] - a.x[0];
    if (sa.accepts == 1 && sb.accepts == 1 && before * after > 0.0) {
      EXPECT_LT(std::abs(after), std::abs(before));
    }
  }
  EXPECT_LT(std::abs(a.x[0] - b.x[0]), start);
}

TEST(Properties, LangevinAcceptanceMatchesHamiltonianError) {
  const auto target = mvn9();
  const double eps = 0.08;
  const Langevin k(target, {.epsilon = eps});
  ChainState s{std::vector<double>(9), {}};
  target->sample_exact(UniformBlock(4, streams::auxiliary(0), 9), s.x);
  const std::size_t n = 20000;
  double expected = 0.0;
  double abs_dh = 0.0;
  std::size_t accepts = 0;
  std::vector<double> grad(9);
  for (std::uint64_t t = 0; t < n; ++t) {
    const auto block = block_for(4, t, 10);
    std::vector<double> p(9);
    for (std::size_t i = 0; i < 9; ++i) p[i] = inverse_normal_cdf(block.uniform(i));
    const double e0 = target->energy_and_gradient(s.x, grad);
    double h0 = e0;
    for (double v : p) h0 += 0.5 * v * v;
    std::vector<double> x = s.x;
    for (std::size_t i = 0; i < 9; ++i) {
      p[i] -= 0.5 * eps * grad[i];
      x[i] += eps * p[i];
    }
    const double e1 = target->energy_and_gradient(x, grad);
    double h1 = e1;
    for (std::size_t i = 0; i < 9; ++i) {
      p[i] -= 0.5 * eps * grad[i];
      h1 += 0.5 * p[i] * p[i];
    }
    abs_dh += std::abs(h1 - h0);
    expected += std::min(1.0, std::exp(h0 - h1));
    accepts += k.apply(s, block).accepts;
  }
  expected /= n;
  const double observed = static_cast<double>(accepts) / n;
  EXPECT_TRUE(std::isfinite(abs_dh / n));
  EXPECT_NEAR(observed, expected, 3.0 * std::sqrt(expected * (1 - expected) / n));
}

}  // namespace
}  // namespace circmc
