#include <gtest/gtest.h>

#include <cmath>

#include "circmc/engine.hpp"
#include "circmc/initial.hpp"
#include "circmc/special.hpp"
#include "test_support.hpp"

namespace circmc {
namespace {

const IsotropicNormalInit kWideInit({0.0}, 5.0);

KernelPtr rg(TargetPtr t, double w = 0.5) {
  return std::make_shared<RandomGridMetropolis>(std::move(t), RandomGridMetropolis::Params{.w = w});
}

std::vector<double> xs(const std::vector<ChainState>& trace) {
  std::vector<double> out;
  for (const auto& s : trace) out.push_back(s.x[0]);
  return out;
}

double batch_mean_se(const std::vector<double>& v, std::size_t batches) {
  const std::size_t len = v.size() / batches;
  std::vector<double> means;
  for (std::size_t b = 0; b < batches; ++b) {
    double s = 0.0;
    for (std::size_t i = 0; i < len; ++i) s += v[b * len + i];
    means.push_back(s / len);
  }
  double m = 0.0;
  for (double x : means) m += x;
  m /= batches;
  double var = 0.0;
  for (double x : means) var += (x - m) * (x - m);
  return std::sqrt(var / (batches - 1) / batches);
}

TEST(RunStandard, IdentityKernelGivesConstantTrace) {
  const testing::IdentityKernel k;
  const auto trace = run_standard(k, kWideInit, 3, 50);
  ASSERT_EQ(trace.size(), 51u);
  for (const auto& s : trace) EXPECT_EQ(s, trace.front());
}

TEST(RunStandard, Replay) {
  const auto k = rg(normal1d());
  EXPECT_EQ(run_standard(*k, kWideInit, 5, 500), run_standard(*k, kWideInit, 5, 500));
  EXPECT_NE(run_standard(*k, kWideInit, 5, 500), run_standard(*k, kWideInit, 6, 500));
}

TEST(RunStandard, Normal1dMean) {
  const auto trace = xs(run_standard(*rg(normal1d()), IsotropicNormalInit({0.0}, 1.0), 8, 10000));
  double m = 0.0;
  for (double x : trace) m += x;
  EXPECT_NEAR(m / trace.size(), 0.0, 0.1);
}

TEST(RunStandard, StartDrawUsesOwnStream) {
  const auto k = rg(normal1d());
  const auto trace = run_standard(*k, kWideInit, 4, 10);
  EXPECT_EQ(trace.front(), draw_initial(kWideInit, 4, 0));
  EXPECT_EQ(trace[1], transition(*k, trace[0], 4, 0));
}

TEST(SimulateFrom, WrapsTimeModuloN) {
  const auto k = rg(normal1d());
  const ChainState s{{0.4}, {}};
  const auto wrapped = simulate_from(*k, s, 2, 8, 4, 10);
  ASSERT_EQ(wrapped.size(), 5u);
  EXPECT_EQ(wrapped[2], transition(*k, wrapped[1], 2, 9));
  EXPECT_EQ(wrapped[3], transition(*k, wrapped[2], 2, 0));
}

TEST(RunCircularBasic, IdenticalStartCoalescesImmediately) {
  const testing::IdentityKernel k;
  const PointInit p0({{1.25}, {}});
  const auto r = run_circular_basic(k, p0, 1, 10);
  EXPECT_EQ(r.status, RunStatus::Coalesced);
  EXPECT_EQ(r.coalescence.front().steps, 0u);
  for (std::size_t t = 0; t < 10; ++t) EXPECT_EQ(r.y_trace[t], r.x_trace[t]);
}

TEST(RunCircularBasic, DefaultConfigurationCoalesces) {
  const auto k = rg(normal1d());
  std::size_t coalesced = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = run_circular_basic(*k, kWideInit, seed, 1000);
    EXPECT_EQ(r.y_trace.size(), 1000u);
    EXPECT_EQ(r.x_trace.size(), 1001u);
    if (r.status == RunStatus::Coalesced) {
      ++coalesced;
      EXPECT_LT(r.coalescence.front().steps, 1000u);
    }
  }
  EXPECT_GE(coalesced, 18u);
}

TEST(RunCircularBasic, WrapIdentity) {
  const auto k = rg(normal1d());
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto r = run_circular_basic(*k, kWideInit, seed, 300);
    if (r.status != RunStatus::Coalesced) continue;
    EXPECT_EQ(transition(*k, r.y_trace.back(), seed, 299), r.y_trace.front());
    for (std::size_t t = 1; t < 300; ++t) {
      ASSERT_EQ(r.y_trace[t], transition(*k, r.y_trace[t - 1], seed, t - 1));
    }
  }
}

TEST(RunCircularBasic, ContinuousOffsetsWrapFail) {
  const auto k = std::make_shared<RandomWalkMetropolis>(normal1d(), RandomWalkMetropolis::Params{.scale = 0.5});
  const auto r = run_circular_basic(*k, kWideInit, 2, 200);
  EXPECT_EQ(r.status, RunStatus::WrapFailed);
  EXPECT_EQ(r.y_trace.size(), 200u);
  EXPECT_TRUE(r.coalescence.front().censored);
  EXPECT_EQ(r.coalescence.front().steps, 200u);
}

TEST(RunWithDiagnostics, CountsRespectCensoring) {
  const auto k = rg(bimodal());
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto r = run_with_diagnostics(*k, kWideInit, seed, 1000, 10, 120);
    ASSERT_EQ(r.coalescence.size(), 10u);
    for (const auto& c : r.coalescence) {
      if (c.censored) {
        EXPECT_EQ(c.steps, 120u);
      } else {
        EXPECT_LE(c.steps, 120u);
      }
    }
  }
}

TEST(RunWithDiagnostics, ValidatesSizes) {
  const auto k = rg(normal1d());
  EXPECT_THROW(run_with_diagnostics(*k, kWideInit, 1, 1000, 7, 100), std::invalid_argument);
  EXPECT_THROW(run_with_diagnostics(*k, kWideInit, 1, 1000, 10, 500), std::invalid_argument);
}

TEST(RunWithDiagnostics, AuxiliaryStartOnTraceHasZeroCount) {
  const testing::IdentityKernel k;
  const PointInit p0({{0.5}, {}});
  const auto r = run_with_diagnostics(k, p0, 1, 100, 5, 10);
  for (const auto& c : r.coalescence) {
    EXPECT_EQ(c.steps, 0u);
    EXPECT_FALSE(c.censored);
  }
}

TEST(RunWithDiagnostics, ReplayAndMainChainUnaffected) {
  const auto k = rg(normal1d());
  const auto a = run_with_diagnostics(*k, kWideInit, 9, 1000, 10, 499);
  const auto b = run_with_diagnostics(*k, kWideInit, 9, 1000, 10, 499);
  EXPECT_EQ(a.y_trace, b.y_trace);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(a.coalescence[i].steps, b.coalescence[i].steps);
  EXPECT_EQ(a.y_trace, run_circular_basic(*k, kWideInit, 9, 1000).y_trace);
}

TEST(RunWithDiagnostics, AuxiliaryChainsFollowTraceAfterCoalescing) {
  const auto k = rg(normal1d());
  const std::size_t n = 1000;
  const std::size_t r = 10;
  const std::size_t cap = 400;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto res = run_with_diagnostics(*k, kWideInit, seed, n, r, cap);
    for (std::size_t i = 1; i < r; ++i) {
      const auto c = res.coalescence[i];
      if (c.censored) continue;
      const std::size_t start = i * n / r;
      const auto aux = simulate_from(*k, draw_initial(kWideInit, seed, i), seed, start, cap, n);
      for (std::size_t s = c.steps; s <= cap; ++s) {
        ASSERT_EQ(aux[s], res.y_trace[(start + s) % n]) << seed << " " << i << " " << s;
      }
      if (c.steps > 0) EXPECT_NE(aux[c.steps - 1], res.y_trace[(start + c.steps - 1) % n]);
    }
  }
}

TEST(RunWithDiagnostics, BimodalSlowChainsOccur) {
  const auto k = rg(bimodal());
  std::size_t longest = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    for (const auto& c : run_with_diagnostics(*k, kWideInit, seed, 1000, 10, 499).coalescence) {
      longest = std::max(longest, c.steps);
    }
  }
  EXPECT_GE(longest, 200u);
}

TEST(EstimateExpectations, ConstantAndIndicator) {
  const auto r = run_circular_basic(*rg(normal1d()), kWideInit, 3, 500);
  const auto est = estimate_expectations(
      r, {[](const ChainState&) { return 2.5; }, [](const ChainState& s) { return s.x[0] > 0 ? 1.0 : 0.0; }});
  EXPECT_DOUBLE_EQ(est[0], 2.5);
  EXPECT_GE(est[1], 0.0);
  EXPECT_LE(est[1], 1.0);
}

TEST(EstimateExpectations, RejectsCappedRuns) {
  CircularRunResult r;
  r.y_trace = {{{0.0}, {}}};
  r.status = RunStatus::CapExceeded;
  EXPECT_THROW(estimate_expectations(r, {[](const ChainState&) { return 1.0; }}), std::logic_error);
}

TEST(EstimateExpectations, Normal1dLongRunMean) {
  const auto r = run_circular_basic(*rg(normal1d()), kWideInit, 12, 20000);
  const auto est = estimate_expectations(r, {[](const ChainState& s) { return s.x[0]; }});
  const double se = batch_mean_se(xs(r.y_trace), 20);
  EXPECT_NEAR(est[0], 0.0, 3.0 * se);
}

TEST(RunStatus, StringRoundTrip) {
  for (auto s : {RunStatus::Coalesced, RunStatus::WrapFailed, RunStatus::SplitCycles, RunStatus::CapExceeded}) {
    EXPECT_EQ(parse_run_status(to_string(s)), s);
  }
  EXPECT_EQ(to_string(RunStatus::WrapFailed), "wrap_failed");
  EXPECT_THROW(parse_run_status("bogus"), std::invalid_argument);
}

TEST(TheoreticalOracle, MatchesBasicRunWhenEventsOccur) {
  const auto k = rg(normal1d());
  std::size_t matched = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto oracle = testing::theoretical_oracle(*k, *normal1d(), kWideInit, seed, 100);
    if (!oracle.all_events()) continue;
    ++matched;
    EXPECT_EQ(oracle.y, run_circular_basic(*k, kWideInit, seed, 100).y_trace) << seed;
  }
  EXPECT_GT(matched, 25u);
}

TEST(TheoreticalOracle, MarginalsAreTarget) {
  const auto k = rg(normal1d());
  for (std::size_t t : {0u, 30u, 50u, 99u}) {
    std::vector<double> values;
    for (std::uint64_t seed = 1; seed <= 400; ++seed) {
      values.push_back(testing::theoretical_oracle(*k, *normal1d(), kWideInit, seed, 100).y[t].x[0]);
    }
    const double d = testing::ks_statistic(values, [](double x) { return normal_cdf(x); });
    EXPECT_GT(testing::ks_pvalue(d, values.size()), 0.001) << t;
  }
}

TEST(TheoreticalOracle, SmallestEvenN) {
  const auto k = rg(normal1d());
  const auto oracle = testing::theoretical_oracle(*k, *normal1d(), kWideInit, 1, 2);
  EXPECT_EQ(oracle.y.size(), 2u);
  EXPECT_THROW(testing::theoretical_oracle(*k, *normal1d(), kWideInit, 1, 3), std::invalid_argument);
}

}  // namespace
}  // namespace circmc
