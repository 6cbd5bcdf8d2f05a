#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "circmc/rng.hpp"
#include "test_support.hpp"

namespace circmc {
namespace {

TEST(Philox, KnownAnswerVectors) {
  using W = std::array<std::uint32_t, 4>;
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (W{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (W{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (W{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Uniform, SameKeySameValue) {
  const StreamKey k{1, 0, 0};
  EXPECT_EQ(uniform(k), uniform(k));
}

TEST(Uniform, DistinctCountersDiffer) {
  EXPECT_NE(uniform({1, 0, 0}), uniform({1, 0, 1}));
}

TEST(Uniform, OrderIndependent) {
  const double before = uniform({1, 5, 0});
  (void)uniform({1, 3, 0});
  (void)uniform({1, 3, 7});
  EXPECT_EQ(before, uniform({1, 5, 0}));
}

TEST(Uniform, StrictlyInsideUnitInterval) {
  for (std::uint64_t c = 0; c < 100000; ++c) {
    const double u = uniform({7, 11, c});
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(Uniform, ChiSquareUniformity) {
  std::vector<std::size_t> bins(100, 0);
  for (std::uint64_t c = 0; c < 100000; ++c) {
    ++bins[static_cast<std::size_t>(uniform({3, 9, c}) * 100.0)];
  }
  EXPECT_GT(testing::chi_square_uniform_pvalue(bins), 0.001);
}

TEST(StandardNormal, MedianMapsToZero) {
  EXPECT_EQ(UniformBlock::from_values({0.5}).normal(0), 0.0);
}

TEST(StandardNormal, Symmetric) {
  // Dyadic u so that 1 - u is exact.
  for (double u : {std::ldexp(1.0, -30), std::ldexp(1.0, -7), 0.25, 0.375, 0.5 - std::ldexp(1.0, -10)}) {
    const auto block = UniformBlock::from_values({u, 1.0 - u});
    EXPECT_NEAR(block.normal(0), -block.normal(1), 1e-9) << u;
  }
}

TEST(StandardNormal, ConsumesOneUniform) {
  const StreamKey k{4, 2, 9};
  EXPECT_EQ(standard_normal(k), UniformBlock::from_values({uniform(k)}).normal(0));
}

TEST(StandardNormal, MeanOfManyDraws) {
  double sum = 0.0;
  const std::size_t n = 1000000;
  for (std::uint64_t c = 0; c < n; ++c) sum += standard_normal({12, 0, c});
  EXPECT_NEAR(sum / static_cast<double>(n), 0.0, 0.005);
}

TEST(BlockFor, LengthMatchesBudget) {
  EXPECT_EQ(block_for(1, 0, 3).size(), 3u);
}

TEST(BlockFor, Deterministic) {
  EXPECT_EQ(block_for(5, 17, 4).values(), block_for(5, 17, 4).values());
}

TEST(BlockFor, AdjacentStepsDisjoint) {
  const auto a = block_for(5, 17, 3).values();
  const auto b = block_for(5, 18, 3).values();
  std::set<double> all(a.begin(), a.end());
  all.insert(b.begin(), b.end());
  EXPECT_EQ(all.size(), 6u);
}

TEST(BlockFor, RejectsNonPositiveBudget) {
  EXPECT_THROW(block_for(1, 0, 0), std::invalid_argument);
  EXPECT_THROW(block_for(1, 0, -2), std::invalid_argument);
}

TEST(UniformBlock, ReadingPastEndThrows) {
  const auto block = block_for(1, 0, 2);
  EXPECT_NO_THROW(block.uniform(1));
  EXPECT_THROW(block.uniform(2), std::out_of_range);
  EXPECT_THROW(block.normal(2), std::out_of_range);
}

TEST(UniformBlock, ViewMatchesStream) {
  const auto block = block_for(9, 4, 5);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(block.uniform(i), uniform({9, 4, i}));
}

TEST(UniformBlock, SliceOffsetsCounters) {
  const auto block = block_for(9, 4, 6);
  const auto tail = block.slice(2, 3);
  EXPECT_EQ(tail.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(tail.uniform(i), block.uniform(i + 2));
  EXPECT_THROW(tail.uniform(3), std::out_of_range);
  EXPECT_THROW(block.slice(5, 2), std::out_of_range);
}

TEST(UniformBlock, CountingSeesSliceReads) {
  std::size_t reads = 0;
  const auto block = block_for(1, 1, 4).counting(&reads);
  (void)block.uniform(0);
  (void)block.slice(1, 3).normal(2);
  EXPECT_EQ(reads, 2u);
}

TEST(UniformBlock, ReplayAfterInterleaving) {
  std::vector<std::vector<double>> first;
  for (std::uint64_t t = 0; t < 20; ++t) first.push_back(block_for(42, t, 5).values());
  for (std::uint64_t t = 100; t > 0; --t) (void)block_for(42, 1000 + t, 7).values();
  for (std::uint64_t t = 0; t < 20; ++t) EXPECT_EQ(block_for(42, t, 5).values(), first[t]);
}

TEST(Streams, SpacesDisjoint) {
  EXPECT_LT(streams::initial(1000000), streams::kOracleBase);
  EXPECT_LT(streams::oracle(1000000), streams::kDatasetBase);
  EXPECT_LT(streams::dataset(1000000), streams::kAuxiliaryBase);
  EXPECT_GT(streams::kInitialBase, std::uint64_t{1} << 40);
}

}  // namespace
}  // namespace circmc
