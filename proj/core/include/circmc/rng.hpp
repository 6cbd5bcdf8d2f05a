#pragma once

// Replayable, time-indexed random streams.
//
// Every random number is a pure function of (seed, time_step, counter), so a
// transition at time t can be re-simulated from any state, by any worker, in
// any order, and see exactly the same variates.

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace circmc {

struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t time_step = 0;
  std::uint64_t counter = 0;
};

/// Philox4x32 with 10 rounds (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) noexcept;

/// Uniform in the open interval (0,1); 53 random bits, offset by half an ulp
/// so neither endpoint can occur.
double uniform(const StreamKey& key) noexcept;

/// Inverse-CDF normal: consumes exactly the one uniform at `key`.
double standard_normal(const StreamKey& key) noexcept;

// Time-step index spaces. Transitions use t in [0, N); everything else lives
// far above any realistic N so it can never collide with u_t.
namespace streams {
inline constexpr std::uint64_t kInitialBase = std::uint64_t{1} << 62;
inline constexpr std::uint64_t kOracleBase = kInitialBase + (std::uint64_t{1} << 60);
inline constexpr std::uint64_t kDatasetBase = kInitialBase + (std::uint64_t{1} << 61);
inline constexpr std::uint64_t kAuxiliaryBase = kInitialBase + (std::uint64_t{3} << 60);

constexpr std::uint64_t initial(std::uint64_t chain_id) { return kInitialBase + chain_id; }
constexpr std::uint64_t oracle(std::uint64_t draw_id) { return kOracleBase + draw_id; }
constexpr std::uint64_t dataset(std::uint64_t case_id) { return kDatasetBase + case_id; }
constexpr std::uint64_t auxiliary(std::uint64_t id) { return kAuxiliaryBase + id; }
}  // namespace streams

/// The fixed-length block of uniforms consumed by one transition.
///
/// A block is either a view onto a stream (seed, time_step, counters
/// [offset, offset+size)) or a list of explicit values. Views are cheap to
/// copy and slice; nothing is materialized unless values() is called.
/// Reading past size() throws, so a kernel can never silently consume more
/// than its declared budget.
class UniformBlock {
 public:
  UniformBlock() = default;
  UniformBlock(std::uint64_t seed, std::uint64_t time_step, std::size_t size,
               std::uint64_t offset = 0);

  static UniformBlock from_values(std::vector<double> values);

  std::size_t size() const noexcept { return size_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t time_step() const noexcept { return time_step_; }

  double uniform(std::size_t i) const;
  double normal(std::size_t i) const;

  UniformBlock slice(std::size_t offset, std::size_t count) const;
  std::vector<double> values() const;

  // Every uniform()/normal() read through the returned block (and its
  // slices) increments *counter.
  UniformBlock counting(std::size_t* counter) const;

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t time_step_ = 0;
  std::uint64_t offset_ = 0;
  std::size_t size_ = 0;
  std::shared_ptr<const std::vector<double>> explicit_;
  std::size_t* draws_ = nullptr;
};

/// Block of `budget` uniforms with counters 0..budget-1 under time step t.
/// Throws std::invalid_argument when budget <= 0.
UniformBlock block_for(std::uint64_t seed, std::uint64_t t, std::int64_t budget);

}  // namespace circmc
