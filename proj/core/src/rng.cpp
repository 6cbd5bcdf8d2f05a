#include "circmc/rng.hpp"

#include <stdexcept>
#include <string>

#include "circmc/special.hpp"

namespace circmc {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = std::uint64_t{a} * std::uint64_t{b};
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, ctr[0], hi0, lo0);
    mulhilo(kM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

double uniform(const StreamKey& key) noexcept {
  // One Philox call yields 128 bits, i.e. two uniforms; counters 2m and 2m+1
  // share a call and take its low and high halves.
  const std::uint64_t pair = key.counter >> 1;
  const auto out = philox4x32_10(
      {static_cast<std::uint32_t>(key.time_step), static_cast<std::uint32_t>(key.time_step >> 32),
       static_cast<std::uint32_t>(pair), static_cast<std::uint32_t>(pair >> 32)},
      {static_cast<std::uint32_t>(key.seed), static_cast<std::uint32_t>(key.seed >> 32)});
  const std::size_t half = (key.counter & 1u) * 2;
  const std::uint64_t bits = (std::uint64_t{out[half + 1]} << 32) | out[half];
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  return (static_cast<double>(bits >> 11) + 0.5) * kScale;
}

double standard_normal(const StreamKey& key) noexcept {
  return inverse_normal_cdf(uniform(key));
}

UniformBlock::UniformBlock(std::uint64_t seed, std::uint64_t time_step, std::size_t size,
                           std::uint64_t offset)
    : seed_(seed), time_step_(time_step), offset_(offset), size_(size) {}

UniformBlock UniformBlock::from_values(std::vector<double> values) {
  for (double v : values) {
    if (!(v > 0.0 && v < 1.0)) {
      throw std::invalid_argument("UniformBlock values must lie strictly inside (0,1)");
    }
  }
  UniformBlock block;
  block.size_ = values.size();
  block.explicit_ = std::make_shared<const std::vector<double>>(std::move(values));
  return block;
}

double UniformBlock::uniform(std::size_t i) const {
  if (i >= size_) {
    throw std::out_of_range("UniformBlock: slot " + std::to_string(i) + " outside budget " +
                            std::to_string(size_));
  }
  if (draws_ != nullptr) ++*draws_;
  if (explicit_) return (*explicit_)[offset_ + i];
  return circmc::uniform(StreamKey{seed_, time_step_, offset_ + i});
}

double UniformBlock::normal(std::size_t i) const { return inverse_normal_cdf(uniform(i)); }

UniformBlock UniformBlock::slice(std::size_t offset, std::size_t count) const {
  if (offset > size_ || count > size_ - offset) {
    throw std::out_of_range("UniformBlock: slice exceeds block");
  }
  UniformBlock sub = *this;
  sub.offset_ = offset_ + offset;
  sub.size_ = count;
  return sub;
}

std::vector<double> UniformBlock::values() const {
  std::vector<double> out(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] = uniform(i);
  return out;
}

UniformBlock UniformBlock::counting(std::size_t* counter) const {
  UniformBlock copy = *this;
  copy.draws_ = counter;
  return copy;
}

UniformBlock block_for(std::uint64_t seed, std::uint64_t t, std::int64_t budget) {
  if (budget <= 0) throw std::invalid_argument("block_for: budget must be positive");
  return UniformBlock(seed, t, static_cast<std::size_t>(budget));
}

}  // namespace circmc
