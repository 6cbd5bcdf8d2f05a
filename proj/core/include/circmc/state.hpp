#pragma once

#include <cstddef>
#include <vector>

namespace circmc {

/// Chain state: position x and, for persistent-momentum kernels, momentum p.
/// p is either empty or holds one entry per momentum-carrying coordinate.
/// Coalescence is exact equality of every component.
struct ChainState {
  std::vector<double> x;
  std::vector<double> p;

  bool operator==(const ChainState&) const = default;
};

/// Half-open coordinate range [begin, begin + count).
struct CoordRange {
  std::size_t begin = 0;
  std::size_t count = 0;

  std::size_t end() const noexcept { return begin + count; }
  bool contains(std::size_t i) const noexcept { return i >= begin && i < end(); }
  static CoordRange all(std::size_t dimension) { return {0, dimension}; }
  bool operator==(const CoordRange&) const = default;
};

}  // namespace circmc
