#pragma once

// Hand-rolled generators for property tests. SplitMix64 keeps every case
// reproducible from its seed.

#include <cmath>
#include <cstdint>
#include <vector>

namespace testgen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : s_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool coin() { return (next() >> 63) != 0; }

 private:
  std::uint64_t s_;
};

/// Cantor endpoints built from digit expansions, independent of the IFS recursion:
/// left ends sum_k d_k (1-lambda) lambda^(k-1), right ends add lambda^level.
inline std::vector<double> digit_endpoints(double lambda, int level) {
  std::vector<double> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << level); ++code) {
    double left = 0.0;
    for (int k = 1; k <= level; ++k) {
      if ((code >> (level - k)) & 1U) left += (1.0 - lambda) * std::pow(lambda, k - 1);
    }
    out.push_back(left);
    out.push_back(left + std::pow(lambda, level));
  }
  return out;
}

}  // namespace testgen
