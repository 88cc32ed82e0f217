#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>

namespace bandits {

// Counter-based random stream (Philox4x32-10). A stream is fully determined by
// (seed, stream id); draws never depend on what other streams have done, so
// replicas can be scheduled on any thread in any order.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, n).
  std::size_t index(std::size_t n);
  bool bernoulli(double p);
  double normal();
  double beta(double a, double b);
  // Inverse-CDF draw from an (unnormalized, non-negative) weight vector.
  std::size_t categorical(std::span<const double> weights);
  // +1 or -1 with equal probability.
  int rademacher();

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

// Stream for replica `replica` of an experiment seeded with `master`.
Rng derive_stream(std::uint64_t master, std::uint64_t replica);

}  // namespace bandits
