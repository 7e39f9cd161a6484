#pragma once

// Seeded random elements for property tests and experiment suites.

#include <cstdint>
#include <random>
#include <vector>

#include "d1/nuca.hpp"

namespace d1 {

using Rng = std::mt19937_64;

/// SplitMix64 step; derives independent per-trial seeds from one seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

template <Field F>
class RandomSource {
 public:
  using Scalar = typename F::value_type;

  RandomSource(Algebra<F> alg, Rng& rng, int radius)
      : alg_(std::move(alg)), rng_(rng), ball_(ball(alg_.group, radius)) {}

  const Algebra<F>& algebra() const { return alg_; }
  Rng& rng() { return rng_; }

  std::size_t uniform(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }

  GroupElement element() { return ball_[uniform(0, ball_.size() - 1)]; }
  Scalar scalar() { return alg_.field.random(rng_); }
  Scalar nonzero() { return alg_.field.random_nonzero(rng_); }

  Block<F> block() {
    Block<F> b(alg_.n * alg_.n, alg_.field.zero());
    for (auto& x : b) x = scalar();
    return b;
  }

  /// Up to max_terms random terms supported in the ball.
  GroupRingElement<F> ring(std::size_t max_terms) {
    std::vector<typename GroupRingElement<F>::Term> terms;
    std::size_t k = uniform(0, max_terms);
    for (std::size_t i = 0; i < k; ++i) terms.emplace_back(element(), block());
    return GroupRingElement<F>::from_terms(alg_, std::move(terms));
  }

  TwistedElement<F> twisted(std::size_t max_regular = 3, std::size_t max_sites = 2, std::size_t max_site_terms = 2) {
    auto reg = ring(max_regular);
    std::vector<typename TwistedElement<F>::Site> sing;
    std::size_t k = uniform(0, max_sites);
    for (std::size_t i = 0; i < k; ++i) sing.emplace_back(element(), ring(max_site_terms));
    return TwistedElement<F>(std::move(reg), std::move(sing));
  }

  TwistedElement<F> nonzero_twisted() {
    TwistedElement<F> x(alg_);
    do x = twisted();
    while (x.is_zero());
    return x;
  }

  Configuration<F> configuration(std::size_t max_deviation = 4, bool constant_base = true) {
    std::vector<Scalar> base(alg_.n, alg_.field.zero());
    if (constant_base)
      for (auto& b : base) b = scalar();
    std::vector<typename Configuration<F>::Entry> dev;
    std::size_t k = uniform(0, max_deviation);
    for (std::size_t i = 0; i < k; ++i) {
      std::vector<Scalar> v(alg_.n);
      for (auto& s : v) s = scalar();
      dev.emplace_back(element(), std::move(v));
    }
    return Configuration<F>(alg_, std::move(base), std::move(dev));
  }

  /// Random finite subset of the ball with 1..max_size elements.
  FiniteSubset subset(std::size_t max_size) {
    std::vector<GroupElement> out;
    std::size_t k = uniform(1, max_size);
    for (std::size_t i = 0; i < k; ++i) out.push_back(element());
    return FiniteSubset(std::move(out));
  }

 private:
  Algebra<F> alg_;
  Rng& rng_;
  FiniteSubset ball_;
};

}  // namespace d1
