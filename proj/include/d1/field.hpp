#pragma once

// Coefficient fields: prime fields F_p and the rationals.
//
// A field is a small value type carrying whatever runtime data it needs (the
// modulus for F_p) with a nested value_type for its elements. All algebra in
// this library is templated on the field so F_p arithmetic stays on machine
// words while Q uses GMP rationals.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

#include <gmpxx.h>

#include "d1/groups.hpp"

namespace d1 {

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

class PrimeField {
 public:
  using value_type = std::uint32_t;

  explicit PrimeField(std::uint64_t p) : p_(static_cast<std::uint32_t>(p)) {
    if (p >= (1ull << 31) || !is_prime(p)) throw UsageError("p must be prime");
  }

  std::uint32_t modulus() const { return p_; }
  std::string to_string() const { return "Fp:" + std::to_string(p_); }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<value_type>(r);
  }
  bool is_zero(value_type a) const { return a == 0; }
  value_type add(value_type a, value_type b) const {
    std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<value_type>(s >= p_ ? s - p_ : s);
  }
  value_type sub(value_type a, value_type b) const {
    return a >= b ? a - b : static_cast<value_type>(std::uint64_t{a} + p_ - b);
  }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>((std::uint64_t{a} * b) % p_);
  }
  value_type inv(value_type a) const {
    if (a == 0) throw std::domain_error("division by zero in F_p");
    // Fermat: a^(p-2).
    std::uint64_t result = 1, base = a, e = p_ - 2;
    while (e) {
      if (e & 1) result = result * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return static_cast<value_type>(result);
  }

  template <class Rng>
  value_type random(Rng& rng) const {
    return std::uniform_int_distribution<value_type>(0, p_ - 1)(rng);
  }
  template <class Rng>
  value_type random_nonzero(Rng& rng) const {
    return std::uniform_int_distribution<value_type>(1, p_ - 1)(rng);
  }

  friend bool operator==(const PrimeField&, const PrimeField&) = default;

 private:
  std::uint32_t p_;
};

class RationalField {
 public:
  using value_type = mpq_class;

  std::string to_string() const { return "Q"; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  value_type from_int(std::int64_t v) const { return mpq_class(static_cast<long>(v)); }
  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type inv(const value_type& a) const {
    if (sgn(a) == 0) throw std::domain_error("division by zero in Q");
    return 1 / a;
  }

  /// Small numerators in [-3, 3] over denominators in {1, 2, 3}.
  template <class Rng>
  value_type random(Rng& rng) const {
    long num = std::uniform_int_distribution<long>(-3, 3)(rng);
    long den = std::uniform_int_distribution<long>(1, 3)(rng);
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }
  template <class Rng>
  value_type random_nonzero(Rng& rng) const {
    value_type q;
    do q = random(rng);
    while (sgn(q) == 0);
    return q;
  }

  friend bool operator==(const RationalField&, const RationalField&) { return true; }
};

template <class F>
concept Field = requires(const F& f, typename F::value_type a) {
  { f.zero() } -> std::convertible_to<typename F::value_type>;
  { f.add(a, a) } -> std::convertible_to<typename F::value_type>;
  { f.mul(a, a) } -> std::convertible_to<typename F::value_type>;
  { f.inv(a) } -> std::convertible_to<typename F::value_type>;
  { f.is_zero(a) } -> std::convertible_to<bool>;
};

/// Runtime description of a coefficient field, e.g. from a file header.
struct FieldSpec {
  bool rational = false;
  std::uint64_t p = 2;

  static FieldSpec prime(std::uint64_t p) {
    if (p >= (1ull << 31) || !is_prime(p)) throw UsageError("p must be prime");
    return {false, p};
  }
  static FieldSpec rationals() { return {true, 0}; }

  std::string to_string() const { return rational ? "Q" : "Fp:" + std::to_string(p); }

  /// "Fp:5" or "Q".
  static FieldSpec parse(const std::string& text) {
    if (text == "Q" || text == "q") return rationals();
    auto colon = text.find(':');
    if (colon == std::string::npos || (text.substr(0, colon) != "Fp" && text.substr(0, colon) != "fp"))
      throw UsageError("bad field spec '" + text + "'");
    std::string tail = text.substr(colon + 1);
    char* end = nullptr;
    unsigned long long value = std::strtoull(tail.c_str(), &end, 10);
    if (tail.empty() || *end != '\0') throw UsageError("bad field spec '" + text + "'");
    return prime(value);
  }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

inline FieldSpec spec_of(const PrimeField& f) { return FieldSpec::prime(f.modulus()); }
inline FieldSpec spec_of(const RationalField&) { return FieldSpec::rationals(); }

/// Calls fn(PrimeField) or fn(RationalField) according to the spec.
template <class Fn>
decltype(auto) with_field(const FieldSpec& spec, Fn&& fn) {
  if (spec.rational) return std::forward<Fn>(fn)(RationalField{});
  return std::forward<Fn>(fn)(PrimeField(spec.p));
}

}  // namespace d1
