#pragma once

// The group rings k[G] and M_n(k)[G]: finitely supported maps G -> M_n(k)
// with the convolution product. n = 1 is the scalar ring k[G].

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "d1/field.hpp"
#include "d1/groups.hpp"

namespace d1 {

/// Describes M_n(k)[G]: the field, the group and the coefficient size n.
template <Field F>
struct Algebra {
  F field;
  GroupSpec group;
  std::size_t n = 1;

  Algebra with_n(std::size_t m) const { return {field, group, m}; }

  friend bool operator==(const Algebra&, const Algebra&) = default;
};

template <Field F>
void require_same(const Algebra<F>& a, const Algebra<F>& b, const char* what) {
  if (!(a.group == b.group)) throw UsageError(std::string(what) + ": different groups");
  if (!(a.field == b.field)) throw UsageError(std::string(what) + ": different fields");
  if (a.n != b.n) throw UsageError(std::string(what) + ": coefficient shape mismatch");
}

/// Dense row-major n x n coefficient block of M_n(k).
template <Field F>
using Block = std::vector<typename F::value_type>;

namespace blocks {

template <Field F>
Block<F> zero(const F& f, std::size_t n) {
  return Block<F>(n * n, f.zero());
}

template <Field F>
Block<F> scalar(const F& f, std::size_t n, const typename F::value_type& c) {
  Block<F> b(n * n, f.zero());
  for (std::size_t i = 0; i < n; ++i) b[i * n + i] = c;
  return b;
}

template <Field F>
bool is_zero(const F& f, const Block<F>& b) {
  return std::all_of(b.begin(), b.end(), [&](const auto& x) { return f.is_zero(x); });
}

template <Field F>
void add_to(const F& f, Block<F>& acc, const Block<F>& b) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = f.add(acc[i], b[i]);
}

template <Field F>
Block<F> neg(const F& f, Block<F> b) {
  for (auto& x : b) x = f.neg(x);
  return b;
}

template <Field F>
Block<F> scale(const F& f, const typename F::value_type& c, Block<F> b) {
  for (auto& x : b) x = f.mul(c, x);
  return b;
}

template <Field F>
Block<F> mul(const F& f, std::size_t n, const Block<F>& a, const Block<F>& b) {
  if (n == 1) return Block<F>{f.mul(a[0], b[0])};
  Block<F> out(n * n, f.zero());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const auto& x = a[i * n + k];
      if (f.is_zero(x)) continue;
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] = f.add(out[i * n + j], f.mul(x, b[k * n + j]));
    }
  return out;
}

/// acc += a * b
template <Field F>
void mul_add(const F& f, std::size_t n, Block<F>& acc, const Block<F>& a, const Block<F>& b) {
  if (n == 1) {
    acc[0] = f.add(acc[0], f.mul(a[0], b[0]));
    return;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const auto& x = a[i * n + k];
      if (f.is_zero(x)) continue;
      for (std::size_t j = 0; j < n; ++j) acc[i * n + j] = f.add(acc[i * n + j], f.mul(x, b[k * n + j]));
    }
}

/// y = B v for a block and a vector of length n.
template <Field F>
std::vector<typename F::value_type> apply(const F& f, std::size_t n, const Block<F>& b,
                                          const std::vector<typename F::value_type>& v) {
  std::vector<typename F::value_type> y(n, f.zero());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!f.is_zero(b[i * n + j])) y[i] = f.add(y[i], f.mul(b[i * n + j], v[j]));
  return y;
}

}  // namespace blocks

template <Field F>
class GroupRingElement {
 public:
  using Scalar = typename F::value_type;
  using Term = std::pair<GroupElement, Block<F>>;

  explicit GroupRingElement(Algebra<F> alg) : alg_(std::move(alg)) {}

  /// Sorts, merges repeated group elements and drops zero coefficients.
  static GroupRingElement from_terms(Algebra<F> alg, std::vector<Term> terms) {
    GroupRingElement out(std::move(alg));
    std::map<GroupElement, Block<F>> acc;
    for (auto& [g, c] : terms) {
      out.check_term(g, c);
      auto [it, fresh] = acc.try_emplace(g, c);
      if (!fresh) blocks::add_to(out.alg_.field, it->second, c);
    }
    out.adopt(acc);
    return out;
  }

  static GroupRingElement monomial(Algebra<F> alg, GroupElement g, Block<F> c) {
    std::vector<Term> t;
    t.emplace_back(std::move(g), std::move(c));
    return from_terms(std::move(alg), std::move(t));
  }

  /// c times the identity block at g.
  static GroupRingElement scalar_monomial(Algebra<F> alg, GroupElement g, const Scalar& c) {
    auto b = blocks::scalar(alg.field, alg.n, c);
    return monomial(std::move(alg), std::move(g), std::move(b));
  }

  static GroupRingElement one(Algebra<F> alg) {
    auto e = GroupElement::identity(alg.group);
    return scalar_monomial(std::move(alg), std::move(e), alg.field.one());
  }

  const Algebra<F>& algebra() const { return alg_; }
  const F& field() const { return alg_.field; }
  std::size_t n() const { return alg_.n; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  FiniteSubset support() const {
    std::vector<GroupElement> s;
    s.reserve(terms_.size());
    for (const auto& [g, c] : terms_) s.push_back(g);
    return FiniteSubset(std::move(s));
  }

  /// a(g); the zero block when g is outside the support.
  Block<F> coeff(const GroupElement& g) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), g,
                               [](const Term& t, const GroupElement& x) { return t.first < x; });
    if (it == terms_.end() || !(it->first == g)) return blocks::zero(alg_.field, alg_.n);
    return it->second;
  }

  /// Sum of all coefficients (the augmentation), an n x n block.
  Block<F> augmentation() const {
    auto acc = blocks::zero(alg_.field, alg_.n);
    for (const auto& [g, c] : terms_) blocks::add_to(alg_.field, acc, c);
    return acc;
  }

  GroupRingElement operator+(const GroupRingElement& b) const {
    require_same(alg_, b.alg_, "add");
    std::map<GroupElement, Block<F>> acc;
    for (const auto& [g, c] : terms_) acc.emplace(g, c);
    for (const auto& [g, c] : b.terms_) {
      auto [it, fresh] = acc.try_emplace(g, c);
      if (!fresh) blocks::add_to(alg_.field, it->second, c);
    }
    GroupRingElement out(alg_);
    out.adopt(acc);
    return out;
  }

  GroupRingElement operator-() const {
    GroupRingElement out(alg_);
    out.terms_ = terms_;
    for (auto& [g, c] : out.terms_) c = blocks::neg(alg_.field, std::move(c));
    return out;
  }

  GroupRingElement operator-(const GroupRingElement& b) const { return *this + (-b); }

  GroupRingElement scale(const Scalar& c) const {
    GroupRingElement out(alg_);
    for (const auto& [g, x] : terms_) {
      auto y = blocks::scale(alg_.field, c, x);
      if (!blocks::is_zero(alg_.field, y)) out.terms_.emplace_back(g, std::move(y));
    }
    return out;
  }

  /// (ab)(g) = sum_t a(t) b(t^-1 g).
  GroupRingElement operator*(const GroupRingElement& b) const {
    require_same(alg_, b.alg_, "convolve");
    std::map<GroupElement, Block<F>> acc;
    const auto& f = alg_.field;
    for (const auto& [s, x] : terms_)
      for (const auto& [t, y] : b.terms_) {
        auto [it, fresh] = acc.try_emplace(compose(s, t), blocks::zero(f, alg_.n));
        blocks::mul_add(f, alg_.n, it->second, x, y);
      }
    GroupRingElement out(alg_);
    out.adopt(acc);
    return out;
  }

  /// c*g times this element: (c t . a)(h) = c a(t^-1 h).
  GroupRingElement left_monomial_mul(const GroupElement& t, const Block<F>& c) const {
    GroupRingElement out(alg_);
    std::vector<Term> shifted;
    shifted.reserve(terms_.size());
    for (const auto& [g, x] : terms_) {
      auto y = blocks::mul(alg_.field, alg_.n, c, x);
      if (!blocks::is_zero(alg_.field, y)) shifted.emplace_back(compose(t, g), std::move(y));
    }
    std::sort(shifted.begin(), shifted.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
    out.terms_ = std::move(shifted);
    return out;
  }

  GroupRingElement& operator+=(const GroupRingElement& b) { return *this = *this + b; }

  friend bool operator==(const GroupRingElement& a, const GroupRingElement& b) {
    return a.alg_ == b.alg_ && a.terms_ == b.terms_;
  }

 private:
  void check_term(const GroupElement& g, const Block<F>& c) const {
    if (!g.belongs_to(alg_.group)) throw UsageError("group element " + g.to_string() + " not in " + alg_.group.to_string());
    if (c.size() != alg_.n * alg_.n) throw UsageError("coefficient shape mismatch");
  }

  void adopt(std::map<GroupElement, Block<F>>& acc) {
    terms_.clear();
    terms_.reserve(acc.size());
    for (auto& [g, c] : acc)
      if (!blocks::is_zero(alg_.field, c)) terms_.emplace_back(g, std::move(c));
  }

  Algebra<F> alg_;
  std::vector<Term> terms_;
};

template <Field F>
GroupRingElement<F> convolve(const GroupRingElement<F>& a, const GroupRingElement<F>& b) {
  return a * b;
}

/// M_n(k)[G] -> M_n(k[G]): entry (i,j) collects the (i,j) coefficients.
template <Field F>
std::vector<std::vector<GroupRingElement<F>>> matrix_shuffle(const GroupRingElement<F>& a) {
  const std::size_t n = a.n();
  Algebra<F> scalar_alg = a.algebra().with_n(1);
  std::vector<std::vector<std::vector<typename GroupRingElement<F>::Term>>> parts(
      n, std::vector<std::vector<typename GroupRingElement<F>::Term>>(n));
  for (const auto& [g, c] : a.terms())
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!a.field().is_zero(c[i * n + j])) parts[i][j].emplace_back(g, Block<F>{c[i * n + j]});
  std::vector<std::vector<GroupRingElement<F>>> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.emplace_back();
    for (std::size_t j = 0; j < n; ++j)
      out.back().push_back(GroupRingElement<F>::from_terms(scalar_alg, std::move(parts[i][j])));
  }
  return out;
}

/// Inverse of matrix_shuffle.
template <Field F>
GroupRingElement<F> matrix_unshuffle(const std::vector<std::vector<GroupRingElement<F>>>& m) {
  const std::size_t n = m.size();
  if (n == 0) throw UsageError("matrix_unshuffle: empty matrix");
  Algebra<F> alg = m[0][0].algebra().with_n(n);
  std::map<GroupElement, Block<F>> acc;
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw UsageError("matrix_unshuffle: matrix is not square");
    for (std::size_t j = 0; j < n; ++j) {
      require_same(m[i][j].algebra(), alg.with_n(1), "matrix_unshuffle");
      for (const auto& [g, c] : m[i][j].terms()) {
        auto [it, fresh] = acc.try_emplace(g, blocks::zero(alg.field, n));
        it->second[i * n + j] = c[0];
      }
    }
  }
  std::vector<typename GroupRingElement<F>::Term> terms(acc.begin(), acc.end());
  return GroupRingElement<F>::from_terms(alg, std::move(terms));
}

}  // namespace d1
