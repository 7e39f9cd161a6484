#pragma once

// The twisted group ring D^1(R[G]) with R = M_n(k):
// pairs (alpha, beta) where alpha is in R[G] (the regular part) and beta is a
// finitely supported map G -> R[G] (the singular part). The product is
//
//   (a1, b1) * (a2, b2) = (a1 a2, a1 b2 + b1 a2 + b1 b2)
//
// with the twisted products, for sites g and h in G,
//
//   (a b)(g)(h) = sum_t a(t) b(gt)(t^-1 h)
//   (b a)(g)(h) = sum_t b(g)(t) a(t^-1 h)
//   (b c)(g)(h) = sum_t b(g)(t) c(gt)(t^-1 h)
//
// Over M_n(k) coefficients this is the ring of linear NUCA on (k^n)^G with
// asymptotically constant rules, see nuca.hpp.

#include <map>
#include <utility>
#include <vector>

#include "d1/group_ring.hpp"

namespace d1 {

template <Field F>
class TwistedElement {
 public:
  using Scalar = typename F::value_type;
  using Ring = GroupRingElement<F>;
  using Site = std::pair<GroupElement, Ring>;

  explicit TwistedElement(Algebra<F> alg) : alg_(alg), regular_(alg) {}

  /// Canonicalizes: merges repeated sites, drops zero singular entries.
  TwistedElement(Ring regular, std::vector<Site> singular) : alg_(regular.algebra()), regular_(std::move(regular)) {
    std::map<GroupElement, Ring> acc;
    for (auto& [g, b] : singular) {
      require_same(alg_, b.algebra(), "twisted element");
      if (!g.belongs_to(alg_.group)) throw UsageError("site " + g.to_string() + " not in " + alg_.group.to_string());
      auto [it, fresh] = acc.try_emplace(g, b);
      if (!fresh) it->second = it->second + b;
    }
    adopt(acc);
  }

  static TwistedElement zero(Algebra<F> alg) { return TwistedElement(std::move(alg)); }
  static TwistedElement one(Algebra<F> alg) { return TwistedElement(Ring::one(alg), {}); }

  /// The embedding alpha -> (alpha, 0).
  static TwistedElement embed(Ring a) { return TwistedElement(std::move(a), {}); }

  const Algebra<F>& algebra() const { return alg_; }
  const F& field() const { return alg_.field; }
  std::size_t n() const { return alg_.n; }
  const Ring& regular() const { return regular_; }
  const std::vector<Site>& singular() const { return singular_; }

  /// beta(g); zero when g is not an exceptional site.
  Ring singular_at(const GroupElement& g) const {
    const Ring* r = find_site(g);
    return r ? *r : Ring(alg_);
  }

  /// supp(beta): the sites carrying a nonzero singular part.
  FiniteSubset singular_support() const {
    std::vector<GroupElement> s;
    for (const auto& [g, b] : singular_) s.push_back(g);
    return FiniteSubset(std::move(s));
  }

  /// supp(alpha) together with every supp(beta(g)).
  FiniteSubset memory() const {
    FiniteSubset m = regular_.support();
    for (const auto& [g, b] : singular_) m = m.unite(b.support());
    return m;
  }

  bool is_zero() const { return regular_.is_zero() && singular_.empty(); }
  bool is_one() const { return *this == one(alg_); }

  TwistedElement operator+(const TwistedElement& v) const {
    require_same(alg_, v.alg_, "twisted add");
    std::vector<Site> all = singular_;
    all.insert(all.end(), v.singular_.begin(), v.singular_.end());
    return TwistedElement(regular_ + v.regular_, std::move(all));
  }

  TwistedElement operator-() const {
    TwistedElement out(alg_);
    out.regular_ = -regular_;
    for (const auto& [g, b] : singular_) out.singular_.emplace_back(g, -b);
    return out;
  }

  TwistedElement operator-(const TwistedElement& v) const { return *this + (-v); }

  TwistedElement scale(const Scalar& c) const {
    std::vector<Site> s;
    for (const auto& [g, b] : singular_) s.emplace_back(g, b.scale(c));
    return TwistedElement(regular_.scale(c), std::move(s));
  }

  TwistedElement operator*(const TwistedElement& v) const {
    require_same(alg_, v.alg_, "twisted mul");
    const F& f = alg_.field;
    const std::size_t n = alg_.n;
    using Acc = std::map<GroupElement, Block<F>>;
    std::map<GroupElement, Acc> sites;

    // acc += (x t) * b, i.e. entries of b moved left by t and multiplied by x.
    auto add_shifted = [&](Acc& acc, const GroupElement& t, const Block<F>& x, const Ring& b) {
      for (const auto& [h, y] : b.terms()) {
        auto [it, fresh] = acc.try_emplace(compose(t, h), blocks::zero(f, n));
        blocks::mul_add(f, n, it->second, x, y);
      }
    };

    // b1 a2 + b1 b2: at site g, sum over t in supp b1(g) of b1(g)(t) t (a2 + b2(gt)).
    for (const auto& [g, b1] : singular_) {
      Acc& acc = sites[g];
      for (const auto& [t, x] : b1.terms()) {
        add_shifted(acc, t, x, v.regular_);
        if (const Ring* b2 = v.find_site(compose(g, t))) add_shifted(acc, t, x, *b2);
      }
    }
    // a1 b2: site q of b2 contributes to site q t^-1 for each t in supp a1.
    for (const auto& [q, b2] : v.singular_)
      for (const auto& [t, x] : regular_.terms()) add_shifted(sites[compose(q, inverse(t))], t, x, b2);

    TwistedElement out(alg_);
    out.regular_ = regular_ * v.regular_;
    for (auto& [g, acc] : sites) {
      std::vector<typename Ring::Term> terms;
      for (auto& [h, c] : acc)
        if (!blocks::is_zero(f, c)) terms.emplace_back(h, std::move(c));
      if (terms.empty()) continue;
      out.singular_.emplace_back(g, Ring::from_terms(alg_, std::move(terms)));
    }
    return out;
  }

  TwistedElement& operator+=(const TwistedElement& v) { return *this = *this + v; }

  friend bool operator==(const TwistedElement& a, const TwistedElement& b) {
    return a.alg_ == b.alg_ && a.regular_ == b.regular_ && a.singular_ == b.singular_;
  }

 private:
  const Ring* find_site(const GroupElement& g) const {
    auto it = std::lower_bound(singular_.begin(), singular_.end(), g,
                               [](const Site& s, const GroupElement& x) { return s.first < x; });
    if (it == singular_.end() || !(it->first == g)) return nullptr;
    return &it->second;
  }

  void adopt(std::map<GroupElement, Ring>& acc) {
    singular_.clear();
    for (auto& [g, b] : acc)
      if (!b.is_zero()) singular_.emplace_back(g, std::move(b));
  }

  Algebra<F> alg_;
  Ring regular_;
  std::vector<Site> singular_;
};

template <Field F>
TwistedElement<F> mul(const TwistedElement<F>& u, const TwistedElement<F>& v) {
  return u * v;
}

template <Field F>
TwistedElement<F> embed(const GroupRingElement<F>& a) {
  return TwistedElement<F>::embed(a);
}

template <Field F>
bool equals(const TwistedElement<F>& u, const TwistedElement<F>& v) {
  require_same(u.algebra(), v.algebra(), "equals");
  return u == v;
}

/// n x n matrices over D^1(k[G]); entries have scalar coefficients.
template <Field F>
class TwistedMatrix {
 public:
  using Entry = TwistedElement<F>;

  TwistedMatrix(Algebra<F> scalar_alg, std::size_t n)
      : alg_(scalar_alg.with_n(1)), n_(n), entries_(n * n, Entry::zero(alg_)) {
    if (n == 0) throw UsageError("matrix size must be positive");
  }

  static TwistedMatrix identity(const Algebra<F>& alg, std::size_t n) {
    TwistedMatrix m(alg, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Entry::one(m.alg_);
    return m;
  }

  static TwistedMatrix diagonal(const std::vector<Entry>& d) {
    if (d.empty()) throw UsageError("diagonal: no entries");
    TwistedMatrix m(d.front().algebra(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      require_same(d[i].algebra(), m.alg_, "diagonal");
      m(i, i) = d[i];
    }
    return m;
  }

  const Algebra<F>& algebra() const { return alg_; }
  std::size_t n() const { return n_; }
  Entry& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }
  const Entry& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }

  TwistedMatrix operator*(const TwistedMatrix& v) const {
    check(v, "mat_mul");
    TwistedMatrix out(alg_, n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        Entry acc = Entry::zero(alg_);
        for (std::size_t r = 0; r < n_; ++r) {
          const auto& a = (*this)(i, r);
          const auto& b = v(r, j);
          if (a.is_zero() || b.is_zero()) continue;
          acc += a * b;
        }
        out(i, j) = std::move(acc);
      }
    return out;
  }

  TwistedMatrix operator+(const TwistedMatrix& v) const {
    check(v, "matrix add");
    TwistedMatrix out(alg_, n_);
    for (std::size_t k = 0; k < entries_.size(); ++k) out.entries_[k] = entries_[k] + v.entries_[k];
    return out;
  }

  TwistedMatrix operator-() const {
    TwistedMatrix out(alg_, n_);
    for (std::size_t k = 0; k < entries_.size(); ++k) out.entries_[k] = -entries_[k];
    return out;
  }

  bool is_identity() const { return *this == identity(alg_, n_); }

  friend bool operator==(const TwistedMatrix& a, const TwistedMatrix& b) {
    return a.n_ == b.n_ && a.alg_ == b.alg_ && a.entries_ == b.entries_;
  }

 private:
  void check(const TwistedMatrix& v, const char* what) const {
    if (n_ != v.n_) throw UsageError(std::string(what) + ": size mismatch");
    require_same(alg_, v.alg_, what);
  }

  Algebra<F> alg_;
  std::size_t n_;
  std::vector<Entry> entries_;
};

template <Field F>
TwistedMatrix<F> mat_mul(const TwistedMatrix<F>& u, const TwistedMatrix<F>& v) {
  return u * v;
}

/// D^1(M_n(k)[G]) -> M_n(D^1(k[G])):  F(x)_ij = (alpha_ij, sum_g beta(g)_ij g).
template <Field F>
TwistedMatrix<F> f_shuffle(const TwistedElement<F>& x) {
  const std::size_t n = x.n();
  TwistedMatrix<F> out(x.algebra(), n);
  auto reg = matrix_shuffle(x.regular());
  std::vector<std::vector<std::vector<typename TwistedElement<F>::Site>>> sing(
      n, std::vector<std::vector<typename TwistedElement<F>::Site>>(n));
  for (const auto& [g, b] : x.singular()) {
    auto parts = matrix_shuffle(b);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!parts[i][j].is_zero()) sing[i][j].emplace_back(g, std::move(parts[i][j]));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = TwistedElement<F>(std::move(reg[i][j]), std::move(sing[i][j]));
  return out;
}

/// Inverse of f_shuffle.
template <Field F>
TwistedElement<F> f_unshuffle(const TwistedMatrix<F>& m) {
  const std::size_t n = m.n();
  using Ring1 = GroupRingElement<F>;
  std::vector<std::vector<Ring1>> reg(n, std::vector<Ring1>(n, Ring1(m.algebra())));
  std::map<GroupElement, std::vector<std::vector<Ring1>>> sing;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      reg[i][j] = m(i, j).regular();
      for (const auto& [g, b] : m(i, j).singular()) {
        auto [it, fresh] = sing.try_emplace(g, n, std::vector<Ring1>(n, Ring1(m.algebra())));
        it->second[i][j] = b;
      }
    }
  std::vector<typename TwistedElement<F>::Site> sites;
  for (auto& [g, parts] : sing) sites.emplace_back(g, matrix_unshuffle(parts));
  return TwistedElement<F>(matrix_unshuffle(reg), std::move(sites));
}

}  // namespace d1
