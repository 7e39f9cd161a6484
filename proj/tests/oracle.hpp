#pragma once

// Independent reference implementations used only by the tests. Nothing here
// calls the library's convolution, twisted product or NUCA action: values are
// computed pointwise from the defining sums over explicitly enumerated index
// sets, with their own coefficient arithmetic.

#include <map>
#include <vector>

#include "d1/nuca.hpp"

namespace d1::oracle {

template <Field F>
struct Table {
  using Scalar = typename F::value_type;
  using Coeffs = std::map<GroupElement, std::vector<Scalar>>;
  Coeffs regular;
  std::map<GroupElement, Coeffs> singular;

  explicit Table(const TwistedElement<F>& x) {
    for (const auto& [h, c] : x.regular().terms()) regular[h] = c;
    for (const auto& [g, b] : x.singular())
      for (const auto& [h, c] : b.terms()) singular[g][h] = c;
  }

  const std::vector<Scalar>* alpha(const GroupElement& h) const {
    auto it = regular.find(h);
    return it == regular.end() ? nullptr : &it->second;
  }
  const std::vector<Scalar>* beta(const GroupElement& g, const GroupElement& h) const {
    auto it = singular.find(g);
    if (it == singular.end()) return nullptr;
    auto jt = it->second.find(h);
    return jt == it->second.end() ? nullptr : &jt->second;
  }
  // Largest word length in the memory (not the sites).
  int radius() const {
    int r = 0;
    for (const auto& [h, c] : regular) r = std::max(r, h.length());
    for (const auto& [g, m] : singular) {
      for (const auto& [h, c] : m) r = std::max(r, h.length());
    }
    return r;
  }
};

// acc += a * b for row-major n x n blocks; null operands contribute nothing.
template <Field F>
void mul_acc(const F& f, std::size_t n, std::vector<typename F::value_type>& acc,
             const std::vector<typename F::value_type>* a, const std::vector<typename F::value_type>* b) {
  if (!a || !b) return;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) acc[i * n + j] = f.add(acc[i * n + j], f.mul((*a)[i * n + k], (*b)[k * n + j]));
}

template <Field F>
bool all_zero(const F& f, const std::vector<typename F::value_type>& v) {
  for (const auto& x : v)
    if (!f.is_zero(x)) return false;
  return true;
}

/// (a1, b1) * (a2, b2) evaluated entry by entry from the defining sums.
template <Field F>
TwistedElement<F> twisted_product(const TwistedElement<F>& u, const TwistedElement<F>& v) {
  const auto& alg = u.algebra();
  const F& f = alg.field;
  const std::size_t n = alg.n;
  Table<F> a(u), b(v);
  const int reach = a.radius() + b.radius();
  const auto h_range = ball(alg.group, reach);

  // Sites that can carry a singular part: supp b1, and q t^-1 for q in
  // supp b2, t in supp a1.
  std::vector<GroupElement> sites;
  for (const auto& [g, m] : a.singular) sites.push_back(g);
  for (const auto& [q, m] : b.singular)
    for (const auto& [t, c] : a.regular) sites.push_back(q * inverse(t));
  FiniteSubset site_set(sites);

  std::vector<typename GroupRingElement<F>::Term> regular;
  for (const auto& h : h_range) {
    std::vector<typename F::value_type> acc(n * n, f.zero());
    for (const auto& [t, c] : a.regular) mul_acc(f, n, acc, &c, b.alpha(inverse(t) * h));
    if (!all_zero(f, acc)) regular.emplace_back(h, acc);
  }

  std::vector<typename TwistedElement<F>::Site> singular;
  for (const auto& g : site_set) {
    std::vector<typename GroupRingElement<F>::Term> terms;
    for (const auto& h : h_range) {
      std::vector<typename F::value_type> acc(n * n, f.zero());
      // (a1 b2)(g)(h) = sum_t a1(t) b2(gt)(t^-1 h)
      for (const auto& [t, c] : a.regular) mul_acc(f, n, acc, &c, b.beta(g * t, inverse(t) * h));
      auto it = a.singular.find(g);
      if (it != a.singular.end())
        for (const auto& [t, c] : it->second) {
          // (b1 a2)(g)(h) = sum_t b1(g)(t) a2(t^-1 h)
          mul_acc(f, n, acc, &c, b.alpha(inverse(t) * h));
          // (b1 b2)(g)(h) = sum_t b1(g)(t) b2(gt)(t^-1 h)
          mul_acc(f, n, acc, &c, b.beta(g * t, inverse(t) * h));
        }
      if (!all_zero(f, acc)) terms.emplace_back(h, acc);
    }
    singular.emplace_back(g, GroupRingElement<F>::from_terms(alg, terms));
  }
  return TwistedElement<F>(GroupRingElement<F>::from_terms(alg, regular), singular);
}

/// tau(x)(g) = sum_h a(h) x(gh) + sum_h b(g)(h) x(gh), for one cell g.
template <Field F>
std::vector<typename F::value_type> evaluate_cell(const TwistedElement<F>& omega, const Configuration<F>& x,
                                                  const GroupElement& g) {
  const F& f = omega.field();
  const std::size_t n = omega.n();
  Table<F> t(omega);
  std::vector<typename F::value_type> out(n, f.zero());
  auto add = [&](const std::vector<typename F::value_type>& c, const GroupElement& h) {
    auto value = x.at(g * h);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i] = f.add(out[i], f.mul(c[i * n + j], value[j]));
  };
  for (const auto& [h, c] : t.regular) add(c, h);
  auto it = t.singular.find(g);
  if (it != t.singular.end())
    for (const auto& [h, c] : it->second) add(c, h);
  return out;
}

/// sigma_s(x)(g) = s(g)((g^-1 x)|_M) for rules given as a constant rule and
/// full replacement rules at exceptional cells.
template <Field F>
std::vector<typename F::value_type> evaluate_rules(const LocalRules<F>& rules, const Configuration<F>& x,
                                                   const GroupElement& g) {
  const F& f = x.algebra().field;
  const std::size_t n = x.algebra().n;
  const GroupRingElement<F>* rule = &rules.constant_rule;
  for (const auto& [site, s] : rules.exceptions)
    if (site == g) rule = &s;
  std::vector<typename F::value_type> out(n, f.zero());
  for (const auto& [h, c] : rule->terms()) {
    auto value = x.at(g * h);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i] = f.add(out[i], f.mul(c[i * n + j], value[j]));
  }
  return out;
}

}  // namespace d1::oracle
