#pragma once

// Linear non-uniform cellular automata on (k^n)^G with asymptotically
// constant local rules, stored by their twisted ring element omega = (a, b).
// The action is
//
//   tau(x)(g) = sum_h a(h) x(gh) + sum_h b(g)(h) x(gh)
//
// so the local rule at g is the group ring element a + b(g); outside the
// exceptional set supp(b) every cell uses the constant rule a. Composition
// of automata is the twisted product of their elements.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "d1/linalg.hpp"
#include "d1/twisted.hpp"

namespace d1 {

/// A point of (k^n)^G equal to `base` outside a finite set of sites.
template <Field F>
class Configuration {
 public:
  using Scalar = typename F::value_type;
  using Value = std::vector<Scalar>;
  using Entry = std::pair<GroupElement, Value>;

  explicit Configuration(Algebra<F> alg) : alg_(std::move(alg)), base_(alg_.n, alg_.field.zero()) {}

  /// Canonicalizes: deviation entries at one site are summed, zeros dropped.
  Configuration(Algebra<F> alg, Value base, std::vector<Entry> deviation) : alg_(std::move(alg)), base_(std::move(base)) {
    if (base_.size() != alg_.n) throw UsageError("configuration base of wrong dimension");
    std::map<GroupElement, Value> acc;
    for (auto& [g, v] : deviation) {
      if (v.size() != alg_.n) throw UsageError("configuration value of wrong dimension");
      if (!g.belongs_to(alg_.group)) throw UsageError("site " + g.to_string() + " not in " + alg_.group.to_string());
      auto [it, fresh] = acc.try_emplace(g, v);
      if (!fresh)
        for (std::size_t i = 0; i < alg_.n; ++i) it->second[i] = alg_.field.add(it->second[i], v[i]);
    }
    for (auto& [g, v] : acc)
      if (!is_zero_value(v)) dev_.emplace_back(g, std::move(v));
  }

  /// The configuration with e_j at site g and zero elsewhere.
  static Configuration delta(const Algebra<F>& alg, const GroupElement& g, std::size_t j) {
    Value v(alg.n, alg.field.zero());
    v[j] = alg.field.one();
    return Configuration(alg, Value(alg.n, alg.field.zero()), {{g, v}});
  }

  const Algebra<F>& algebra() const { return alg_; }
  const Value& base() const { return base_; }
  const std::vector<Entry>& deviation() const { return dev_; }

  FiniteSubset deviation_support() const {
    std::vector<GroupElement> s;
    for (const auto& [g, v] : dev_) s.push_back(g);
    return FiniteSubset(std::move(s));
  }

  bool is_finitely_supported() const { return is_zero_value(base_); }
  bool is_zero() const { return dev_.empty() && is_zero_value(base_); }

  /// x(g) = base + deviation(g).
  Value at(const GroupElement& g) const {
    auto it = std::lower_bound(dev_.begin(), dev_.end(), g,
                               [](const Entry& e, const GroupElement& x) { return e.first < x; });
    if (it == dev_.end() || !(it->first == g)) return base_;
    Value out(alg_.n, alg_.field.zero());
    for (std::size_t i = 0; i < alg_.n; ++i) out[i] = alg_.field.add(base_[i], it->second[i]);
    return out;
  }

  /// x restricted to a finite set, laid out site-major in canonical order.
  Vector<F> restrict_to(const FiniteSubset& set) const {
    Vector<F> out;
    out.reserve(set.size() * alg_.n);
    for (const auto& g : set) {
      auto v = at(g);
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  }

  Configuration operator+(const Configuration& y) const {
    require_same(alg_, y.alg_, "configuration add");
    Value b(alg_.n);
    for (std::size_t i = 0; i < alg_.n; ++i) b[i] = alg_.field.add(base_[i], y.base_[i]);
    auto all = dev_;
    all.insert(all.end(), y.dev_.begin(), y.dev_.end());
    return Configuration(alg_, std::move(b), std::move(all));
  }

  Configuration scale(const Scalar& c) const {
    Value b = base_;
    for (auto& x : b) x = alg_.field.mul(c, x);
    auto d = dev_;
    for (auto& [g, v] : d)
      for (auto& x : v) x = alg_.field.mul(c, x);
    return Configuration(alg_, std::move(b), std::move(d));
  }

  /// (g x)(h) = x(g^-1 h): the deviation moves from site p to site g p.
  Configuration translate(const GroupElement& g) const {
    auto d = dev_;
    for (auto& [p, v] : d) p = compose(g, p);
    return Configuration(alg_, base_, std::move(d));
  }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.alg_ == b.alg_ && a.base_ == b.base_ && a.dev_ == b.dev_;
  }

 private:
  bool is_zero_value(const Value& v) const {
    return std::all_of(v.begin(), v.end(), [&](const auto& s) { return alg_.field.is_zero(s); });
  }

  Algebra<F> alg_;
  Value base_;
  std::vector<Entry> dev_;
};

/// A finite piece of configuration: values on a finite domain, site-major.
template <Field F>
struct Pattern {
  FiniteSubset domain;
  Vector<F> values;
};

template <Field F>
class Nuca {
 public:
  using Element = TwistedElement<F>;
  using Rule = GroupRingElement<F>;

  explicit Nuca(Element omega) : omega_(std::move(omega)) {}

  static Nuca identity(const Algebra<F>& alg) { return Nuca(Element::one(alg)); }
  static Nuca zero(const Algebra<F>& alg) { return Nuca(Element::zero(alg)); }

  const Element& omega() const { return omega_; }
  const Algebra<F>& algebra() const { return omega_.algebra(); }

  /// M = supp(alpha) together with supp(beta(g)) for every g.
  FiniteSubset memory() const { return omega_.memory(); }
  /// E = supp(beta): the cells whose rule differs from the constant rule.
  FiniteSubset exceptional_set() const { return omega_.singular_support(); }

  /// The local rule used at g, as an element h -> coefficient of x(gh).
  Rule rule_at(const GroupElement& g) const { return omega_.regular() + omega_.singular_at(g); }
  const Rule& constant_rule() const { return omega_.regular(); }

  friend bool operator==(const Nuca& a, const Nuca& b) { return a.omega_ == b.omega_; }

 private:
  Element omega_;
};

template <Field F>
Configuration<F> apply(const Nuca<F>& t, const Configuration<F>& x) {
  require_same(t.algebra(), x.algebra(), "apply");
  const auto& alg = x.algebra();
  const F& f = alg.field;
  auto out_base = blocks::apply(f, alg.n, t.constant_rule().augmentation(), x.base());

  FiniteSubset sites = product_set(x.deviation_support(), t.memory().inverted()).unite(t.exceptional_set());
  std::vector<typename Configuration<F>::Entry> dev;
  for (const auto& g : sites) {
    std::vector<typename F::value_type> value(alg.n, f.zero());
    auto accumulate = [&](const GroupRingElement<F>& rule) {
      for (const auto& [h, c] : rule.terms()) {
        auto y = blocks::apply(f, alg.n, c, x.at(compose(g, h)));
        for (std::size_t i = 0; i < alg.n; ++i) value[i] = f.add(value[i], y[i]);
      }
    };
    accumulate(t.constant_rule());
    accumulate(t.omega().singular_at(g));
    for (std::size_t i = 0; i < alg.n; ++i) value[i] = f.sub(value[i], out_base[i]);
    dev.emplace_back(g, std::move(value));
  }
  return Configuration<F>(alg, std::move(out_base), std::move(dev));
}

/// The automaton tau1 o tau2.
template <Field F>
Nuca<F> compose(const Nuca<F>& t1, const Nuca<F>& t2) {
  return Nuca<F>(t1.omega() * t2.omega());
}

/// Local-rule view of an automaton: the constant rule plus the full rule at
/// every cell where it differs.
template <Field F>
struct LocalRules {
  GroupRingElement<F> constant_rule;
  std::vector<std::pair<GroupElement, GroupRingElement<F>>> exceptions;
};

template <Field F>
Nuca<F> from_local_rules(const LocalRules<F>& rules) {
  std::vector<typename TwistedElement<F>::Site> sing;
  for (const auto& [g, s] : rules.exceptions) {
    require_same(s.algebra(), rules.constant_rule.algebra(), "from_local_rules");
    sing.emplace_back(g, s - rules.constant_rule);
  }
  return Nuca<F>(TwistedElement<F>(rules.constant_rule, std::move(sing)));
}

template <Field F>
LocalRules<F> to_local_rules(const Nuca<F>& t) {
  LocalRules<F> out{t.constant_rule(), {}};
  for (const auto& [g, b] : t.omega().singular()) out.exceptions.emplace_back(g, t.constant_rule() + b);
  return out;
}

/// The finite linear map V^{EM} -> V^E given by the rules on E.
template <Field F>
struct InducedLocalMap {
  FiniteSubset domain;    // EM
  FiniteSubset codomain;  // E
  Matrix<F> matrix;       // rows (g, i) for g in E, columns (q, j) for q in EM

  Pattern<F> operator()(const Pattern<F>& input) const {
    if (!(input.domain == domain)) throw UsageError("pattern domain does not match the local map");
    return {codomain, matrix * input.values};
  }
};

template <Field F>
InducedLocalMap<F> induced_local_map(const Nuca<F>& t, const FiniteSubset& set) {
  const auto& alg = t.algebra();
  const std::size_t n = alg.n;
  FiniteSubset domain = product_set(set, t.memory());
  Matrix<F> m(alg.field, n * set.size(), n * domain.size());
  for (std::size_t gi = 0; gi < set.size(); ++gi) {
    const auto& g = set[gi];
    const auto rule = t.rule_at(g);
    for (const auto& [h, c] : rule.terms()) {
      std::size_t qi = domain.index_of(compose(g, h));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          m(gi * n + i, qi * n + j) = alg.field.add(m(gi * n + i, qi * n + j), c[i * n + j]);
    }
  }
  return {std::move(domain), set, std::move(m)};
}

/// (g s)(h) = s(g^-1 h): the exceptional cells move from p to g p.
template <Field F>
Nuca<F> shift(const Nuca<F>& t, const GroupElement& g) {
  std::vector<typename TwistedElement<F>::Site> sing;
  for (const auto& [p, b] : t.omega().singular()) sing.emplace_back(compose(g, p), b);
  return Nuca<F>(TwistedElement<F>(t.constant_rule(), std::move(sing)));
}

/// A basis configuration delta_{q} e_j with apply(t, .) != 0, found among the
/// sites E M and g0 M for a cell g0 outside E. Exists for every nonzero t
/// because G is infinite.
template <Field F>
std::optional<Configuration<F>> find_nonzero_probe(const Nuca<F>& t) {
  const auto& alg = t.algebra();
  FiniteSubset exc = t.exceptional_set();
  GroupElement g0 = GroupElement::identity(alg.group);
  for (int r = 0; exc.contains(g0); ++r) {
    for (const auto& g : ball(alg.group, r))
      if (!exc.contains(g)) {
        g0 = g;
        break;
      }
  }
  FiniteSubset probes = product_set(exc.unite(FiniteSubset{g0}), t.memory());
  for (const auto& q : probes)
    for (std::size_t j = 0; j < alg.n; ++j) {
      auto x = Configuration<F>::delta(alg, q, j);
      if (!apply(t, x).is_zero()) return x;
    }
  return std::nullopt;
}

}  // namespace d1
