#pragma once

// Invertibility and injectivity procedures for linear NUCA:
//  - identity checks in the twisted ring,
//  - exact one-sided inverse solving with bounded supports,
//  - finitely supported kernel search (failure of pre-injectivity),
//  - the kernel tower over an exhaustion of Z^d by boxes,
//  - a combined stable-injectivity verdict.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <variant>
#include <vector>

#include "d1/linalg.hpp"
#include "d1/nuca.hpp"

namespace d1 {

/// True iff u o v is the identity automaton, i.e. omega(u) * omega(v) = one.
template <Field F>
bool verify_identity(const Nuca<F>& u, const Nuca<F>& v) {
  require_same(u.algebra(), v.algebra(), "verify_identity");
  return (u.omega() * v.omega()).is_one();
}

enum class Side { Left, Right };

inline const char* to_string(Side s) { return s == Side::Left ? "left" : "right"; }

/// Bounds for the unknown inverse: regular support in `memory`, singular
/// sites in `exceptional`, each singular part supported in `memory`.
struct InverseSearchParams {
  Side side = Side::Left;
  FiniteSubset memory;
  FiniteSubset exceptional;
};

namespace detail {

// Coordinate of a twisted element: (part, site, h, i, j), part 0 = regular.
using Coordinate = std::tuple<int, GroupElement, GroupElement, std::size_t, std::size_t>;

template <Field F>
void for_each_coordinate(const TwistedElement<F>& x,
                         const std::function<void(const Coordinate&, const typename F::value_type&)>& fn) {
  const std::size_t n = x.n();
  const auto site0 = GroupElement::identity(x.algebra().group);
  for (const auto& [h, c] : x.regular().terms())
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!x.field().is_zero(c[i * n + j])) fn(Coordinate{0, site0, h, i, j}, c[i * n + j]);
  for (const auto& [g, b] : x.singular())
    for (const auto& [h, c] : b.terms())
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!x.field().is_zero(c[i * n + j])) fn(Coordinate{1, g, h, i, j}, c[i * n + j]);
}

}  // namespace detail

/// Finds omega' within the bounds with omega' * omega = one (left) or
/// omega * omega' = one (right). The conditions are linear in the unknown
/// coefficients of omega'; the solver returns the solution with all free
/// variables zero.
template <Field F>
std::optional<Nuca<F>> solve_one_sided_inverse(const Nuca<F>& t, const InverseSearchParams& params) {
  const auto& alg = t.algebra();
  const F& f = alg.field;
  const std::size_t n = alg.n;
  const std::size_t nn = n * n;
  const auto& mem = params.memory;
  const auto& exc = params.exceptional;
  const std::size_t singular_vars = exc.size() * mem.size() * nn;
  const std::size_t vars = singular_vars + mem.size() * nn;

  // Unknowns: singular coefficients first (site-major), regular last, so the
  // echelon solver eliminates each site's block before touching the shared
  // regular unknowns.
  auto basis_element = [&](std::size_t col) {
    auto unit = blocks::zero(f, n);
    if (col < singular_vars) {
      std::size_t gi = col / (mem.size() * nn);
      std::size_t rest = col % (mem.size() * nn);
      unit[rest % nn] = f.one();
      auto b = GroupRingElement<F>::monomial(alg, mem[rest / nn], unit);
      return TwistedElement<F>(GroupRingElement<F>(alg), {{exc[gi], b}});
    }
    std::size_t rest = col - singular_vars;
    unit[rest % nn] = f.one();
    return TwistedElement<F>::embed(GroupRingElement<F>::monomial(alg, mem[rest / nn], unit));
  };

  std::map<detail::Coordinate, std::size_t> row_of;
  std::vector<typename SparseSystem<F>::Row> rows;
  auto row_index = [&](const detail::Coordinate& key) {
    auto [it, fresh] = row_of.try_emplace(key, rows.size());
    if (fresh) rows.emplace_back();
    return it->second;
  };
  for (std::size_t col = 0; col < vars; ++col) {
    auto e = basis_element(col);
    auto product = params.side == Side::Left ? e * t.omega() : t.omega() * e;
    detail::for_each_coordinate<F>(product, [&](const detail::Coordinate& key, const auto& v) {
      rows[row_index(key)].emplace_back(col, v);
    });
  }
  auto one = TwistedElement<F>::one(alg);
  std::map<std::size_t, typename F::value_type> rhs_of;
  detail::for_each_coordinate<F>(one, [&](const detail::Coordinate& key, const auto& v) { rhs_of[row_index(key)] = v; });

  SparseSystem<F> system(f, vars);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto it = rhs_of.find(r);
    system.add_equation(std::move(rows[r]), it == rhs_of.end() ? f.zero() : it->second);
    if (!system.consistent()) return std::nullopt;
  }
  auto x = system.solve();
  if (!x) return std::nullopt;

  std::vector<typename GroupRingElement<F>::Term> reg;
  std::map<GroupElement, std::vector<typename GroupRingElement<F>::Term>> sing;
  for (std::size_t col = 0; col < vars; ++col) {
    if (f.is_zero((*x)[col])) continue;
    auto c = blocks::zero(f, n);
    if (col < singular_vars) {
      std::size_t gi = col / (mem.size() * nn);
      std::size_t rest = col % (mem.size() * nn);
      c[rest % nn] = (*x)[col];
      sing[exc[gi]].emplace_back(mem[rest / nn], c);
    } else {
      std::size_t rest = col - singular_vars;
      c[rest % nn] = (*x)[col];
      reg.emplace_back(mem[rest / nn], c);
    }
  }
  std::vector<typename TwistedElement<F>::Site> sites;
  for (auto& [g, terms] : sing) sites.emplace_back(g, GroupRingElement<F>::from_terms(alg, std::move(terms)));
  Nuca<F> inv(TwistedElement<F>(GroupRingElement<F>::from_terms(alg, std::move(reg)), std::move(sites)));

  bool ok = params.side == Side::Left ? verify_identity(inv, t) : verify_identity(t, inv);
  if (!ok) throw std::logic_error("solve_one_sided_inverse: solution failed re-verification");
  return inv;
}

template <Field F>
struct InverseHit {
  Nuca<F> inverse;
  int radius;
};

/// Tries memory = exceptional set = ball(r) for r = 0..max_radius. A miss is
/// not a proof that no inverse exists.
template <Field F>
std::optional<InverseHit<F>> search_inverse(const Nuca<F>& t, Side side, int max_radius) {
  for (int r = 0; r <= max_radius; ++r) {
    auto b = ball(t.algebra().group, r);
    if (auto inv = solve_one_sided_inverse(t, InverseSearchParams{side, b, b})) return InverseHit<F>{*inv, r};
  }
  return std::nullopt;
}

template <Field F>
std::optional<InverseHit<F>> search_left_inverse(const Nuca<F>& t, int max_radius) {
  return search_inverse(t, Side::Left, max_radius);
}

/// A nonzero x supported in `support` with apply(t, x) = 0, or nullopt when
/// none exists there. The witness is the first vector of the reduced kernel
/// basis, coordinates in canonical site order.
template <Field F>
std::optional<Configuration<F>> finitely_supported_kernel_on(const Nuca<F>& t, const FiniteSubset& support) {
  const auto& alg = t.algebra();
  const std::size_t n = alg.n;
  // Outputs outside support M^-1 vanish automatically.
  FiniteSubset outputs = product_set(support, t.memory().inverted());
  auto local = induced_local_map(t, outputs);
  std::vector<std::size_t> cols;
  for (const auto& g : support) {
    std::size_t qi = local.domain.index_of(g);
    for (std::size_t j = 0; j < n; ++j)
      cols.push_back(qi == local.domain.size() ? static_cast<std::size_t>(-1) : qi * n + j);
  }
  // Sites of the support outside EM (only possible when M is empty) are
  // unconstrained; give them zero columns.
  Matrix<F> a(alg.field, local.matrix.rows(), cols.size());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t c = 0; c < cols.size(); ++c)
      if (cols[c] != static_cast<std::size_t>(-1)) a(i, c) = local.matrix(i, cols[c]);
  auto ker = kernel_basis(a);
  if (ker.is_zero()) return std::nullopt;
  const auto& v = ker.basis().front();
  std::vector<typename Configuration<F>::Entry> dev;
  for (std::size_t si = 0; si < support.size(); ++si)
    dev.emplace_back(support[si], std::vector<typename F::value_type>(v.begin() + static_cast<std::ptrdiff_t>(si * n),
                                                                      v.begin() + static_cast<std::ptrdiff_t>((si + 1) * n)));
  Configuration<F> x(alg, std::vector<typename F::value_type>(n, alg.field.zero()), std::move(dev));
  if (x.is_zero() || !apply(t, x).is_zero()) throw std::logic_error("finitely_supported_kernel: witness failed re-verification");
  return x;
}

/// finitely_supported_kernel_on over ball(radius).
template <Field F>
std::optional<Configuration<F>> finitely_supported_kernel(const Nuca<F>& t, int radius) {
  return finitely_supported_kernel_on(t, ball(t.algebra().group, radius));
}

struct TowerLevel {
  int level = 0;
  std::size_t sites = 0;     // |E_n|
  std::size_t dim_kernel = 0;  // dim I_n
  std::size_t dim_thread = 0;  // dim J_n, the stabilized image in I_n
  int stabilized_at = -1;    // smallest m with the image unchanged for `window` further steps
  bool stabilized = false;
};

struct KernelTowerReport {
  int depth = 0;
  int window = 0;
  int max_steps = 0;
  std::vector<TowerLevel> levels;

  bool all_threads_zero() const {
    return std::all_of(levels.begin(), levels.end(), [](const TowerLevel& l) { return l.stabilized && l.dim_thread == 0; });
  }
};

/// I_n = ker of the induced local map on the box E_n = [-n, n]^d; J_n is the
/// eventual image of I_m under restriction to E_n M, declared stable once it
/// has not changed for `window` consecutive m. Only defined for Z^d.
template <Field F>
KernelTowerReport kernel_tower(const Nuca<F>& t, int depth, int window, int max_steps = -1) {
  const auto& alg = t.algebra();
  if (alg.group.kind != GroupKind::Zd) throw UsageError("kernel_tower requires a group Z^d");
  if (depth < 0 || window < 1) throw UsageError("kernel_tower: depth >= 0 and window >= 1 required");
  if (max_steps < 0) max_steps = 4 * window + 8;
  const std::size_t n = alg.n;
  const FiniteSubset mem = t.memory();

  struct Stage {
    FiniteSubset domain;
    Subspace<F> kernel;
  };
  std::map<int, Stage> stages;
  auto stage = [&](int m) -> const Stage& {
    auto it = stages.find(m);
    if (it != stages.end()) return it->second;
    auto local = induced_local_map(t, box(alg.group, m));
    return stages.emplace(m, Stage{local.domain, kernel_basis(local.matrix)}).first->second;
  };

  KernelTowerReport report{depth, window, max_steps, {}};
  for (int level = 0; level <= depth; ++level) {
    const Stage& base = stage(level);
    TowerLevel out;
    out.level = level;
    out.sites = box(alg.group, level).size();
    out.dim_kernel = base.kernel.dim();
    std::size_t last = base.kernel.dim();
    int unchanged = 0;
    int candidate = level;
    for (int m = level + 1; m <= level + max_steps; ++m) {
      const Stage& big = stage(m);
      Matrix<F> proj(alg.field, n * base.domain.size(), n * big.domain.size());
      for (std::size_t qi = 0; qi < base.domain.size(); ++qi) {
        std::size_t pi = big.domain.index_of(base.domain[qi]);
        for (std::size_t j = 0; j < n; ++j) proj(qi * n + j, pi * n + j) = alg.field.one();
      }
      std::size_t d = image(proj, big.kernel).dim();
      if (d == last) {
        if (++unchanged >= window) {
          out.stabilized = true;
          break;
        }
      } else {
        last = d;
        unchanged = 0;
        candidate = m;
      }
    }
    out.dim_thread = last;
    out.stabilized_at = candidate;
    report.levels.push_back(out);
  }
  return report;
}

struct VerdictBudget {
  int max_radius = 3;
  int depth = 3;
  int window = 3;
};

enum class VerdictKind { ProvenStablyInjective, ProvenNotInjective, BoundedEvidence };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::ProvenStablyInjective: return "proven_stably_injective";
    case VerdictKind::ProvenNotInjective: return "proven_not_injective";
    case VerdictKind::BoundedEvidence: return "bounded_evidence";
  }
  return "?";
}

template <Field F>
struct InjectivityVerdict {
  VerdictKind kind = VerdictKind::BoundedEvidence;
  VerdictBudget budget;
  std::optional<Nuca<F>> certificate;  // left inverse
  int certificate_radius = -1;
  std::optional<Configuration<F>> witness;
  bool witness_for_constant_part = false;  // the witness kills embed(alpha), not t itself
  int witness_radius = -1;
  std::optional<KernelTowerReport> tower;
};

/// Left inverse found: stably injective. Finitely supported kernel of t or
/// of its constant part: not stably injective. Otherwise the kernel tower
/// (on Z^d) is reported as evidence only.
template <Field F>
InjectivityVerdict<F> stable_injectivity_verdict(const Nuca<F>& t, const VerdictBudget& budget) {
  InjectivityVerdict<F> v;
  v.budget = budget;
  if (auto hit = search_left_inverse(t, budget.max_radius)) {
    if (!verify_identity(hit->inverse, t)) throw std::logic_error("verdict: certificate failed re-verification");
    v.kind = VerdictKind::ProvenStablyInjective;
    v.certificate = hit->inverse;
    v.certificate_radius = hit->radius;
    return v;
  }
  Nuca<F> constant(TwistedElement<F>::embed(t.constant_rule()));
  for (int r = 0; r <= budget.max_radius; ++r) {
    for (bool constant_part : {false, true}) {
      const Nuca<F>& target = constant_part ? constant : t;
      if (auto x = finitely_supported_kernel(target, r)) {
        v.kind = VerdictKind::ProvenNotInjective;
        v.witness = *x;
        v.witness_for_constant_part = constant_part;
        v.witness_radius = r;
        return v;
      }
    }
  }
  v.kind = VerdictKind::BoundedEvidence;
  if (t.algebra().group.kind == GroupKind::Zd) v.tower = kernel_tower(t, budget.depth, budget.window);
  return v;
}

}  // namespace d1
