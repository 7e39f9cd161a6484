#pragma once

// Seeded randomized suites over M_n(D^1(k[G])):
//  - direct finiteness: for units u built from generator words, any right
//    inverse v (constructed or re-solved) must also satisfy v u = 1;
//  - the injective-to-surjective pipeline: a left inverse found by search
//    must also be a right inverse; a non-injective control must yield no
//    certificate.
// Every trial is reconstructible from the suite seed and its index.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "d1/random.hpp"
#include "d1/serialize.hpp"

namespace d1 {

struct SuiteConfig {
  std::uint64_t seed = 1;
  int trials = 10;
  GroupSpec group = GroupSpec::zd(1);
  FieldSpec field = FieldSpec::prime(2);
  std::size_t n = 1;
  int support_radius = 1;
  int max_word = 3;  // generator factors per unit, drawn from 1..max_word
  VerdictBudget budget;
  bool rediscover = false;       // direct finiteness: re-solve the right inverse
  bool include_controls = true;  // pipeline: fixed identity, unipotent and decoy trials
  int threads = 0;               // 0: D1_THREADS, else hardware concurrency

  void validate() const {
    if (trials < 1) throw UsageError("trials must be at least 1");
    if (support_radius < 0) throw UsageError("support radius must be nonnegative");
    if (n < 1) throw UsageError("n must be positive");
    if (max_word < 0) throw UsageError("max word length must be nonnegative");
    if (budget.max_radius < 0 || budget.depth < 0 || budget.window < 1) throw UsageError("bad budget");
  }
};

enum class TrialStatus { Pass, Fail, Inconclusive, BoundedEvidence };

inline const char* to_string(TrialStatus s) {
  switch (s) {
    case TrialStatus::Pass: return "pass";
    case TrialStatus::Fail: return "fail";
    case TrialStatus::Inconclusive: return "inconclusive";
    case TrialStatus::BoundedEvidence: return "bounded_evidence";
  }
  return "?";
}

struct TrialOutcome {
  int index = 0;
  std::string label;  // "random" or the control's name
  std::uint64_t seed = 0;
  std::vector<std::string> word;
  TrialStatus status = TrialStatus::Pass;
  int radius = -1;  // certificate radius, pipeline only
  std::string note;
  io::Json payload;  // counterexample data, filled on failure
};

struct SuiteReport {
  std::string suite;
  SuiteConfig config;
  std::string statement;
  std::vector<TrialOutcome> trials;
  int passed = 0, failed = 0, inconclusive = 0, bounded_evidence = 0;
  double wall_clock_seconds = 0;

  bool ok() const { return failed == 0; }
};

// ---- units ------------------------------------------------------------------

/// One invertible factor of a unit: a matrix with its known inverse.
template <Field F>
struct Generator {
  std::string name;
  TwistedMatrix<F> matrix;
  TwistedMatrix<F> inverse;
};

template <Field F>
struct UnitDraw {
  TwistedMatrix<F> u;
  TwistedMatrix<F> u_inv;
  std::vector<std::string> word;
};

namespace detail {

template <Field F>
std::string ring_name(const GroupRingElement<F>& a) {
  std::string out;
  for (const auto& [g, c] : a.terms()) {
    if (!out.empty()) out += "+";
    out += io::scalar_to_json(a.algebra().field, c[0]).dump() + "*" + g.to_string();
  }
  return out.empty() ? "0" : out;
}

template <Field F>
TwistedMatrix<F> with_entry(const Algebra<F>& scalar, std::size_t n, std::size_t i, std::size_t j,
                            const TwistedElement<F>& x) {
  auto m = TwistedMatrix<F>::identity(scalar, n);
  m(i, j) = x;
  return m;
}

}  // namespace detail

/// diag(1, .., c g, .., 1), inverse c^-1 g^-1 in the same slot.
template <Field F>
Generator<F> monomial_unit(const Algebra<F>& scalar, std::size_t n, std::size_t i, const typename F::value_type& c,
                           const GroupElement& g) {
  const F& f = scalar.field;
  auto x = embed(GroupRingElement<F>::scalar_monomial(scalar, g, c));
  auto y = embed(GroupRingElement<F>::scalar_monomial(scalar, inverse(g), f.inv(c)));
  return {"mono(" + std::to_string(i) + "," + io::scalar_to_json(f, c).dump() + "*" + g.to_string() + ")",
          detail::with_entry(scalar, n, i, i, x), detail::with_entry(scalar, n, i, i, y)};
}

/// diag(1, .., 1 + nu, .., 1) with nu = (0, beta(site) = b). When the
/// identity is not in supp(b), nu * nu = 0 and the inverse is 1 - nu.
template <Field F>
Generator<F> unipotent_unit(const Algebra<F>& scalar, std::size_t n, std::size_t i, const GroupElement& site,
                            const GroupRingElement<F>& b) {
  if (b.support().contains(GroupElement::identity(scalar.group)))
    throw UsageError("unipotent_unit: singular part must avoid the identity");
  TwistedElement<F> nu(GroupRingElement<F>(scalar), {{site, b}});
  auto one = TwistedElement<F>::one(scalar);
  return {"unip(" + std::to_string(i) + "," + site.to_string() + ":" + detail::ring_name(b) + ")",
          detail::with_entry(scalar, n, i, i, one + nu), detail::with_entry(scalar, n, i, i, one - nu)};
}

/// I + r E_ij for i != j; inverse I - r E_ij.
template <Field F>
Generator<F> elementary_unit(const Algebra<F>& scalar, std::size_t n, std::size_t i, std::size_t j,
                             const TwistedElement<F>& r) {
  if (i == j || i >= n || j >= n) throw UsageError("elementary_unit: need distinct indices below n");
  std::string name = "elem(" + std::to_string(i) + "," + std::to_string(j) + "," + detail::ring_name(r.regular());
  for (const auto& [g, b] : r.singular()) name += ";" + g.to_string() + ":" + detail::ring_name(b);
  return {name + ")", detail::with_entry(scalar, n, i, j, r), detail::with_entry(scalar, n, i, j, -r)};
}

/// u = g1 g2 ... gk and u^-1 = gk^-1 ... g1^-1, re-verified.
template <Field F>
UnitDraw<F> compose_word(const Algebra<F>& scalar, std::size_t n, const std::vector<Generator<F>>& word) {
  UnitDraw<F> out{TwistedMatrix<F>::identity(scalar, n), TwistedMatrix<F>::identity(scalar, n), {}};
  for (const auto& g : word) {
    out.u = out.u * g.matrix;
    out.u_inv = g.inverse * out.u_inv;
    out.word.push_back(g.name);
  }
  if (!(out.u * out.u_inv).is_identity()) throw std::logic_error("compose_word: product is not the identity");
  return out;
}

/// A random unit of M_n(D^1(k[G])) with supports in ball(radius).
template <Field F>
UnitDraw<F> gen_unit(Rng& rng, const Algebra<F>& scalar, std::size_t n, int radius, int max_word) {
  RandomSource<F> src(scalar, rng, radius);
  std::vector<GroupElement> nontrivial;
  for (const auto& g : ball(scalar.group, radius))
    if (!g.is_identity()) nontrivial.push_back(g);

  std::vector<Generator<F>> word;
  const std::size_t length = max_word > 0 ? src.uniform(1, static_cast<std::size_t>(max_word)) : 0;
  for (std::size_t k = 0; k < length; ++k) {
    std::size_t kinds = n > 1 ? 3 : 2;
    std::size_t kind = src.uniform(0, kinds - 1);
    std::size_t i = src.uniform(0, n - 1);
    if (kind == 1 && nontrivial.empty()) kind = 0;
    if (kind == 0) {
      word.push_back(monomial_unit(scalar, n, i, src.nonzero(), src.element()));
    } else if (kind == 1) {
      std::vector<typename GroupRingElement<F>::Term> terms;
      std::size_t count = src.uniform(1, 2);
      for (std::size_t t = 0; t < count; ++t)
        terms.emplace_back(nontrivial[src.uniform(0, nontrivial.size() - 1)], Block<F>{src.nonzero()});
      auto b = GroupRingElement<F>::from_terms(scalar, std::move(terms));
      if (b.is_zero()) b = GroupRingElement<F>::scalar_monomial(scalar, nontrivial.front(), scalar.field.one());
      word.push_back(unipotent_unit(scalar, n, i, src.element(), b));
    } else {
      std::size_t j = src.uniform(0, n - 2);
      if (j >= i) ++j;
      TwistedElement<F> r(scalar);
      while (r.is_zero()) r = src.twisted(2, 1, 2);
      word.push_back(elementary_unit(scalar, n, i, j, r));
    }
  }
  return compose_word(scalar, n, word);
}

// ---- suites -----------------------------------------------------------------

namespace detail {

inline int thread_count(const SuiteConfig& c) {
  int t = c.threads;
  if (t <= 0) {
    if (const char* env = std::getenv("D1_THREADS")) t = std::atoi(env);
  }
  if (t <= 0) t = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return std::max(1, t);
}

/// Runs fn(i) for i in [0, count), writing results by index.
template <class Fn>
std::vector<TrialOutcome> run_indexed(int count, int threads, Fn&& fn) {
  std::vector<TrialOutcome> out(static_cast<std::size_t>(count));
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = fn(i);
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int i; (i = next++) < count;) out[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
        next = count;
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

inline void tally(SuiteReport& r) {
  for (const auto& t : r.trials) {
    switch (t.status) {
      case TrialStatus::Pass: ++r.passed; break;
      case TrialStatus::Fail: ++r.failed; break;
      case TrialStatus::Inconclusive: ++r.inconclusive; break;
      case TrialStatus::BoundedEvidence: ++r.bounded_evidence; break;
    }
  }
}

template <Field F>
io::Json matrix_payload(const TwistedMatrix<F>& m) {
  io::Json j;
  j["header"] = io::header_to_json(io::header_for(m.algebra().with_n(m.n()), "twisted_matrix"));
  j["payload"] = io::twisted_matrix_to_json(m);
  return j;
}

/// A right inverse of u found by the linear solver, supports bounded by the
/// known inverse; nullopt if the solver finds none there.
template <Field F>
std::optional<TwistedMatrix<F>> resolve_right_inverse(const TwistedMatrix<F>& u, const TwistedMatrix<F>& known) {
  auto x = f_unshuffle(u);
  auto y = f_unshuffle(known);
  FiniteSubset mem = y.memory().unite(FiniteSubset{GroupElement::identity(x.algebra().group)});
  auto inv = solve_one_sided_inverse(Nuca<F>(x), InverseSearchParams{Side::Right, mem, y.singular_support()});
  if (!inv) return std::nullopt;
  return f_shuffle(inv->omega());
}

constexpr const char* kStatement =
    "Checks an implication on residually finite groups (Z^d, free groups): a one-sided inverse must be two-sided. "
    "A failure would be a counterexample; none is expected.";

}  // namespace detail

template <Field F>
SuiteReport run_direct_finiteness(const SuiteConfig& config, const F& field) {
  config.validate();
  auto start = std::chrono::steady_clock::now();
  const Algebra<F> scalar{field, config.group, 1};
  SuiteReport report{"direct_finiteness", config, detail::kStatement, {}, 0, 0, 0, 0, 0};
  report.trials = detail::run_indexed(config.trials, detail::thread_count(config), [&](int i) {
    TrialOutcome o;
    o.index = i;
    o.label = "random";
    o.seed = mix_seed(config.seed, static_cast<std::uint64_t>(i));
    Rng rng(o.seed);
    auto draw = gen_unit(rng, scalar, config.n, config.support_radius, config.max_word);
    o.word = draw.word;
    TwistedMatrix<F> v = draw.u_inv;
    if (config.rediscover) {
      auto found = detail::resolve_right_inverse(draw.u, draw.u_inv);
      if (!found) {
        o.status = TrialStatus::Fail;
        o.note = "solver found no right inverse within the known inverse's supports";
        o.payload["u"] = detail::matrix_payload(draw.u);
        return o;
      }
      v = *found;
      o.note = "right inverse re-solved";
    }
    if (!(draw.u * v).is_identity()) throw std::logic_error("direct finiteness: u v != 1 for the drawn pair");
    if (!(v * draw.u).is_identity()) {
      o.status = TrialStatus::Fail;
      o.note = "u v = 1 but v u != 1";
      o.payload["u"] = detail::matrix_payload(draw.u);
      o.payload["v"] = detail::matrix_payload(v);
    }
    return o;
  });
  detail::tally(report);
  report.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

template <Field F>
SuiteReport run_surjunctivity_pipeline(const SuiteConfig& config, const F& field) {
  config.validate();
  auto start = std::chrono::steady_clock::now();
  const Algebra<F> scalar{field, config.group, 1};
  const Algebra<F> alg{field, config.group, config.n};
  const auto e = GroupElement::identity(config.group);
  const auto g1 = generators(config.group).front();

  // Pipeline on one NUCA: left inverse by search, then it must be a right inverse.
  auto certify = [&](TrialOutcome& o, const Nuca<F>& t) {
    auto hit = search_left_inverse(t, config.budget.max_radius);
    if (!hit) {
      o.status = TrialStatus::Inconclusive;
      o.note = "no left inverse within the radius budget";
      return;
    }
    o.radius = hit->radius;
    if (!verify_identity(t, hit->inverse)) {
      o.status = TrialStatus::Fail;
      o.note = "left inverse is not a right inverse";
      o.payload["t"] = io::twisted_to_json(t.omega());
      o.payload["left_inverse"] = io::twisted_to_json(hit->inverse.omega());
    }
  };

  struct Control {
    std::string label;
    std::function<TrialOutcome()> run;
  };
  std::vector<Control> controls;
  if (config.include_controls) {
    auto scalar_block = [&](const typename F::value_type& c) { return blocks::scalar(field, config.n, c); };
    controls.push_back({"identity", [&] {
                          TrialOutcome o;
                          certify(o, Nuca<F>::identity(alg));
                          return o;
                        }});
    controls.push_back({"unipotent", [&] {
                          // (1, beta(e) = g1): inverse (1, beta(e) = -g1).
                          TrialOutcome o;
                          auto b = GroupRingElement<F>::monomial(alg, g1, scalar_block(field.one()));
                          certify(o, Nuca<F>(TwistedElement<F>(GroupRingElement<F>::one(alg), {{e, b}})));
                          return o;
                        }});
    controls.push_back({"decoy", [&] {
                          // e + g1: not injective on G, no finitely supported kernel.
                          TrialOutcome o;
                          auto a = GroupRingElement<F>::from_terms(
                              alg, {{e, scalar_block(field.one())}, {g1, scalar_block(field.one())}});
                          auto v = stable_injectivity_verdict(Nuca<F>(embed(a)), config.budget);
                          if (v.kind == VerdictKind::BoundedEvidence) {
                            o.status = TrialStatus::BoundedEvidence;
                            o.note = "no certificate and no finite witness within budget, as expected";
                          } else {
                            o.status = TrialStatus::Fail;
                            o.note = std::string("negative control produced ") + to_string(v.kind);
                            o.payload["verdict"] = io::verdict_to_json(v);
                          }
                          return o;
                        }});
  }

  const int total = static_cast<int>(controls.size()) + config.trials;
  SuiteReport report{"surjunctivity_pipeline", config, detail::kStatement, {}, 0, 0, 0, 0, 0};
  report.trials = detail::run_indexed(total, detail::thread_count(config), [&](int i) {
    if (i < static_cast<int>(controls.size())) {
      auto o = controls[static_cast<std::size_t>(i)].run();
      o.index = i;
      o.label = controls[static_cast<std::size_t>(i)].label;
      o.seed = 0;
      return o;
    }
    TrialOutcome o;
    o.index = i;
    o.label = "random";
    o.seed = mix_seed(config.seed, static_cast<std::uint64_t>(i - static_cast<int>(controls.size())));
    Rng rng(o.seed);
    auto draw = gen_unit(rng, scalar, config.n, config.support_radius, config.max_word);
    o.word = draw.word;
    // The known inverse is discarded; only the NUCA goes into the search.
    certify(o, Nuca<F>(f_unshuffle(draw.u)));
    return o;
  });
  detail::tally(report);
  report.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

// ---- report JSON --------------------------------------------------------------

inline io::Json suite_config_to_json(const SuiteConfig& c) {
  io::Json j;
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["group"] = c.group.to_string();
  j["field"] = c.field.to_string();
  j["n"] = c.n;
  j["support_radius"] = c.support_radius;
  j["max_word"] = c.max_word;
  j["budget"] = io::budget_to_json(c.budget);
  j["rediscover"] = c.rediscover;
  j["include_controls"] = c.include_controls;
  return j;
}

inline io::Json suite_report_to_json(const SuiteReport& r, bool timing = true) {
  io::Json j;
  j["suite"] = r.suite;
  j["statement"] = r.statement;
  j["config"] = suite_config_to_json(r.config);
  io::Json totals;
  totals["trials"] = r.trials.size();
  totals["passed"] = r.passed;
  totals["failed"] = r.failed;
  totals["inconclusive"] = r.inconclusive;
  totals["bounded_evidence"] = r.bounded_evidence;
  j["totals"] = std::move(totals);
  io::Json trials = io::Json::array();
  for (const auto& t : r.trials) {
    io::Json o;
    o["index"] = t.index;
    o["label"] = t.label;
    o["seed"] = t.seed;
    o["word"] = t.word;
    o["status"] = to_string(t.status);
    if (t.radius >= 0) o["radius"] = t.radius;
    if (!t.note.empty()) o["note"] = t.note;
    if (!t.payload.is_null()) o["counterexample"] = t.payload;
    trials.push_back(std::move(o));
  }
  j["trials"] = std::move(trials);
  if (timing) j["wall_clock_seconds"] = r.wall_clock_seconds;
  return j;
}

/// Runtime field dispatch.
inline SuiteReport run_direct_finiteness(const SuiteConfig& config) {
  return with_field(config.field, [&](const auto& f) { return run_direct_finiteness(config, f); });
}

inline SuiteReport run_surjunctivity_pipeline(const SuiteConfig& config) {
  return with_field(config.field, [&](const auto& f) { return run_surjunctivity_pipeline(config, f); });
}

}  // namespace d1
