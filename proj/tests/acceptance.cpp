// Acceptance suite: one PASS/FAIL line per criterion, with time limits.
// Exit status is 0 iff every criterion passes.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "d1/experiments.hpp"
#include "d1/random.hpp"
#include "golden_runner.hpp"
#include "oracle.hpp"

using namespace d1;

namespace {

using P = PrimeField;

struct Verdict {
  bool ok = true;
  std::string detail;
  long cases = 0;

  void check(bool cond, const std::string& what) {
    ++cases;
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

const std::vector<GroupSpec> kGroups = {GroupSpec::zd(1), GroupSpec::zd(2), GroupSpec::free(2)};

std::string label(const GroupSpec& g, const FieldSpec& f, std::size_t n) {
  return g.to_string() + " " + f.to_string() + " n=" + std::to_string(n);
}

// Runs fn(algebra, rng, tag) for every group in kGroups and field in `fields`.
template <class Fn>
void for_each_configuration(const std::vector<FieldSpec>& fields, std::size_t n, std::uint64_t seed, Fn&& fn) {
  for (const auto& g : kGroups)
    for (const auto& fs : fields)
      with_field(fs, [&](const auto& f) {
        using F = std::decay_t<decltype(f)>;
        Rng rng(seed++);
        fn(Algebra<F>{f, g, n}, rng, label(g, fs, n));
        return 0;
      });
}

const std::vector<FieldSpec> kSmallFields = {FieldSpec::prime(2), FieldSpec::prime(5), FieldSpec::rationals()};

Verdict ring_axioms() {
  Verdict v;
  for_each_configuration(kSmallFields, 1, 100, [&](const auto& alg, Rng& rng, const std::string& tag) {
    using F = std::decay_t<decltype(alg.field)>;
    RandomSource<F> src(alg, rng, 2);
    auto one = TwistedElement<F>::one(alg);
    for (int k = 0; k < 500 && v.ok; ++k) {
      auto x = src.twisted(5, 3, 4), y = src.twisted(5, 3, 4), w = src.twisted(5, 3, 4);
      v.check((x * y) * w == x * (y * w), tag + ": associativity");
      v.check(x * (y + w) == x * y + x * w, tag + ": left distributivity");
      v.check((x + y) * w == x * w + y * w, tag + ": right distributivity");
      v.check(one * x == x && x * one == x, tag + ": unit");
    }
  });
  return v;
}

Verdict oracle_equivalence() {
  Verdict v;
  for_each_configuration(kSmallFields, 1, 200, [&](const auto& alg, Rng& rng, const std::string& tag) {
    using F = std::decay_t<decltype(alg.field)>;
    RandomSource<F> src(alg, rng, 2);
    for (int k = 0; k < 200 && v.ok; ++k) {
      auto x = src.twisted(5, 3, 4), y = src.twisted(5, 3, 4);
      v.check(x * y == oracle::twisted_product(x, y), tag + ": product differs from oracle");
    }
  });
  return v;
}

Verdict embedding() {
  Verdict v;
  for_each_configuration(kSmallFields, 1, 300, [&](const auto& alg, Rng& rng, const std::string& tag) {
    using F = std::decay_t<decltype(alg.field)>;
    RandomSource<F> src(alg, rng, 2);
    for (int k = 0; k < 200 && v.ok; ++k) {
      auto a = src.ring(3), b = src.ring(3);
      v.check(embed(a * b) == embed(a) * embed(b), tag + ": embed not multiplicative");
      v.check(embed(a + b) == embed(a) + embed(b), tag + ": embed not additive");
      v.check((embed(a) == embed(b)) == (a == b), tag + ": embed not injective");
    }
  });
  return v;
}

Verdict f_isomorphism() {
  Verdict v;
  for_each_configuration(kSmallFields, 2, 400, [&](const auto& alg, Rng& rng, const std::string& tag) {
    using F = std::decay_t<decltype(alg.field)>;
    RandomSource<F> src(alg, rng, 2);
    for (int k = 0; k < 200 && v.ok; ++k) {
      auto x = src.twisted(), y = src.twisted();
      v.check(f_unshuffle(f_shuffle(x)) == x, tag + ": round trip");
      v.check(f_shuffle(x * y) == f_shuffle(x) * f_shuffle(y), tag + ": not multiplicative");
      v.check(f_shuffle(x + y) == f_shuffle(x) + f_shuffle(y), tag + ": not additive");
    }
    v.check(f_shuffle(TwistedElement<F>::one(alg)) == TwistedMatrix<F>::identity(alg, 2), tag + ": unit");
  });
  return v;
}

Verdict transport() {
  Verdict v;
  for (std::size_t n : {1u, 2u})
    for_each_configuration(kSmallFields, n, 500 + 10 * n, [&](const auto& alg, Rng& rng, const std::string& tag) {
      using F = std::decay_t<decltype(alg.field)>;
      RandomSource<F> src(alg, rng, 2);
      for (int k = 0; k < 100 && v.ok; ++k) {
        Nuca<F> t1(src.twisted()), t2(src.twisted());
        auto x = src.configuration();
        v.check(apply(compose(t1, t2), x) == apply(t1, apply(t2, x)), tag + ": composition");
      }
      for (int k = 0; k < 100 && v.ok; ++k) {
        Nuca<F> t(src.nonzero_twisted());
        auto probe = find_nonzero_probe(t);
        v.check(probe && probe->is_finitely_supported() && !apply(t, *probe).is_zero(), tag + ": no probe for nonzero element");
      }
    });
  return v;
}

Verdict induced_local_maps() {
  Verdict v;
  for (std::size_t n : {1u, 2u})
    for_each_configuration(kSmallFields, n, 600 + 10 * n, [&](const auto& alg, Rng& rng, const std::string& tag) {
      using F = std::decay_t<decltype(alg.field)>;
      RandomSource<F> src(alg, rng, 2);
      for (int k = 0; k < 100 && v.ok; ++k) {
        Nuca<F> t(src.twisted());
        auto e = src.subset(4);
        auto f = induced_local_map(t, e);
        auto x = src.configuration();
        auto out = f(Pattern<F>{f.domain, x.restrict_to(f.domain)});
        v.check(out.domain == e && out.values == apply(t, x).restrict_to(e), tag + ": local map disagrees with apply");
      }
    });
  return v;
}

Verdict fixed_case() {
  Verdict v;
  Algebra<P> a{P(3), GroupSpec::zd(1), 1};
  auto mono = [&](int g, std::uint32_t c) { return GroupRingElement<P>::scalar_monomial(a, GroupElement::zd({g}), c); };
  auto site = GroupElement::zd({0});
  Nuca<P> u(TwistedElement<P>(mono(0, 1), {{site, mono(1, 1)}}));
  Nuca<P> expected(TwistedElement<P>(mono(0, 1), {{site, mono(1, 2)}}));
  auto hit = search_left_inverse(u, 3);
  v.check(hit.has_value(), "no left inverse found");
  if (!hit) return v;
  v.check(hit->radius == 1, "radius " + std::to_string(hit->radius) + ", expected 1");
  v.check(hit->inverse == expected, "unexpected inverse");
  v.check(verify_identity(hit->inverse, u), "left product is not one");
  v.check(verify_identity(u, hit->inverse), "right product is not one");
  return v;
}

Verdict direct_finiteness() {
  Verdict v;
  for (const auto& g : kGroups)
    for (auto fs : {FieldSpec::prime(2), FieldSpec::prime(3), FieldSpec::prime(5), FieldSpec::rationals()})
      for (std::size_t n : {1u, 2u}) {
        SuiteConfig c;
        c.seed = 2024;
        c.trials = 100;
        c.group = g;
        c.field = fs;
        c.n = n;
        auto r = run_direct_finiteness(c);
        v.check(r.failed == 0 && r.passed == 100,
                label(g, fs, n) + ": " + std::to_string(r.failed) + " failures, " + std::to_string(r.passed) + " passes");
      }
  return v;
}

Verdict negative_controls() {
  Verdict v;
  Algebra<P> a{P(2), GroupSpec::zd(1), 1};
  auto decoy_ring = GroupRingElement<P>::from_terms(
      a, {{GroupElement::zd({0}), Block<P>{1}}, {GroupElement::zd({1}), Block<P>{1}}});
  Nuca<P> decoy(embed(decoy_ring));
  v.check(!search_left_inverse(decoy, 4), "decoy: unexpected left inverse");
  for (int r = 0; r <= 8; ++r) v.check(!finitely_supported_kernel(decoy, r), "decoy: unexpected finite kernel at radius " + std::to_string(r));
  auto tower = kernel_tower(decoy, 5, 3);
  v.check(tower.levels.size() == 6, "decoy: tower has wrong depth");
  for (const auto& l : tower.levels)
    v.check(l.stabilized && l.dim_thread == 1, "decoy: thread dimension at level " + std::to_string(l.level) + " is " + std::to_string(l.dim_thread));

  // n = 2: alpha = E_12 (strictly upper triangular) at the identity.
  Algebra<P> a2{P(2), GroupSpec::zd(1), 2};
  auto nil = GroupRingElement<P>::from_terms(a2, {{GroupElement::zd({0}), Block<P>{0, 1, 0, 0}}});
  Nuca<P> t(embed(nil));
  auto w = finitely_supported_kernel(t, 0);
  v.check(w.has_value() && !w->is_zero() && apply(t, *w).is_zero(), "nilpotent: no radius-0 kernel witness");
  return v;
}

Verdict cli_goldens() {
  Verdict v;
  auto results = golden::run_all(D1_GOLDEN_DIR);
  v.check(!results.empty(), "no golden cases");
  for (const auto& r : results) v.check(r.ok, r.name + ": " + r.message);
  return v;
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;  // 0 means no limit
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "twisted ring axioms", 60, ring_axioms},
      {2, "oracle equivalence", 30, oracle_equivalence},
      {3, "embedding is a ring monomorphism", 0, embedding},
      {4, "matrix-ring isomorphism (n=2)", 0, f_isomorphism},
      {5, "transport of composition and nonzero probes", 0, transport},
      {6, "induced local map consistency", 0, induced_local_maps},
      {7, "inverse pipeline fixed case", 1, fixed_case},
      {8, "direct finiteness suite", 300, direct_finiteness},
      {9, "negative controls", 10, negative_controls},
      {10, "CLI golden files", 0, cli_goldens},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = c.limit_seconds == 0 || secs < c.limit_seconds;
    if (v.ok && !in_time) v.detail = "exceeded time limit";
    bool pass = v.ok && in_time;
    failures += !pass;
    std::string limit = c.limit_seconds == 0 ? "" : ", limit " + std::to_string(static_cast<int>(c.limit_seconds)) + " s";
    std::printf("[%s] %2d %s (%ld checks, %.2f s%s)%s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, v.cases, secs, limit.c_str(),
                v.detail.empty() ? "" : ": ", v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
