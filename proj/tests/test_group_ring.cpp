#include <gtest/gtest.h>

#include "d1/group_ring.hpp"
#include "d1/random.hpp"

using namespace d1;

namespace {

using R2 = GroupRingElement<PrimeField>;

const GroupSpec Z1 = GroupSpec::zd(1);

GroupElement z(int v) { return GroupElement::zd({v}); }

R2 poly(const PrimeField& f, std::vector<std::pair<int, long>> terms, std::size_t n = 1) {
  Algebra<PrimeField> alg{f, Z1, n};
  std::vector<R2::Term> t;
  for (auto [g, c] : terms) t.emplace_back(z(g), blocks::scalar(f, n, f.from_int(c)));
  return R2::from_terms(alg, t);
}

}  // namespace

TEST(GroupRing, ConvolveExamples) {
  PrimeField f2(2);
  auto a = poly(f2, {{0, 1}, {1, 1}});
  // Brute-force double sum: (1 + x)^2 = 1 + 2x + x^2, and 2x vanishes mod 2.
  std::map<int, long> brute;
  for (auto [s, x] : std::vector<std::pair<int, long>>{{0, 1}, {1, 1}})
    for (auto [t, y] : std::vector<std::pair<int, long>>{{0, 1}, {1, 1}}) brute[s + t] += x * y;
  std::vector<std::pair<int, long>> expected;
  for (auto [g, c] : brute) expected.emplace_back(g, c);
  EXPECT_EQ(convolve(a, a), poly(f2, expected));
  EXPECT_EQ(convolve(a, a), poly(f2, {{0, 1}, {2, 1}}));

  EXPECT_EQ(a * R2::one(a.algebra()), a);
  EXPECT_EQ(R2::one(a.algebra()) * a, a);

  RationalField q;
  Algebra<RationalField> qalg{q, GroupSpec::zd(2), 1};
  using RQ = GroupRingElement<RationalField>;
  auto x = RQ::scalar_monomial(qalg, GroupElement::zd({1, 0}), q.one());
  auto y = RQ::scalar_monomial(qalg, GroupElement::zd({0, 1}), q.one());
  EXPECT_EQ(x * y, RQ::scalar_monomial(qalg, GroupElement::zd({1, 1}), q.one()));
}

TEST(GroupRing, AddScaleExamples) {
  PrimeField f2(2), f5(5);
  auto a = poly(f5, {{1, 1}, {2, 3}});
  EXPECT_EQ(a + R2(a.algebra()), a);
  EXPECT_TRUE((poly(f2, {{0, 1}}) + poly(f2, {{0, 1}})).is_zero());
  EXPECT_TRUE((poly(f2, {{0, 1}}) + poly(f2, {{0, 1}})).terms().empty());
  // 2 * (x + 3 x^2) = 2x + 6x^2 = 2x + x^2 over F5.
  EXPECT_EQ(a.scale(2), poly(f5, {{1, 2}, {2, 1}}));
  EXPECT_TRUE(a.scale(0).is_zero());
}

TEST(GroupRing, CanonicalForm) {
  PrimeField f3(3);
  auto a = poly(f3, {{2, 1}, {0, 2}, {2, 2}, {1, 0}});
  // 1 + 2 at site 2 cancels; zero coefficient dropped; sorted.
  ASSERT_EQ(a.terms().size(), 1u);
  EXPECT_EQ(a.terms()[0].first, z(0));
}

TEST(GroupRing, ShapeMismatchIsAnError) {
  PrimeField f2(2);
  auto a = poly(f2, {{0, 1}}, 1);
  auto b = poly(f2, {{0, 1}}, 2);
  EXPECT_THROW(a * b, UsageError);
  EXPECT_THROW(a + b, UsageError);
  auto c = poly(PrimeField(3), {{0, 1}});
  EXPECT_THROW(a * c, UsageError);
  Algebra<PrimeField> alg{f2, Z1, 2};
  EXPECT_THROW(R2::monomial(alg, z(0), Block<PrimeField>{1}), UsageError);
  EXPECT_THROW(R2::monomial(alg, GroupElement::zd({0, 0}), blocks::zero(f2, 2)), UsageError);
}

TEST(GroupRing, MatrixShuffleExample) {
  PrimeField f2(2);
  Algebra<PrimeField> alg{f2, Z1, 2};
  auto a = R2::from_terms(alg, {{z(0), {1, 0, 0, 0}}, {z(1), {0, 1, 0, 0}}});
  auto m = matrix_shuffle(a);
  EXPECT_EQ(m[0][0], poly(f2, {{0, 1}}));
  EXPECT_EQ(m[0][1], poly(f2, {{1, 1}}));
  EXPECT_TRUE(m[1][0].is_zero());
  EXPECT_TRUE(m[1][1].is_zero());
  EXPECT_EQ(matrix_unshuffle(m), a);

  auto s = poly(f2, {{0, 1}, {3, 1}});
  auto m1 = matrix_shuffle(s);
  ASSERT_EQ(m1.size(), 1u);
  EXPECT_EQ(m1[0][0], s);
}

template <class F>
void ring_laws(const F& field, GroupSpec group, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  RandomSource<F> src(Algebra<F>{field, group, n}, rng, 2);
  using R = GroupRingElement<F>;
  for (int trial = 0; trial < 200; ++trial) {
    auto a = src.ring(4), b = src.ring(4), c = src.ring(4);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a + b) * c, a * c + b * c);
    EXPECT_EQ(a - a, R(a.algebra()));
    EXPECT_TRUE((a * b).support().is_subset_of(product_set(a.support(), b.support())));
    EXPECT_EQ(matrix_unshuffle(matrix_shuffle(a)), a);
    // Shuffling is a ring homomorphism: compare entry (i,j) with sum_r a_ir b_rj.
    auto sa = matrix_shuffle(a), sb = matrix_shuffle(b), sab = matrix_shuffle(a * b);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        R acc(a.algebra().with_n(1));
        for (std::size_t r = 0; r < n; ++r) acc += sa[i][r] * sb[r][j];
        EXPECT_EQ(sab[i][j], acc);
      }
  }
}

TEST(GroupRing, LawsZF2) { ring_laws(PrimeField(2), GroupSpec::zd(1), 1, 1); }
TEST(GroupRing, LawsZ2F5) { ring_laws(PrimeField(5), GroupSpec::zd(2), 1, 2); }
TEST(GroupRing, LawsFreeQ) { ring_laws(RationalField{}, GroupSpec::free(2), 1, 3); }
TEST(GroupRing, LawsMatrixZF3) { ring_laws(PrimeField(3), GroupSpec::zd(1), 2, 4); }
TEST(GroupRing, LawsMatrixFreeF2) { ring_laws(PrimeField(2), GroupSpec::free(2), 2, 5); }
