#include <gtest/gtest.h>

#include <random>

#include "d1/groups.hpp"

using namespace d1;

namespace {

GroupElement w(const char* letters) { return GroupElement::free_word(std::string(letters)); }

}  // namespace

TEST(Groups, ComposeZd) {
  EXPECT_EQ(compose(GroupElement::zd({1, 2}), GroupElement::zd({3, -1})), GroupElement::zd({4, 1}));
  auto g = GroupElement::zd({5, -7});
  EXPECT_EQ(compose(g, GroupElement::identity(GroupSpec::zd(2))), g);
}

TEST(Groups, ComposeFreeCancels) {
  EXPECT_EQ(compose(w("ab"), w("B a")), w("aa"));
  EXPECT_EQ(compose(w("aB"), GroupElement::identity(GroupSpec::free(2))), w("aB"));
  EXPECT_EQ(compose(w("abA"), w("aB")), w("a"));
  EXPECT_TRUE(compose(w("abA"), w("aBA")).is_identity());
}

TEST(Groups, FreeParsingReduces) {
  EXPECT_EQ(w("aAb"), w("b"));
  EXPECT_TRUE(w("abBA").is_identity());
  EXPECT_THROW(w("a1"), UsageError);
}

TEST(Groups, Inverse) {
  EXPECT_EQ(inverse(GroupElement::zd({3})), GroupElement::zd({-3}));
  EXPECT_EQ(inverse(w("aB")), w("bA"));
  EXPECT_TRUE(inverse(GroupElement::identity(GroupSpec::free(2))).is_identity());
  EXPECT_TRUE(inverse(GroupElement::identity(GroupSpec::zd(3))).is_identity());
}

TEST(Groups, MismatchedGroupsRejected) {
  EXPECT_THROW(compose(GroupElement::zd({1}), GroupElement::zd({1, 2})), UsageError);
  EXPECT_THROW(compose(GroupElement::zd({1}), w("a")), UsageError);
  EXPECT_THROW((void)canonical_cmp(GroupElement::zd({1}), w("a")), UsageError);
}

TEST(Groups, ProductSet) {
  auto z = [](int v) { return GroupElement::zd({v}); };
  EXPECT_EQ(product_set(FiniteSubset{z(0), z(1)}, FiniteSubset{z(0), z(1)}), (FiniteSubset{z(0), z(1), z(2)}));
  FiniteSubset e{z(-1), z(4)};
  EXPECT_EQ(product_set(e, FiniteSubset{z(0)}), e);
  // {a, b} {a^-1}: enumerate the two pairs and reduce.
  auto ps = product_set(FiniteSubset{w("a"), w("b")}, FiniteSubset{w("A")});
  ASSERT_EQ(ps.size(), 2u);
  EXPECT_TRUE(ps[0].is_identity());
  EXPECT_EQ(ps[1], w("bA"));
}

TEST(Groups, CanonicalOrder) {
  EXPECT_LT(GroupElement::zd({0, 1}), GroupElement::zd({1, 0}));
  EXPECT_LT(w("a"), w("ab"));
  EXPECT_LT(w("a"), w("A"));
  EXPECT_LT(w("A"), w("b"));
  EXPECT_LT(w("b"), w("B"));
  EXPECT_EQ(canonical_cmp(w("ab"), w("ab")), std::strong_ordering::equal);
}

TEST(Groups, BallSizes) {
  EXPECT_EQ(ball(GroupSpec::zd(1), 3).size(), 7u);
  EXPECT_EQ(ball(GroupSpec::zd(2), 2).size(), 13u);
  EXPECT_EQ(ball(GroupSpec::free(2), 2).size(), 17u);  // 1 + 4 + 12
  EXPECT_EQ(box(GroupSpec::zd(2), 1).size(), 9u);
  EXPECT_THROW(box(GroupSpec::free(2), 1), UsageError);
  for (const auto& g : ball(GroupSpec::free(2), 3)) EXPECT_LE(g.length(), 3);
}

TEST(Groups, SpecParsing) {
  EXPECT_EQ(GroupSpec::parse("Zd:2"), GroupSpec::zd(2));
  EXPECT_EQ(GroupSpec::parse("free:2"), GroupSpec::free(2));
  EXPECT_EQ(GroupSpec::parse("free:2").to_string(), "free:2");
  EXPECT_THROW(GroupSpec::parse("free:27"), UsageError);
  EXPECT_THROW(GroupSpec::parse("Zd:0"), UsageError);
  EXPECT_THROW(GroupSpec::parse("SL:2"), UsageError);
}

class GroupLaws : public ::testing::TestWithParam<GroupSpec> {};

TEST_P(GroupLaws, AssociativityOrderAndSets) {
  const GroupSpec spec = GetParam();
  auto pool = ball(spec, 3);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int trial = 0; trial < 300; ++trial) {
    const auto& g = pool[pick(rng)];
    const auto& h = pool[pick(rng)];
    const auto& t = pool[pick(rng)];
    EXPECT_EQ(compose(compose(g, h), t), compose(g, compose(h, t)));
    EXPECT_TRUE(compose(g, inverse(g)).is_identity());
    EXPECT_TRUE(compose(inverse(g), g).is_identity());
    // Re-reducing a reduced word changes nothing.
    if (spec.kind == GroupKind::Free) {
      std::vector<std::int32_t> codes(g.data().begin(), g.data().end());
      EXPECT_EQ(GroupElement::free_word(codes), g);
    }
    // Strict total order: trichotomy and transitivity.
    int relations = (g < h) + (h < g) + (g == h);
    EXPECT_EQ(relations, 1);
    if (g < h && h < t) {
      EXPECT_LT(g, t);
    }
  }
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<GroupElement> a, b, c;
    for (int i = 0; i < 3; ++i) {
      a.push_back(pool[pick(rng)]);
      b.push_back(pool[pick(rng)]);
      c.push_back(pool[pick(rng)]);
    }
    FiniteSubset sa(a), sb(b), sc(c);
    EXPECT_EQ(product_set(product_set(sa, sb), sc), product_set(sa, product_set(sb, sc)));
    EXPECT_LE(product_set(sa, sb).size(), sa.size() * sb.size());
  }
}

INSTANTIATE_TEST_SUITE_P(AllGroups, GroupLaws,
                         ::testing::Values(GroupSpec::zd(1), GroupSpec::zd(2), GroupSpec::zd(3), GroupSpec::free(2),
                                           GroupSpec::free(3)));
