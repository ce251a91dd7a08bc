#include <gtest/gtest.h>

#include <random>

#include "nilprod/claims.hpp"
#include "nilprod/haagerup.hpp"

using namespace nilprod;

namespace {

FamElement random_base(const FamilyGroup& f, std::mt19937_64& rng, IndexKey window = 9, std::size_t factors = 6) {
  std::vector<IndexKey> keys;
  for (IndexKey k = 0; k < window; ++k) keys.push_back(k);
  return detail::random_family_element(f, keys, rng, factors);
}

/// Double sum over keys below `window` with weights computed from the
/// integer difference directly; the spiral rank of d is 2d - 1 or -2d.
Rational truncated_u_over_integers(const HaagerupFunction& u, const FamElement& x, IndexKey window) {
  const GroupHandle& z = u.G();
  Rational acc = 0;
  for (IndexKey h = 0; h < window; ++h)
    for (IndexKey k = 0; k < window; ++k) {
      if (h == k) continue;
      std::int64_t d = z.unrank(k).payload[0] - z.unrank(h).payload[0];
      unsigned psi = static_cast<unsigned>(d > 0 ? 2 * d - 1 : -2 * d);
      acc += Rational(1, BigInt(1) << psi) * u.v_pair(h, k, x);
    }
  return acc;
}

}  // namespace

TEST(TailTotal, MatchesDirectSum) {
  EXPECT_EQ(tail_total(integers()).to_rational(), Rational(1));
  for (const auto& g : {cyclic(2), cyclic(3), dihedral(3), symmetric(3)}) {
    Rational direct = 0;
    for (std::uint64_t r = 1; r < detail::finite_size(g.order(), g.name()); ++r) direct += Rational(1, BigInt(1) << r);
    EXPECT_EQ(tail_total(g).to_rational(), direct) << g.name();
  }
  EXPECT_EQ(tail_total(cyclic(3)).to_rational(), Rational(3, 4));
}

TEST(VPair, Examples) {
  auto w = make_wreath(cyclic(2), cyclic(3));
  HaagerupFunction u(w->base_ptr());
  auto x = w->base().parse("{0: 1}");
  EXPECT_EQ(u.v_pair(0, 1, x), 1);
  EXPECT_EQ(u.v_pair(1, 0, x), 1);
  EXPECT_EQ(u.v_pair(1, 2, x), 0);
  EXPECT_THROW(u.v_pair(1, 1, x), std::invalid_argument);
}

TEST(U, HandComputedValues) {
  {
    auto w = make_wreath(cyclic(2), cyclic(2));
    HaagerupFunction u(w->base_ptr());
    // pairs (0,1) and (1,0), each weight 1/2
    EXPECT_EQ(u.u(w->base().parse("{0: 1}")), 1);
  }
  {
    auto w = make_wreath(cyclic(2), integers());
    HaagerupFunction u(w->base_ptr());
    // one letter: both orientations see the full tail total 1
    EXPECT_EQ(u.u(w->base().parse("{0: 1}")), 2);
    // pure tensor on {0, 1}: weights 2^-psi(1) and 2^-psi(-1)
    EXPECT_EQ(u.u(w->base().parse("{| (0,1): (1)}")), Rational(3, 4));
    EXPECT_EQ(u.u(w->base().identity()), 0);
  }
  {
    auto w = make_wreath(cyclic(2), cyclic(3));
    HaagerupFunction u(w->base_ptr());
    EXPECT_EQ(u.u(w->base().parse("{0: 1, 1: 1}")), Rational(9, 4));
  }
}

TEST(U, SplitFormulaEqualsDirectSumOnFiniteIndex) {
  std::mt19937_64 rng(41);
  for (const auto& [h, g] : std::vector<std::pair<GroupHandle, GroupHandle>>{
           {cyclic(2), cyclic(5)}, {cyclic(3), dihedral(3)}, {symmetric(3), cyclic(4)}}) {
    auto w = make_wreath(h, g);
    HaagerupFunction u(w->base_ptr());
    const auto n = static_cast<IndexKey>(detail::finite_size(g.order(), g.name()));
    for (int s = 0; s < 300; ++s) {
      auto x = random_base(w->base(), rng, n);
      ASSERT_EQ(u.u(x), u.u_direct(x)) << w->base().format(x);
    }
  }
}

TEST(U, SplitFormulaMatchesTruncatedSumOverIntegers) {
  auto w = make_wreath(cyclic(3), integers());
  HaagerupFunction u(w->base_ptr());
  std::mt19937_64 rng(43);
  // support within |n| <= 6, window |n| <= 40: the omitted weights are below 2^-60
  const Rational slack(1, BigInt(1) << 60);
  for (int s = 0; s < 60; ++s) {
    auto x = random_base(w->base(), rng, 13);
    Rational exact = u.u(x), trunc = truncated_u_over_integers(u, x, 81);
    EXPECT_LE(trunc, exact);
    EXPECT_LE(exact - trunc, slack) << w->base().format(x);
  }
}

TEST(U, InverseAndShiftInvariance) {
  std::mt19937_64 rng(47);
  auto w = make_wreath(cyclic(4), integers());
  HaagerupFunction u(w->base_ptr());
  for (int s = 0; s < 300; ++s) {
    auto x = random_base(w->base(), rng);
    EXPECT_EQ(u.u(w->base().inv(x)), u.u(x));
    GroupElement g{{std::uniform_int_distribution<std::int64_t>(-9, 9)(rng)}};
    EXPECT_EQ(u.u(shift(w->base(), g, x)), u.u(x));
    EXPECT_GE(u.u(x), 0);
  }
}

TEST(Gram, SmallExamples) {
  auto w = make_wreath(cyclic(2), integers());
  HaagerupFunction u(w->base_ptr());
  const auto& f = w->base();
  auto x = f.parse("{0: 1, 2: 1}");
  EXPECT_EQ(cnd_gram_check(u, {x}, {Rational(0)}), 0);
  EXPECT_EQ(cnd_gram_check(u, {f.identity(), x}, {Rational(1), Rational(-1)}), -2 * u.u(x));
  EXPECT_THROW(cnd_gram_check(u, {x}, {Rational(1)}), std::invalid_argument);
  EXPECT_THROW(cnd_gram_check(u, {x, x}, {Rational(1)}), std::invalid_argument);
}

TEST(Gram, ConditionallyNegativeOnRandomConfigurations) {
  std::mt19937_64 rng(53);
  std::uniform_int_distribution<int> coeff(-5, 5), count(2, 5);
  for (const auto& g : {integers(), cyclic(5)}) {
    auto w = make_wreath(cyclic(2), g);
    HaagerupFunction u(w->base_ptr());
    for (int s = 0; s < 100; ++s) {
      const int n = count(rng);
      std::vector<FamElement> pts;
      std::vector<Rational> cs;
      Rational sum = 0;
      for (int i = 0; i < n; ++i) {
        pts.push_back(random_base(w->base(), rng, 5, 4));
        cs.push_back(i + 1 < n ? Rational(coeff(rng)) : -sum);
        sum += cs.back();
      }
      EXPECT_LE(cnd_gram_check(u, pts, cs), 0) << g.name();
    }
  }
}

TEST(Properness, WindowCountsAndContainment) {
  auto w = make_wreath(cyclic(2), integers());
  HaagerupFunction u(w->base_ptr());
  for (const auto& F : std::vector<std::set<IndexKey>>{{0}, {0, 1}, {0, 1, 2}, {1, 3}}) {
    for (const Rational& M : {Rational(1, 4), Rational(1), Rational(2), Rational(4)}) {
      auto rep = properness_check(u, F, M);
      EXPECT_EQ(BigInt(rep.window_size), rep.expected_window_size);
      EXPECT_TRUE(rep.contained);
      EXPECT_LE(rep.sublevel.size(), rep.box_size);
      for (const auto& x : rep.sublevel) EXPECT_LE(u.u(x), M);
    }
  }
}

TEST(Properness, EdgeCases) {
  auto w = make_wreath(cyclic(2), integers());
  HaagerupFunction u(w->base_ptr());
  auto neg = properness_check(u, {0, 1}, Rational(-1));
  EXPECT_TRUE(neg.sublevel.empty());
  // one index: the window is H itself and only the identity has u <= 1
  auto single = properness_check(u, {0}, Rational(1));
  EXPECT_EQ(single.window_size, 2u);
  EXPECT_EQ(single.N, 0u);
  ASSERT_EQ(single.sublevel.size(), 1u);
  EXPECT_TRUE(single.sublevel[0].is_identity());
  EXPECT_THROW(properness_check(u, {}, Rational(1)), std::invalid_argument);
}

TEST(Phi, CustomTableOverridesDefault) {
  auto w = make_wreath(cyclic(2), cyclic(2));
  const Nil2Group& pg = w->base().uniform_pair_group();
  std::map<Nil2Element, Rational> table{{pg.embed_A(GroupElement{{1}}), Rational(3)}};
  HaagerupFunction u(w->base_ptr(), CNDOnPair(table, "custom"));
  EXPECT_EQ(u.phi().label(), "custom");
  // pair (0,1) sees embed_A(1) -> 3, pair (1,0) sees embed_B(1) -> 1
  EXPECT_EQ(u.u(w->base().parse("{0: 1}")), Rational(3, 2) + Rational(1, 2));
  EXPECT_EQ(HaagerupFunction(w->base_ptr()).phi().label(), "delta");
}
