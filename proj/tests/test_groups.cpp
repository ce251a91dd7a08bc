#include <gtest/gtest.h>

#include <set>

#include "nilprod/groups.hpp"
#include "nilprod/oracle.hpp"

using namespace nilprod;

namespace {

std::size_t order_of(const GroupHandle& g) { return static_cast<std::size_t>(detail::to_int64(g.order().value())); }

/// Order by brute-force closure, independent of the group's own order().
std::size_t closure_size(const GroupHandle& g) { return closure(g, g.generators()).size(); }

}  // namespace

TEST(Orders, Examples) {
  EXPECT_EQ(order_of(dihedral(3)), 6u);
  EXPECT_EQ(order_of(heisenberg(5)), 125u);
  EXPECT_EQ(order_of(symmetric(4)), 24u);
  EXPECT_EQ(order_of(alternating(5)), 60u);
  EXPECT_EQ(order_of(permutation(5, {"(1 2 3 4 5)", "(1 2)"})), 120u);
  EXPECT_FALSE(integers().is_finite());
  EXPECT_FALSE(heisenberg(0).is_finite());
}

TEST(Orders, ClosureAgreesWithFormula) {
  const std::vector<GroupHandle> gs{cyclic(1),      cyclic(12),    dihedral(1),     dihedral(2),
                                    dihedral(7),    symmetric(1),  symmetric(5),    alternating(4),
                                    heisenberg(2),  heisenberg(4), abelian_group(FGAbelian({2, 6})),
                                    direct_sum({cyclic(3), dihedral(4)})};
  for (const auto& g : gs) EXPECT_EQ(closure_size(g), order_of(g)) << g.name();
}

TEST(Orders, HeisenbergIsCubeOfModulus) {
  for (std::int64_t n = 2; n <= 7; ++n) EXPECT_EQ(closure_size(heisenberg(n)), static_cast<std::size_t>(n * n * n));
}

TEST(Derived, Examples) {
  EXPECT_EQ(order_of(derived_subgroup(dihedral(6))), 3u);
  EXPECT_EQ(order_of(derived_subgroup(dihedral(4))), 2u);
  EXPECT_EQ(order_of(derived_subgroup(symmetric(3))), 3u);
  auto v4 = derived_subgroup(alternating(4));
  EXPECT_EQ(order_of(v4), 4u);
  EXPECT_EQ(abelian_invariants(EnumeratedGroup(v4)).str(), "Z/2+Z/2");
  EXPECT_EQ(order_of(derived_subgroup(alternating(5))), 60u);
  EXPECT_TRUE(derived_subgroup(cyclic(9)).order() == Cardinal(1));
}

TEST(Derived, IsGeneratedByAllCommutators) {
  for (const auto& g : {dihedral(5), symmetric(4), heisenberg(3), alternating(4)}) {
    auto el = g.elements();
    std::vector<GroupElement> comms;
    for (const auto& x : el)
      for (const auto& y : el) comms.push_back(commutator(g, x, y));
    EXPECT_EQ(closure(g, comms).size(), derived_subgroup_elements(g).size()) << g.name();
  }
}

TEST(LowerCentralSeries, Examples) {
  EXPECT_EQ(nilpotency_class(dihedral(4)), 2u);
  EXPECT_EQ(nilpotency_class(dihedral(8)), 3u);
  EXPECT_EQ(nilpotency_class(heisenberg(3)), 2u);
  EXPECT_EQ(nilpotency_class(cyclic(5)), 1u);
  EXPECT_EQ(nilpotency_class(cyclic(1)), 0u);
  EXPECT_FALSE(nilpotency_class(symmetric(3)).has_value());
  auto lcs = lower_central_series(symmetric(3));
  ASSERT_EQ(lcs.size(), 2u);
  EXPECT_EQ(order_of(lcs[0]), 6u);
  EXPECT_EQ(order_of(lcs[1]), 3u);
}

TEST(LowerCentralSeries, TermsAreDecreasingAndNormal) {
  for (const auto& g : {dihedral(8), heisenberg(4), symmetric(4)}) {
    auto terms = lower_central_series_elements(g);
    for (std::size_t k = 1; k < terms.size(); ++k) {
      std::set<GroupElement> prev(terms[k - 1].begin(), terms[k - 1].end());
      EXPECT_LT(terms[k].size(), terms[k - 1].size());
      for (const auto& x : terms[k]) EXPECT_TRUE(prev.count(x));
      std::set<GroupElement> cur(terms[k].begin(), terms[k].end());
      for (const auto& x : terms[k])
        for (const auto& s : g.generators()) EXPECT_TRUE(cur.count(g.mul(g.mul(s, x), g.inv(s))));
    }
  }
}

TEST(Subgroups, GeneratedExamples) {
  auto s4 = symmetric(4);
  auto sub = subgroup_generated(s4, {s4.parse("(1 2)"), s4.parse("(3 4)")});
  EXPECT_EQ(order_of(sub), 4u);
  auto d = subgroup_generated(s4, {s4.parse("(1 2 3 4)"), s4.parse("(1 3)")});
  EXPECT_EQ(order_of(d), 8u);
  EXPECT_EQ(order_of(subgroup_generated(s4, {})), 1u);
}

TEST(Axioms, HoldForBuiltinGroups) {
  for (const auto& g : {cyclic(7), dihedral(6), symmetric(4), alternating(5), heisenberg(3),
                        abelian_group(FGAbelian({2, 4})), direct_sum({dihedral(3), cyclic(2)})}) {
    EnumeratedGroup e(g);
    auto r = check_axioms(e);
    EXPECT_TRUE(r.ok) << g.name() << ": " << r.failure;
    EXPECT_TRUE(r.exhaustive);
  }
}

TEST(Abelianization, MapIsHomWithDerivedKernel) {
  for (const auto& g : {dihedral(4), dihedral(5), symmetric(4), alternating(4), heisenberg(3),
                        direct_sum({dihedral(6), cyclic(4)})}) {
    const FGAbelian& ab = g.abelianization();
    auto el = g.elements();
    for (const auto& x : el)
      for (const auto& y : el) EXPECT_EQ(g.abelianize(g.mul(x, y)), ab.add(g.abelianize(x), g.abelianize(y)));
    std::set<GroupElement> kernel, derived;
    for (const auto& x : el)
      if (g.abelianize(x).is_zero()) kernel.insert(x);
    for (const auto& x : derived_subgroup_elements(g)) derived.insert(x);
    EXPECT_EQ(kernel, derived) << g.name();
    // onto: |G| / |G'| = |Ab G|
    EXPECT_EQ(Cardinal(static_cast<std::int64_t>(el.size() / derived.size())), ab.order()) << g.name();
  }
}

TEST(Abelianization, KnownInvariants) {
  EXPECT_EQ(dihedral(6).abelianization().str(), "Z/2+Z/2");
  EXPECT_EQ(dihedral(5).abelianization().str(), "Z/2");
  EXPECT_EQ(symmetric(5).abelianization().str(), "Z/2");
  EXPECT_EQ(alternating(4).abelianization().str(), "Z/3");
  EXPECT_TRUE(alternating(5).abelianization().is_trivial());
  EXPECT_EQ(heisenberg(4).abelianization().str(), "Z/4+Z/4");
  EXPECT_EQ(heisenberg(0).abelianization().str(), "Z+Z");
}

TEST(Heisenberg, CenterIsThirdCoordinate) {
  auto h = heisenberg(3);
  auto el = h.elements();
  std::size_t central = 0;
  for (const auto& z : el) {
    bool is_central = true;
    for (const auto& x : el)
      if (!(h.mul(z, x) == h.mul(x, z))) is_central = false;
    if (is_central) {
      ++central;
      EXPECT_EQ(z.payload[0], 0);
      EXPECT_EQ(z.payload[1], 0);
    }
  }
  EXPECT_EQ(central, 3u);
}

TEST(Heisenberg, MultiplicationRule) {
  auto h = heisenberg(5);
  EXPECT_EQ(h.format(h.mul(h.parse("(1,0,0)"), h.parse("(0,1,0)"))), "(1,1,1)");
  EXPECT_EQ(h.format(h.mul(h.parse("(0,1,0)"), h.parse("(1,0,0)"))), "(1,1,0)");
  EXPECT_EQ(h.format(commutator(h, h.parse("(1,0,0)"), h.parse("(0,1,0)"))), "(0,0,1)");
}

TEST(Integers, SpiralEnumeration) {
  auto z = integers();
  std::vector<std::int64_t> expect{0, 1, -1, 2, -2, 3, -3};
  for (std::size_t r = 0; r < expect.size(); ++r) {
    EXPECT_EQ(z.unrank(r).payload[0], expect[r]);
    EXPECT_EQ(z.rank(z.unrank(r)), r);
  }
}

TEST(Enumeration, RankIsBijectionOntoInitialSegment) {
  for (const auto& g : {cyclic(6), dihedral(5), symmetric(4), heisenberg(3), direct_sum({cyclic(2), dihedral(3)})}) {
    const std::size_t n = order_of(g);
    EXPECT_TRUE(g.unrank(0) == g.identity()) << g.name();
    for (std::size_t r = 0; r < n; ++r) EXPECT_EQ(g.rank(g.unrank(r)), r) << g.name();
    EXPECT_THROW(g.unrank(n), std::out_of_range);
  }
}

TEST(Literals, RoundTripEveryElement) {
  for (const auto& g : {cyclic(6), dihedral(5), symmetric(4), heisenberg(3), abelian_group(FGAbelian({2, 4})),
                        direct_sum({cyclic(2), dihedral(3), symmetric(3)}), integers()}) {
    std::vector<GroupElement> el;
    if (g.is_finite()) {
      el = g.elements();
    } else {
      for (std::uint64_t r = 0; r < 50; ++r) el.push_back(g.unrank(r));
    }
    for (const auto& x : el) EXPECT_EQ(g.parse(g.format(x)), x) << g.name() << " " << g.format(x);
  }
}

TEST(Literals, Examples) {
  auto d = dihedral(4);
  EXPECT_EQ(d.format(d.parse("r*r*s")), "r^2*s");
  EXPECT_EQ(d.format(d.parse("s*r")), "r^3*s");
  EXPECT_EQ(d.format(d.parse("r^-1")), "r^3");
  EXPECT_EQ(cyclic(5).format(cyclic(5).parse("-1")), "4");
  EXPECT_THROW(d.parse("t"), LiteralError);
  EXPECT_THROW(symmetric(3).parse("(1 4)"), LiteralError);
  EXPECT_THROW(alternating(3).parse("(1 2)"), LiteralError);
  auto zz = abelian_group(FGAbelian({2, 0}));
  EXPECT_EQ(zz.format(zz.parse("(3, -7)")), "(1,-7)");
}

TEST(Permutations, ComposeLeftToRight) {
  auto s3 = symmetric(3);
  EXPECT_EQ(s3.format(s3.mul(s3.parse("(1 2)"), s3.parse("(1 3)"))), "(1 2 3)");
  EXPECT_EQ(s3.format(commutator(s3, s3.parse("(1 2)"), s3.parse("(1 3)"))), "(1 3 2)");
}

TEST(Homomorphisms, ExtendGeneratorImages) {
  // Z/6 -> Z/3, 1 -> 1 is a hom; 1 -> 1 into Z/4 is not
  EXPECT_TRUE(extend_generator_images(cyclic(6), cyclic(3), {{{1}}}).has_value());
  EXPECT_FALSE(extend_generator_images(cyclic(6), cyclic(4), {{{1}}}).has_value());
  // sign map S4 -> Z/2 via the two standard generators
  auto s4 = symmetric(4);
  auto gens = s4.generators();
  std::vector<GroupElement> sign;
  for (const auto& g : gens) {
    std::size_t cycles = 0;
    std::vector<bool> seen(4, false);
    for (std::size_t p = 0; p < 4; ++p) {
      if (seen[p]) continue;
      ++cycles;
      for (std::size_t q = p; !seen[q]; q = static_cast<std::size_t>(g.payload[q])) seen[q] = true;
    }
    sign.push_back({{static_cast<std::int64_t>((4 - cycles) % 2)}});
  }
  auto h = extend_generator_images(s4, cyclic(2), sign);
  ASSERT_TRUE(h.has_value());
  EXPECT_EQ(h->table.size(), 24u);
  EXPECT_EQ((*h)(s4.parse("(1 2 3)")), (GroupElement{{0}}));
  EXPECT_EQ((*h)(s4.parse("(1 2 3 4)")), (GroupElement{{1}}));
}

TEST(DirectSum, JoinSplitAndComponentwiseProduct) {
  auto parts = std::vector<GroupHandle>{cyclic(4), dihedral(3)};
  auto ds = std::make_shared<DirectSumGroup>(parts);
  GroupHandle g(ds);
  auto x = ds->join({GroupElement{{3}}, dihedral(3).parse("r")});
  auto y = ds->join({GroupElement{{2}}, dihedral(3).parse("s")});
  EXPECT_EQ(g.format(g.mul(x, y)), "<1, r*s>");
  EXPECT_EQ(ds->split(g.mul(x, y))[1], dihedral(3).parse("r*s"));
  EXPECT_EQ(canonical_form(g.abelianization()).str(), "Z/2+Z/4");
}
