#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "nilprod/claims.hpp"
#include "nilprod/nilfam.hpp"
#include "nilprod/oracle.hpp"

using namespace nilprod;

namespace {

std::vector<FamElement> all_of(const FamilyGroup& f) {
  std::vector<FamElement> out;
  for (std::uint64_t r = 0; r < detail::finite_size(f.order(), f.name()); ++r) out.push_back(f.unrank(r));
  return out;
}

FamElement random_element(const FamilyGroup& f, std::mt19937_64& rng, std::size_t factors = 6) {
  return detail::random_family_element(f, f.keys(), rng, factors);
}

std::set<IndexKey> intersect(const std::set<IndexKey>& a, const std::set<IndexKey>& b) {
  std::set<IndexKey> r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(r, r.end()));
  return r;
}

}  // namespace

TEST(Family, SquareOfGeneratorProductIsCentral) {
  auto f = FamilyGroup::list({cyclic(2), cyclic(2), cyclic(2)});
  GroupElement one{{1}};
  FamElement x = f->mul(f->mul(f->embed(1, one), f->embed(2, one)), f->embed(3, one));
  FamElement sq = f->mul(x, x);
  EXPECT_TRUE(sq.comps.empty());
  ASSERT_EQ(sq.tens.size(), 3u);
  for (const auto& [p, v] : sq.tens) EXPECT_EQ(v.coords, (std::vector<std::int64_t>{1})) << p.first << "," << p.second;
  EXPECT_EQ(f->format(sq), "{| (1,2): (1), (1,3): (1), (2,3): (1)}");
}

TEST(Family, CoprimeMembersGiveDirectProduct) {
  auto f = FamilyGroup::list({cyclic(2), cyclic(3), cyclic(5)});
  EXPECT_EQ(f->order().value(), 30);
  EXPECT_TRUE(f->is_abelian());
}

TEST(Family, OrderMatchesClosure) {
  const std::vector<std::vector<GroupHandle>> cases{
      {cyclic(2), cyclic(2), cyclic(2)}, {cyclic(2), cyclic(4), cyclic(6)}, {symmetric(3), cyclic(2), cyclic(3)}};
  for (const auto& members : cases) {
    auto f = FamilyGroup::list(members);
    BigInt expect = 1;
    for (const auto& m : members) expect *= m.order().value();
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = i + 1; j < members.size(); ++j)
        expect *= tensor(members[i].abelianization(), members[j].abelianization()).order().value();
    EXPECT_EQ(f->order().value(), expect) << f->name();
    EXPECT_EQ(BigInt(closure(*f, f->generators()).size()), expect) << f->name();
  }
}

TEST(Family, GroupAxioms) {
  for (const auto& members : std::vector<std::vector<GroupHandle>>{{cyclic(2), cyclic(2), cyclic(2)},
                                                                   {symmetric(3), cyclic(2), cyclic(2)},
                                                                   {cyclic(2), cyclic(2), cyclic(2), cyclic(2)}}) {
    auto h = nil_family(members);
    EnumeratedGroup e(h);
    auto r = check_axioms(e);
    EXPECT_TRUE(r.ok) << h.name() << ": " << r.failure;
  }
}

TEST(Family, TwoMembersAgreeWithNil2) {
  for (const auto& [a, b] : std::vector<std::pair<GroupHandle, GroupHandle>>{
           {dihedral(4), cyclic(2)}, {symmetric(3), cyclic(4)}, {cyclic(4), cyclic(6)}}) {
    auto f = FamilyGroup::list({a, b});
    auto g = make_nil2(a, b);
    EXPECT_EQ(f->order(), g->order());
    auto el = all_of(*f);
    std::set<Nil2Element> images;
    for (const auto& x : el) images.insert(f->proj_pair(x, 1, 2));
    EXPECT_EQ(images.size(), el.size());
    for (const auto& x : el)
      for (const auto& y : el) ASSERT_EQ(f->proj_pair(f->mul(x, y), 1, 2), g->mul(f->proj_pair(x, 1, 2), f->proj_pair(y, 1, 2)));
  }
}

TEST(Family, ProjectionToSubsetIsHomomorphism) {
  auto f = FamilyGroup::list({cyclic(2), symmetric(3), cyclic(4), cyclic(2)});
  std::mt19937_64 rng(5);
  const std::vector<std::set<IndexKey>> subsets{{1, 3}, {2, 4}, {1, 2, 3}, {4}, {}};
  for (int s = 0; s < 500; ++s) {
    auto x = random_element(*f, rng), y = random_element(*f, rng);
    for (const auto& S : subsets) {
      ASSERT_EQ(f->proj_S(f->mul(x, y), S), f->mul(f->proj_S(x, S), f->proj_S(y, S)));
      for (const auto& T : subsets) EXPECT_EQ(f->proj_S(f->proj_S(x, S), T), f->proj_S(x, intersect(S, T)));
    }
  }
}

TEST(Family, PairProjectionIsHomomorphismInBothOrders) {
  auto f = FamilyGroup::list({cyclic(2), cyclic(4), symmetric(3)});
  auto el = all_of(*f);
  ASSERT_EQ(el.size(), 2u * 4 * 6 * 2 * 2 * 2);
  for (auto [i, j] : std::vector<IndexPair>{{1, 2}, {2, 1}, {1, 3}, {3, 1}, {2, 3}, {3, 2}}) {
    const Nil2Group& g = f->pair_group(i, j);
    std::mt19937_64 rng(i * 10 + j);
    std::uniform_int_distribution<std::size_t> pick(0, el.size() - 1);
    for (int s = 0; s < 3000; ++s) {
      const auto& x = el[pick(rng)];
      const auto& y = el[pick(rng)];
      ASSERT_EQ(f->proj_pair(f->mul(x, y), i, j), g.mul(f->proj_pair(x, i, j), f->proj_pair(y, i, j)))
          << i << "," << j << ": " << f->format(x) << " * " << f->format(y);
    }
  }
}

TEST(Family, PairProjectionOfEmbeddings) {
  auto f = FamilyGroup::list({cyclic(4), cyclic(6)});
  GroupElement one{{1}};
  // x_2 x_1 read in the (2, 1) slot order has no correction term
  FamElement x = f->mul(f->embed(2, one), f->embed(1, one));
  Nil2Element p = f->proj_pair(x, 2, 1);
  EXPECT_TRUE(p.t.is_zero());
  EXPECT_FALSE(f->proj_pair(x, 1, 2).t.is_zero());
}

TEST(Support, Examples) {
  auto f = FamilyGroup::list({cyclic(2), cyclic(2), cyclic(2)});
  EXPECT_TRUE(f->support(f->identity()).empty());
  EXPECT_EQ(f->support(f->parse("{1: 1, 3: 1}")), (std::set<IndexKey>{1, 3}));
  EXPECT_EQ(f->support(f->parse("{| (1,2): (1)}")), (std::set<IndexKey>{1, 2}));
  EXPECT_EQ(f->support(f->parse("{2: 1 | (1,3): (1)}")), (std::set<IndexKey>{1, 2, 3}));
}

TEST(Support, IsAGauge) {
  auto f = FamilyGroup::indexed(integers(), cyclic(3));
  std::vector<IndexKey> keys;
  for (IndexKey k = 0; k < 9; ++k) keys.push_back(k);
  std::mt19937_64 rng(9);
  for (int s = 0; s < 2000; ++s) {
    auto x = detail::random_family_element(*f, keys, rng), y = detail::random_family_element(*f, keys, rng);
    auto sx = f->support(x), sy = f->support(y), sxy = f->support(f->mul(x, y));
    EXPECT_EQ(f->support(f->inv(x)), sx);
    std::set<IndexKey> uni = sx;
    uni.insert(sy.begin(), sy.end());
    EXPECT_TRUE(std::includes(uni.begin(), uni.end(), sxy.begin(), sxy.end()));
  }
}

TEST(Support, ProjectionDefinitionAgreesWhenTwoIndicesExist) {
  auto f = FamilyGroup::list({cyclic(2), cyclic(4), symmetric(3), cyclic(2)});
  std::mt19937_64 rng(13);
  for (int s = 0; s < 2000; ++s) {
    auto x = random_element(*f, rng, 8);
    EXPECT_EQ(f->support_via_projections(x), f->support(x)) << f->format(x);
  }
}

TEST(Support, SingleIndexFamilyHasEmptyProjectionSupport) {
  // with one index there is no j != i to project against
  auto f = FamilyGroup::list({cyclic(2), cyclic(2)})->restricted({1});
  auto x = f->embed(1, GroupElement{{1}});
  EXPECT_EQ(f->support(x), (std::set<IndexKey>{1}));
  EXPECT_TRUE(f->support_via_projections(x).empty());
}

TEST(Regroup, IsAnIsomorphismOnFourMembers) {
  auto f = FamilyGroup::list({cyclic(2), cyclic(4), cyclic(2), symmetric(3)});
  std::mt19937_64 rng(17);
  for (const auto& part : std::vector<std::vector<std::vector<IndexKey>>>{
           {{1, 3}, {2, 4}}, {{4}, {1, 2, 3}}, {{1}, {2}, {3}, {4}}, {{1, 2, 3, 4}}}) {
    Regrouping R(f, part);
    EXPECT_EQ(R.outer().order(), f->order());
    for (int s = 0; s < 300; ++s) {
      auto x = random_element(*f, rng, 8), y = random_element(*f, rng, 8);
      auto fx = R.forward(x), fy = R.forward(y);
      ASSERT_EQ(R.backward(fx), x) << f->format(x);
      ASSERT_EQ(R.forward(f->mul(x, y)), R.outer().mul(fx, fy)) << f->format(x) << " * " << f->format(y);
      EXPECT_TRUE(R.outer().contains(fx));
    }
  }
}

TEST(Regroup, RejectsBadPartitions) {
  auto f = FamilyGroup::list({cyclic(2), cyclic(2), cyclic(2)});
  EXPECT_THROW(Regrouping(f, {{1, 2}}), std::invalid_argument);
  EXPECT_THROW(Regrouping(f, {{1, 2}, {2, 3}}), std::invalid_argument);
  EXPECT_THROW(Regrouping(f, {{1, 2, 3}, {}}), std::invalid_argument);
  EXPECT_THROW(Regrouping(f, {{1, 2, 3, 4}}), std::invalid_argument);
}

TEST(CentralBracket, DisjointSupportsCommuteUpToTensors) {
  auto f = FamilyGroup::list({symmetric(3), cyclic(4), cyclic(2), cyclic(6)});
  std::mt19937_64 rng(19);
  const std::vector<IndexKey> J{1, 3}, rest{2, 4};
  for (int s = 0; s < 500; ++s) {
    auto x = detail::random_family_element(*f, J, rng), z = detail::random_family_element(*f, rest, rng);
    auto c = central_hom_check(*f, x, z);
    EXPECT_TRUE(c.central_only) << f->format(c.value);
    for (const auto& [p, v] : c.value.tens) {
      bool a = p.first == 1 || p.first == 3, b = p.second == 1 || p.second == 3;
      EXPECT_NE(a, b) << "tensor entry inside one side";
    }
  }
}

TEST(Family, LiteralsAndEncodingRoundTrip) {
  auto f = FamilyGroup::list({cyclic(2), symmetric(3), cyclic(4)});
  for (const auto& x : all_of(*f)) {
    ASSERT_EQ(f->parse(f->format(x)), x) << f->format(x);
    ASSERT_EQ(f->decode(f->encode(x)), x);
    ASSERT_EQ(f->unrank(f->rank(x)), x);
    EXPECT_TRUE(f->contains(x));
  }
  EXPECT_EQ(f->format(f->identity()), "{}");
  EXPECT_THROW(f->parse("{| (2,1): (1)}"), LiteralError);
  EXPECT_THROW(f->parse("{5: 1}"), std::exception);
  EXPECT_THROW(f->parse("{1: 1, 1: 1}"), LiteralError);
}

TEST(Family, IndexedByGroupUsesCanonicalRanks) {
  auto f = FamilyGroup::indexed(cyclic(3), dihedral(3));
  EXPECT_TRUE(f->is_group_indexed());
  EXPECT_EQ(f->keys(), (std::vector<IndexKey>{0, 1, 2}));
  EXPECT_EQ(f->member(2).name(), "D3");
  // Ab(D3) = Z/2, so each pair contributes Z/2
  EXPECT_EQ(f->order().value(), BigInt(6 * 6 * 6 * 8));
}
