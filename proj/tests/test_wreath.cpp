#include <gtest/gtest.h>

#include <random>

#include "nilprod/claims.hpp"
#include "nilprod/oracle.hpp"
#include "nilprod/wreath.hpp"

using namespace nilprod;

namespace {

std::vector<FamElement> all_base(const FamilyGroup& f) {
  std::vector<FamElement> out;
  for (std::uint64_t r = 0; r < detail::finite_size(f.order(), f.name()); ++r) out.push_back(f.unrank(r));
  return out;
}

/// Random base element supported on the first `window` canonical indices.
FamElement random_base(const FamilyGroup& f, std::mt19937_64& rng, IndexKey window = 9) {
  std::vector<IndexKey> keys;
  for (IndexKey k = 0; k < window; ++k) keys.push_back(k);
  return detail::random_family_element(f, keys, rng, 8);
}

GroupElement random_int(std::mt19937_64& rng, std::int64_t bound = 6) {
  return {{std::uniform_int_distribution<std::int64_t>(-bound, bound)(rng)}};
}

/// Index translation that keeps tensor coordinates on the reordered pair
/// without the correction term; the homomorphism property fails for it.
FamElement uncorrected_shift(const FamilyGroup& fam, const GroupElement& g, const FamElement& x) {
  const GroupHandle& G = fam.index_group();
  auto move = [&](IndexKey k) { return G.rank(G.mul(g, G.unrank(k))); };
  FamElement r;
  for (const auto& [k, v] : x.comps) r.comps.emplace(move(k), v);
  for (const auto& [p, v] : x.tens) {
    IndexKey a = move(p.first), b = move(p.second);
    if (a < b)
      r.tens.emplace(IndexPair{a, b}, v);
    else
      r.tens.emplace(IndexPair{b, a}, fam.grid(a, b).transpose(v));
  }
  return r;
}

}  // namespace

TEST(Shift, ActionAxiomsExhaustive) {
  auto fam = FamilyGroup::indexed(cyclic(3), cyclic(2));
  const GroupHandle& G = fam->index_group();
  auto el = all_base(*fam);
  ASSERT_EQ(el.size(), 64u);
  for (const auto& x : el) {
    EXPECT_EQ(shift(*fam, G.identity(), x), x);
    for (const auto& g : G.elements())
      for (const auto& h : G.elements()) EXPECT_EQ(shift(*fam, g, shift(*fam, h, x)), shift(*fam, G.mul(g, h), x));
  }
}

TEST(Shift, IsAnAutomorphismExhaustive) {
  for (const auto& [G, H] : std::vector<std::pair<GroupHandle, GroupHandle>>{{cyclic(3), cyclic(2)}, {cyclic(2), cyclic(4)}}) {
    auto fam = FamilyGroup::indexed(G, H);
    auto el = all_base(*fam);
    for (const auto& g : G.elements()) {
      std::set<FamElement> images;
      for (const auto& x : el) {
        images.insert(shift(*fam, g, x));
        for (const auto& y : el)
          ASSERT_EQ(shift(*fam, g, fam->mul(x, y)), fam->mul(shift(*fam, g, x), shift(*fam, g, y)))
              << fam->format(x) << " * " << fam->format(y);
      }
      EXPECT_EQ(images.size(), el.size());
    }
  }
}

TEST(Shift, IsAnAutomorphismOverIntegersAndS3) {
  std::mt19937_64 rng(23);
  auto fz = FamilyGroup::indexed(integers(), cyclic(3));
  for (int s = 0; s < 2000; ++s) {
    auto x = random_base(*fz, rng), y = random_base(*fz, rng);
    auto g = random_int(rng), h = random_int(rng);
    ASSERT_EQ(shift(*fz, g, fz->mul(x, y)), fz->mul(shift(*fz, g, x), shift(*fz, g, y)));
    ASSERT_EQ(shift(*fz, g, shift(*fz, h, x)), shift(*fz, integers().mul(g, h), x));
  }
  auto s3 = symmetric(3);
  auto fs = FamilyGroup::indexed(s3, cyclic(2));
  auto sel = s3.elements();
  std::uniform_int_distribution<std::size_t> pick(0, sel.size() - 1);
  for (int s = 0; s < 2000; ++s) {
    auto x = random_base(*fs, rng, 6), y = random_base(*fs, rng, 6);
    const auto& g = sel[pick(rng)];
    const auto& h = sel[pick(rng)];
    ASSERT_EQ(shift(*fs, g, fs->mul(x, y)), fs->mul(shift(*fs, g, x), shift(*fs, g, y)));
    ASSERT_EQ(shift(*fs, g, shift(*fs, h, x)), shift(*fs, s3.mul(g, h), x));
  }
}

TEST(Shift, UncorrectedReorderingIsNotAHomomorphism) {
  auto fam = FamilyGroup::indexed(cyclic(3), cyclic(3));
  const GroupHandle& G = fam->index_group();
  auto el = all_base(*fam);
  auto breaks = [&] {
    for (const auto& g : G.elements())
      for (const auto& x : el)
        for (const auto& y : el)
          if (!(uncorrected_shift(*fam, g, fam->mul(x, y)) ==
                fam->mul(uncorrected_shift(*fam, g, x), uncorrected_shift(*fam, g, y))))
            return true;
    return false;
  };
  EXPECT_TRUE(breaks());
}

TEST(Shift, SupportIsEquivariant) {
  std::mt19937_64 rng(29);
  auto fz = FamilyGroup::indexed(integers(), cyclic(2));
  const GroupHandle& Z = fz->index_group();
  for (int s = 0; s < 2000; ++s) {
    auto x = random_base(*fz, rng);
    auto g = random_int(rng, 20);
    std::set<IndexKey> moved;
    for (auto k : fz->support(x)) moved.insert(Z.rank(Z.mul(g, Z.unrank(k))));
    EXPECT_EQ(fz->support(shift(*fz, g, x)), moved);
  }
}

TEST(Wreath, OrderAndClosure) {
  auto w = make_wreath(cyclic(2), cyclic(3));
  // base: 2^3 components and 2^3 pair coordinates
  EXPECT_EQ(w->order().value(), 64 * 3);
  EXPECT_EQ(closure(*w, w->generators()).size(), 192u);
  EXPECT_FALSE(make_wreath(cyclic(2), integers())->order().is_finite());
}

TEST(Wreath, AxiomsExhaustive) {
  for (const auto& h : {wreath(cyclic(2), cyclic(2)), wreath(cyclic(2), cyclic(3)), wreath(cyclic(3), cyclic(2))}) {
    EnumeratedGroup e(h);
    auto r = check_axioms(e);
    EXPECT_TRUE(r.ok) << h.name() << ": " << r.failure;
    EXPECT_TRUE(r.exhaustive);
  }
}

TEST(Wreath, AssociativityOverIntegersSampled) {
  auto w = make_wreath(cyclic(2), integers());
  std::mt19937_64 rng(31);
  auto rnd = [&] { return WreathElement{random_base(w->base(), rng), random_int(rng)}; };
  for (int s = 0; s < 3000; ++s) {
    auto x = rnd(), y = rnd(), z = rnd();
    ASSERT_EQ(w->mul(w->mul(x, y), z), w->mul(x, w->mul(y, z))) << w->format(x) << w->format(y) << w->format(z);
    ASSERT_EQ(w->mul(x, w->inv(x)), w->identity());
    ASSERT_EQ(w->mul(w->inv(x), x), w->identity());
  }
}

TEST(Wreath, ConjugationByActingElementIsShift) {
  auto w = make_wreath(cyclic(2), integers());
  std::mt19937_64 rng(37);
  for (int s = 0; s < 1000; ++s) {
    auto x = random_base(w->base(), rng);
    auto g = random_int(rng);
    auto c = w->mul(w->mul(w->embed_act(g), w->embed_base(x)), w->inv(w->embed_act(g)));
    EXPECT_EQ(c, w->embed_base(shift(w->base(), g, x)));
  }
}

TEST(Wreath, QuotientOntoClassical) {
  auto w = make_wreath(cyclic(2), cyclic(3));
  ClassicalWreath c(cyclic(2), cyclic(3));
  EXPECT_EQ(c.order().value(), 24);
  auto h = as_handle(w);
  std::vector<WreathElement> el;
  for (std::uint64_t r = 0; r < 192; ++r) el.push_back(w->unrank(r));
  std::set<ClassicalElement> images;
  std::size_t kernel = 0;
  for (const auto& x : el) {
    auto q = quotient_to_classical(*w, x);
    images.insert(q);
    if (q == c.identity()) {
      ++kernel;
      EXPECT_TRUE(x.base.comps.empty());
    }
    for (const auto& y : el) ASSERT_EQ(quotient_to_classical(*w, w->mul(x, y)), c.mul(q, quotient_to_classical(*w, y)));
  }
  EXPECT_EQ(images.size(), 24u);
  EXPECT_EQ(kernel, 8u);
  EXPECT_THROW(quotient_to_classical(*make_wreath(symmetric(3), cyclic(2)), make_wreath(symmetric(3), cyclic(2))->identity()),
               std::invalid_argument);
}

TEST(Wreath, ClassicalAxioms) {
  ClassicalWreath c(cyclic(3), cyclic(2));
  std::vector<ClassicalElement> el;
  for (std::uint64_t r = 0; r < 18; ++r) el.push_back(c.unrank(r));
  for (const auto& x : el) {
    EXPECT_EQ(c.mul(x, c.inv(x)), c.identity());
    EXPECT_EQ(c.parse(c.format(x)), x);
    for (const auto& y : el)
      for (const auto& z : el) EXPECT_EQ(c.mul(c.mul(x, y), z), c.mul(x, c.mul(y, z)));
  }
  EXPECT_THROW(ClassicalWreath(symmetric(3), cyclic(2)), std::invalid_argument);
}

TEST(Wreath, AbelianizationIsSumOfFactors) {
  for (const auto& [h, g] : std::vector<std::pair<GroupHandle, GroupHandle>>{{cyclic(2), cyclic(3)}, {cyclic(3), cyclic(2)}}) {
    auto w = wreath(h, g);
    EXPECT_EQ(canonical_form(w.abelianization()), canonical_form(abelianize_finite(w, w.elements()).group)) << w.name();
  }
}

TEST(Wreath, LiteralsRoundTrip) {
  auto w = make_wreath(cyclic(2), cyclic(3));
  for (std::uint64_t r = 0; r < 192; ++r) {
    auto x = w->unrank(r);
    ASSERT_EQ(w->parse(w->format(x)), x) << w->format(x);
    ASSERT_EQ(w->decode(w->encode(x)), x);
    ASSERT_EQ(w->rank(x), r);
  }
  auto wz = make_wreath(cyclic(2), integers());
  auto x = wz->parse("({0: 1, 1: 1} | -2)");
  EXPECT_EQ(wz->base().support(x.base), (std::set<IndexKey>{0, 1}));
  EXPECT_EQ(wz->format(x), "({0: 1, 1: 1} | -2)");
}
