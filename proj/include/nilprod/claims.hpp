#pragma once

// The battery of checked claims behind acceptance criteria 1-12. Every
// claim compares a value computed by enumeration or exhaustive checking with
// a value predicted by a closed form; the predictions here are written out
// independently of the library's own formulas where that is possible.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <future>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "nilprod/haagerup.hpp"
#include "nilprod/nilfam.hpp"
#include "nilprod/nilprod2.hpp"
#include "nilprod/oracle.hpp"
#include "nilprod/wreath.hpp"

namespace nilprod {

struct ClaimResult {
  int criterion = 0;
  std::string claim_id;
  std::string statement;
  std::string computed;
  std::string expected;
  bool pass = false;
};

struct SuiteOptions {
  std::uint64_t seed = 20240611;
  std::size_t samples = 10000;      // sampled pairs / elements
  std::size_t cnd_samples = 1000;   // shift-invariance and Gram samples
  bool parallel = false;
};

namespace detail {

template <class T>
std::string str(const T& x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

inline ClaimResult claim(int criterion, std::string id, std::string statement, std::string computed,
                         std::string expected) {
  bool pass = computed == expected;
  return {criterion, std::move(id), std::move(statement), std::move(computed), std::move(expected), pass};
}

inline ClaimResult claim_bool(int criterion, std::string id, std::string statement, bool ok, std::string detail_text) {
  return {criterion, std::move(id), std::move(statement), ok ? "holds" : "fails: " + detail_text, "holds", ok};
}

inline BigInt ipow(std::int64_t b, std::uint64_t e) { return boost::multiprecision::pow(BigInt(b), static_cast<unsigned>(e)); }

/// Product of up to `max_factors` random non-identity components.
inline FamElement random_family_element(const FamilyGroup& fam, const std::vector<IndexKey>& keys, std::mt19937_64& rng,
                                        std::size_t max_factors = 6) {
  std::uniform_int_distribution<std::size_t> len(0, max_factors), pick(0, keys.size() - 1);
  FamElement x = fam.identity();
  const std::size_t n = len(rng);
  for (std::size_t i = 0; i < n; ++i) {
    const IndexKey k = keys[pick(rng)];
    const GroupHandle& h = fam.member(k);
    const std::uint64_t m = finite_size(h.order(), h.name());
    if (m < 2) continue;
    std::uniform_int_distribution<std::uint64_t> r(1, m - 1);
    x = fam.mul(x, fam.embed(k, h.unrank(r(rng))));
  }
  return x;
}

inline std::string set_str(const std::set<IndexKey>& s) {
  std::string out = "{";
  for (auto k : s) out += (out.size() > 1 ? "," : "") + std::to_string(k);
  return out + "}";
}

}  // namespace detail

/// 1. |Z/p *2 Z/q| = p q gcd(p, q), by closed form and by enumeration.
inline std::vector<ClaimResult> claims_order_formulas(const SuiteOptions&) {
  std::vector<ClaimResult> out;
  for (std::int64_t p = 1; p <= 8; ++p)
    for (std::int64_t q = 1; q <= 8; ++q) {
      auto m = make_nil2(cyclic(p), cyclic(q));
      const std::int64_t predicted = p * q * std::gcd(p, q);
      EnumeratedGroup e(as_handle(m));
      std::string computed = m->order().str() + "/" + std::to_string(e.size());
      std::string expected = std::to_string(predicted) + "/" + std::to_string(predicted);
      out.push_back(detail::claim(1, "order-Z" + std::to_string(p) + "-Z" + std::to_string(q),
                                  "|Z/p *2 Z/q| = p q gcd(p,q) (closed form / enumerated)", computed, expected));
    }
  return out;
}

/// 2. (a, b, t) -> (b, a, -t) is an isomorphism Z/n *2 Z/n -> Heis(Z/n).
inline std::vector<ClaimResult> claims_heisenberg(const SuiteOptions&) {
  std::vector<ClaimResult> out;
  for (std::int64_t n = 2; n <= 6; ++n) {
    auto m = make_nil2(cyclic(n), cyclic(n));
    EnumeratedGroup src(as_handle(m)), dst(heisenberg(n));
    IsoResult r = verify_isomorphism(src, dst, [&](const GroupElement& x) { return heisenberg_image(*m, m->decode(x)); });
    out.push_back(detail::claim_bool(2, "heisenberg-" + std::to_string(n),
                                     "Z/n *2 Z/n -> Heis(Z/n) is a bijective homomorphism (all pairs)", r.ok, r.witness));
  }
  EnumeratedGroup v(nil2(cyclic(2), cyclic(2))), d4(dihedral(4));
  auto iso = find_isomorphism(v, d4);
  out.push_back(detail::claim_bool(2, "heisenberg-2-dihedral", "Z/2 *2 Z/2 is isomorphic to D4 (search)", iso.has_value(),
                                   "no isomorphism found"));
  return out;
}

/// 3. Orders and derived invariants of D_n *2 D_n.
inline std::vector<ClaimResult> claims_dihedral(const SuiteOptions&) {
  std::vector<ClaimResult> out;
  for (std::int64_t n : {3, 4, 5, 6}) {
    GroupHandle g = nil2(dihedral(n), dihedral(n));
    EnumeratedGroup e(g);
    const std::int64_t predicted = (n % 2 == 0 ? 64 : 8) * n * n;
    out.push_back(detail::claim(3, "dihedral-order-" + std::to_string(n), "|D_n *2 D_n| = 2^6 n^2 (n even), 2^3 n^2 (n odd)",
                                std::to_string(e.size()), std::to_string(predicted)));
    std::vector<std::int64_t> f = n % 2 == 0 ? std::vector<std::int64_t>{n / 2, n / 2, 2, 2, 2, 2}
                                             : std::vector<std::int64_t>{n, n, 2};
    EnumeratedGroup der(subgroup_generated(g, derived_subgroup_elements(g), "derived"));
    out.push_back(detail::claim(3, "dihedral-derived-" + std::to_string(n),
                                "[G,G] = Z/(n/2)^2 + (Z/2)^4 (n even), Z/n^2 + Z/2 (n odd)", abelian_invariants(der).str(),
                                canonical_form(FGAbelian::from_factors(f)).str()));
  }
  return out;
}

/// 4. The universal nil-2 exponent-p group on n generators.
inline std::vector<ClaimResult> claims_p_groups(const SuiteOptions&) {
  std::vector<ClaimResult> out;
  for (auto [p, n] : std::vector<std::pair<std::int64_t, std::uint64_t>>{{2, 3}, {3, 3}, {2, 4}}) {
    GroupHandle g = nil_family(std::vector<GroupHandle>(n, cyclic(p)));
    const std::string tag = std::to_string(p) + "-" + std::to_string(n);
    EnumeratedGroup e(g);
    out.push_back(detail::claim(4, "pgroup-order-" + tag, "order p^((n^2+n)/2) (closed form / enumerated)",
                                g.order().str() + "/" + std::to_string(e.size()),
                                detail::ipow(p, (n * n + n) / 2).str() + "/" + detail::ipow(p, (n * n + n) / 2).str()));
    auto der = derived_subgroup_elements(g);
    out.push_back(detail::claim(4, "pgroup-derived-order-" + tag, "|[G,G]| = p^((n^2-n)/2) by commutator closure",
                                std::to_string(der.size()), detail::ipow(p, (n * n - n) / 2).str()));
    EnumeratedGroup de(subgroup_generated(g, der, "derived"));
    out.push_back(detail::claim(4, "pgroup-derived-type-" + tag, "[G,G] is elementary abelian",
                                abelian_invariants(de).str(),
                                FGAbelian::from_factors(std::vector<std::int64_t>((n * n - n) / 2, p)).str()));
  }
  return out;
}

/// 5. A perfect factor kills the tensor part.
inline std::vector<ClaimResult> claims_perfect(const SuiteOptions& opt) {
  std::vector<ClaimResult> out;
  auto m = make_nil2(alternating(5), cyclic(2));
  out.push_back(detail::claim(5, "perfect-tensor", "A5 (x) Z/2 = 0", m->T().order().str(), "1"));
  GroupHandle sum = direct_sum({alternating(5), cyclic(2)});
  const auto& ds = dynamic_cast<const DirectSumGroup&>(sum.impl());
  auto f = [&](const Nil2Element& x) { return ds.join({x.a, x.b}); };
  const std::uint64_t n = detail::finite_size(m->order(), m->name());
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
  std::size_t mismatches = 0;
  for (std::size_t s = 0; s < opt.samples; ++s) {
    Nil2Element x = m->unrank(pick(rng)), y = m->unrank(pick(rng));
    if (!(f(m->mul(x, y)) == sum.mul(f(x), f(y)))) ++mismatches;
  }
  out.push_back(detail::claim(5, "perfect-collapse", "A5 *2 Z/2 multiplies as A5 + Z/2 (mismatches on sampled pairs)",
                              std::to_string(mismatches), "0"));
  return out;
}

/// 6. [G,G] = [A,A] + [B,B] + A (x) B.
inline std::vector<ClaimResult> claims_derived(const SuiteOptions&) {
  std::vector<ClaimResult> out;
  const std::vector<GroupHandle> fs{cyclic(2), cyclic(4), symmetric(3), dihedral(4)};
  for (const auto& a : fs)
    for (const auto& b : fs) {
      auto m = make_nil2(a, b);
      GroupHandle g = as_handle(m);
      const std::string id = "derived-" + a.name() + "-" + b.name();
      auto der = derived_subgroup_elements(g);
      GroupHandle da = derived_subgroup(a), db = derived_subgroup(b);
      // elementwise: exactly the triples with a in [A,A], b in [B,B]
      std::set<GroupElement> predicted;
      for (const auto& x : da.elements())
        for (const auto& y : db.elements())
          for (const auto& t : m->T().elements()) predicted.insert(m->encode({x, y, t}));
      const bool same = predicted == std::set<GroupElement>(der.begin(), der.end());
      out.push_back(detail::claim_bool(6, id + "-elements", "[G,G] is {(a,b,t) : a in [A,A], b in [B,B]}", same,
                                       std::to_string(der.size()) + " vs " + std::to_string(predicted.size())));
      EnumeratedGroup lhs(subgroup_generated(g, der, "derived"));
      EnumeratedGroup rhs(direct_sum({da, db, abelian_group(tensor(a.abelianization(), b.abelianization()))}));
      auto iso = find_isomorphism(lhs, rhs);
      out.push_back(detail::claim_bool(6, id + "-iso", "[G,G] isomorphic to [A,A] + [B,B] + A (x) B (search)",
                                       iso.has_value(), "no isomorphism between orders " + std::to_string(lhs.size()) +
                                                            " and " + std::to_string(rhs.size())));
    }
  return out;
}

/// 7. class(A *2 B) = max{2, class A, class B}, or 1 when it is abelian.
inline std::vector<ClaimResult> claims_class(const SuiteOptions&) {
  struct Factor {
    GroupHandle g;
    std::size_t cls;
    std::int64_t cyclic_order;  // 0 when not cyclic
  };
  const std::vector<Factor> fs{{cyclic(2), 1, 2}, {cyclic(3), 1, 3}, {cyclic(4), 1, 4}, {dihedral(4), 2, 0},
                               {heisenberg(2), 2, 0}};
  std::vector<ClaimResult> out;
  for (const auto& a : fs)
    for (const auto& b : fs) {
      const bool collapse = a.cyclic_order && b.cyclic_order && std::gcd(a.cyclic_order, b.cyclic_order) == 1;
      const std::size_t predicted = collapse ? 1 : std::max<std::size_t>({2, a.cls, b.cls});
      auto m = make_nil2(a.g, b.g);
      auto enumerated = nilpotency_class(as_handle(m));
      auto closed = nil2_class(*m);
      out.push_back(detail::claim(7, "class-" + a.g.name() + "-" + b.g.name(),
                                  "class max{2, n, m}, or 1 when abelian (lower central series / closed form)",
                                  (enumerated ? std::to_string(*enumerated) : "none") + "/" +
                                      (closed ? std::to_string(*closed) : "none"),
                                  std::to_string(predicted) + "/" + std::to_string(predicted)));
    }
  return out;
}

/// 8. Regrouping a three-member family along a partition is an isomorphism.
inline std::vector<ClaimResult> claims_associativity(const SuiteOptions&) {
  std::vector<ClaimResult> out;
  const std::vector<std::vector<GroupHandle>> families{{cyclic(2), cyclic(2), cyclic(2)}, {cyclic(2), cyclic(3), cyclic(4)}};
  const std::vector<std::vector<std::vector<IndexKey>>> partitions{{{1, 2}, {3}}, {{1}, {2, 3}}, {{1, 3}, {2}}};
  for (const auto& members : families) {
    auto fam = FamilyGroup::list(members);
    const std::uint64_t n = detail::finite_size(fam->order(), fam->name());
    std::vector<FamElement> el;
    for (std::uint64_t r = 0; r < n; ++r) el.push_back(fam->unrank(r));
    for (const auto& part : partitions) {
      Regrouping R(fam, part);
      std::string witness;
      std::set<FamElement> images;
      std::vector<FamElement> fwd;
      for (const auto& x : el) {
        fwd.push_back(R.forward(x));
        images.insert(fwd.back());
        if (!R.outer().contains(fwd.back()) || !(R.backward(fwd.back()) == x)) witness = "not invertible at " + fam->format(x);
      }
      if (images.size() != n || R.outer().order() != fam->order()) witness = "not a bijection";
      for (std::size_t i = 0; i < el.size() && witness.empty(); ++i)
        for (std::size_t j = 0; j < el.size(); ++j)
          if (!(R.forward(fam->mul(el[i], el[j])) == R.outer().mul(fwd[i], fwd[j]))) {
            witness = fam->format(el[i]) + " * " + fam->format(el[j]);
            break;
          }
      std::string pid;
      for (const auto& b : part) {
        pid += "(";
        for (auto k : b) pid += std::to_string(k);
        pid += ")";
      }
      out.push_back(detail::claim_bool(8, "regroup-" + fam->name() + "-" + pid,
                                       "regrouping is a bijective homomorphism (all pairs)", witness.empty(), witness));
    }
  }
  return out;
}

/// 9. supp is a gauge on the family indexed by Z.
inline std::vector<ClaimResult> claims_gauge(const SuiteOptions& opt) {
  auto fam = FamilyGroup::indexed(integers(), cyclic(2));
  std::vector<IndexKey> keys;
  for (IndexKey k = 0; k < 13; ++k) keys.push_back(k);
  std::mt19937_64 rng(opt.seed + 9);
  std::size_t failures = 0;
  std::string first;
  auto fail = [&](const std::string& what) {
    if (failures++ == 0) first = what;
  };
  if (!fam->support(fam->identity()).empty()) fail("supp(e) is not empty");
  for (std::size_t s = 0; s < opt.samples; ++s) {
    FamElement x = detail::random_family_element(*fam, keys, rng), y = detail::random_family_element(*fam, keys, rng);
    auto sx = fam->support(x), sy = fam->support(y), sxy = fam->support(fam->mul(x, y));
    std::set<IndexKey> uni = sx;
    uni.insert(sy.begin(), sy.end());
    if (fam->support(fam->inv(x)) != sx) fail("supp(x^-1) != supp(x) at " + fam->format(x));
    if (!std::includes(uni.begin(), uni.end(), sxy.begin(), sxy.end()))
      fail("supp(xy) not in supp(x) u supp(y) at " + fam->format(x) + ", " + fam->format(y));
    if (sx.size() > 13) fail("support larger than the sampled window");
  }
  return {detail::claim(9, "gauge-Z-Z2", "supp(e) = {}, supp(x^-1) = supp(x), supp(xy) in supp(x) u supp(y) (failures)",
                        std::to_string(failures) + (first.empty() ? "" : " (" + first + ")"), "0")};
}

/// 10. Exact checks on u for the restricted second nilpotent wreath product.
inline std::vector<ClaimResult> claims_cnd(const SuiteOptions& opt) {
  std::vector<ClaimResult> out;
  const std::vector<std::pair<GroupHandle, GroupHandle>> cases{{cyclic(2), cyclic(3)}, {cyclic(2), integers()},
                                                               {cyclic(3), cyclic(4)}};
  std::uint64_t salt = 100;
  for (const auto& [H, G] : cases) {
    auto w = make_wreath(H, G);
    const FamilyGroup& fam = w->base();
    HaagerupFunction u(w->base_ptr());
    const std::string tag = H.name() + "-" + G.name();
    std::mt19937_64 rng(opt.seed + ++salt);
    std::vector<IndexKey> keys;
    if (G.is_finite()) {
      keys = fam.keys();
    } else {
      for (IndexKey k = 0; k < 9; ++k) keys.push_back(k);
    }
    auto rnd_g = [&] {
      if (G.is_finite()) {
        std::uniform_int_distribution<std::uint64_t> d(0, detail::finite_size(G.order(), G.name()) - 1);
        return G.unrank(d(rng));
      }
      std::uniform_int_distribution<std::int64_t> d(-10, 10);
      return GroupElement{{d(rng)}};
    };

    if (G.is_finite()) {
      const std::uint64_t n = detail::finite_size(fam.order(), fam.name());
      std::string witness;
      for (std::uint64_t r = 0; r < n && witness.empty(); ++r) {
        FamElement x = fam.unrank(r);
        if (u.u(x) != u.u_direct(x)) witness = fam.format(x);
      }
      out.push_back(detail::claim_bool(10, "cnd-split-" + tag, "finite split of u equals the direct double sum (all x)",
                                       witness.empty(), witness));
    }

    std::string inv_witness;
    for (std::size_t s = 0; s < opt.cnd_samples && inv_witness.empty(); ++s) {
      FamElement x = detail::random_family_element(fam, keys, rng);
      GroupElement g = rnd_g();
      if (u.u(shift(fam, g, x)) != u.u(x)) inv_witness = fam.format(x) + " shifted by " + G.format(g);
    }
    out.push_back(detail::claim_bool(10, "cnd-invariance-" + tag, "u(g.x) = u(x) on sampled (g, x)", inv_witness.empty(),
                                     inv_witness));

    std::string gram_witness;
    Rational worst = 0;
    std::uniform_int_distribution<std::int64_t> coef(-5, 5);
    std::uniform_int_distribution<std::size_t> npts(2, 5);
    for (std::size_t s = 0; s < opt.cnd_samples && gram_witness.empty(); ++s) {
      const std::size_t k = npts(rng);
      std::vector<FamElement> pts;
      std::vector<Rational> c;
      Rational sum = 0;
      for (std::size_t i = 0; i < k; ++i) {
        pts.push_back(detail::random_family_element(fam, keys, rng));
        c.push_back(i + 1 < k ? Rational(coef(rng), 1 + std::abs(coef(rng))) : -sum);
        sum += c.back();
      }
      Rational q = cnd_gram_check(u, pts, c);
      worst = std::max(worst, q);
      if (q > 0) gram_witness = "Q = " + detail::str(q);
    }
    out.push_back(detail::claim_bool(10, "cnd-gram-" + tag, "sum c_i c_j u(x_i^-1 x_j) <= 0 when sum c_i = 0 (exact)",
                                     gram_witness.empty(), gram_witness));

    // properness: all F with |F| <= 3 among the first few indices
    std::vector<IndexKey> pool;
    for (std::size_t i = 0; i < std::min<std::size_t>(keys.size(), 5); ++i) pool.push_back(keys[i]);
    std::string prop_witness;
    std::size_t windows = 0;
    for (std::uint32_t mask = 1; mask < (1u << pool.size()); ++mask) {
      if (std::popcount(mask) > 3) continue;
      std::set<IndexKey> F;
      for (std::size_t i = 0; i < pool.size(); ++i)
        if (mask >> i & 1u) F.insert(pool[i]);
      for (const Rational& M : {Rational(1, 4), Rational(1, 2), Rational(1), Rational(2)}) {
        PropernessReport rep = properness_check(u, F, M);
        ++windows;
        if (!rep.contained && prop_witness.empty())
          prop_witness = "F = " + detail::set_str(F) + ", M = " + detail::str(M) + ": " + fam.format(*rep.violation);
        if (BigInt(rep.window_size) != rep.expected_window_size && prop_witness.empty())
          prop_witness = "window of F = " + detail::set_str(F) + " has " + std::to_string(rep.window_size) + " elements";
      }
    }
    out.push_back(detail::claim_bool(10, "cnd-proper-" + tag,
                                     "{u <= M, supp in F} lies in {v_(a,b) <= 2^N M} for |F| <= 3, M in {1/4,1/2,1,2} (" +
                                         std::to_string(windows) + " windows)",
                                     prop_witness.empty(), prop_witness));
  }
  return out;
}

/// 11. Dropping the tensor part maps onto the classical wreath product.
inline std::vector<ClaimResult> claims_quotient(const SuiteOptions&) {
  std::vector<ClaimResult> out;
  auto w = make_wreath(cyclic(2), cyclic(3));
  ClassicalWreath c(cyclic(2), cyclic(3));
  const std::uint64_t n = detail::finite_size(w->order(), w->name());
  std::vector<WreathElement> el;
  std::vector<ClassicalElement> img;
  for (std::uint64_t r = 0; r < n; ++r) {
    el.push_back(w->unrank(r));
    img.push_back(quotient_to_classical(*w, el.back()));
  }
  std::string witness;
  for (std::size_t i = 0; i < el.size() && witness.empty(); ++i)
    for (std::size_t j = 0; j < el.size(); ++j)
      if (!(quotient_to_classical(*w, w->mul(el[i], el[j])) == c.mul(img[i], img[j]))) {
        witness = w->format(el[i]) + " * " + w->format(el[j]);
        break;
      }
  out.push_back(detail::claim_bool(11, "quotient-hom", "the quotient map is a homomorphism (all pairs)", witness.empty(),
                                   witness));
  // 2^3 * 3 elements in the classical product, counted directly
  std::set<ClassicalElement> image(img.begin(), img.end());
  out.push_back(detail::claim(11, "quotient-onto", "the image is all of the classical wreath product",
                              std::to_string(image.size()), std::to_string(8 * 3)));
  std::set<WreathElement> kernel, tensor_part;
  for (std::size_t i = 0; i < el.size(); ++i) {
    if (img[i] == c.identity()) kernel.insert(el[i]);
    if (el[i].base.comps.empty() && el[i].act == w->G().identity()) tensor_part.insert(el[i]);
  }
  // one Z/2 (x) Z/2 per unordered pair of the three indices
  out.push_back(detail::claim(11, "quotient-kernel", "the kernel is exactly the tensor part (size / equal)",
                              std::to_string(kernel.size()) + "/" + (kernel == tensor_part ? "equal" : "different"),
                              "8/equal"));
  return out;
}

/// 12. <2, z> in Z/4 *2 Z/2 is Klein four.
inline std::vector<ClaimResult> claims_subgroup(const SuiteOptions&) {
  auto m = make_nil2(cyclic(4), cyclic(2));
  GroupHandle g = as_handle(m);
  GroupHandle sub = subgroup_generated(g, {g.parse("[2; 0; 0]"), g.parse("[0; 1; 0]")}, "<2, z>");
  EnumeratedGroup e(sub), v(direct_sum({cyclic(2), cyclic(2)}));
  auto iso = find_isomorphism(e, v);
  return {detail::claim_bool(12, "subgroup-klein", "<(2, 0, 0), (0, 1, 0)> in Z/4 *2 Z/2 is isomorphic to Z/2 + Z/2",
                             iso.has_value(), "order " + std::to_string(e.size()) + ", abelian " +
                                                  (e.is_abelian() ? "yes" : "no"))};
}

using ClaimBattery = std::vector<ClaimResult> (*)(const SuiteOptions&);

inline const std::vector<std::pair<int, ClaimBattery>>& claim_batteries() {
  static const std::vector<std::pair<int, ClaimBattery>> b{
      {1, claims_order_formulas}, {2, claims_heisenberg}, {3, claims_dihedral},      {4, claims_p_groups},
      {5, claims_perfect},        {6, claims_derived},    {7, claims_class},         {8, claims_associativity},
      {9, claims_gauge},          {10, claims_cnd},       {11, claims_quotient},     {12, claims_subgroup}};
  return b;
}

/// Runs criteria 1-12 (or the listed ones). An exception inside a battery
/// becomes a failing claim.
inline std::vector<ClaimResult> claim_suite(const SuiteOptions& opt = {}, const std::set<int>& only = {}) {
  auto run = [&opt](int c, ClaimBattery f) -> std::vector<ClaimResult> {
    try {
      return f(opt);
    } catch (const std::exception& e) {
      return {ClaimResult{c, "criterion-" + std::to_string(c), "battery completed", std::string("error: ") + e.what(),
                          "completed", false}};
    }
  };
  std::vector<ClaimResult> out;
  std::vector<std::future<std::vector<ClaimResult>>> jobs;
  for (const auto& [c, f] : claim_batteries()) {
    if (!only.empty() && !only.count(c)) continue;
    if (opt.parallel) {
      jobs.push_back(std::async(std::launch::async, run, c, f));
    } else {
      auto r = run(c, f);
      out.insert(out.end(), r.begin(), r.end());
    }
  }
  for (auto& j : jobs) {
    auto r = j.get();
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

}  // namespace nilprod
