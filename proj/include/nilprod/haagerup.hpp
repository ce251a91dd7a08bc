#pragma once

// The function u(x) = sum_{h != k} 2^-psi(h^-1 k) phi(pi_(h,k)(x)) on the
// base of a restricted second nilpotent wreath product, evaluated exactly.
// psi is the canonical enumeration of G (identity at 0), phi a function on
// H *2 H with phi(e) = 0.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nilprod/nilfam.hpp"
#include "nilprod/numeric.hpp"
#include "nilprod/wreath.hpp"

namespace nilprod {

/// phi on H *2 H: 1 - delta_e by default, or a user table (missing entries
/// fall back to the default).
class CNDOnPair {
 public:
  CNDOnPair() = default;
  explicit CNDOnPair(std::map<Nil2Element, Rational> table, std::string label = "table")
      : table_(std::move(table)), label_(std::move(label)) {}

  Rational operator()(const Nil2Group& g, const Nil2Element& w) const {
    if (auto it = table_.find(w); it != table_.end()) return it->second;
    return w == g.identity() ? Rational(0) : Rational(1);
  }

  const std::string& label() const { return label_; }
  bool is_default() const { return table_.empty(); }

 private:
  std::map<Nil2Element, Rational> table_;
  std::string label_ = "delta";
};

inline CNDOnPair default_phi(const GroupHandle& h) {
  if (!h.is_finite()) throw std::domain_error("default_phi needs a finite H, got " + h.name());
  return CNDOnPair();
}

/// Sum over g != e of 2^-psi(g): 1 for infinite G, 1 - 2^-(|G|-1) for finite G.
inline DyadicRational tail_total(const GroupHandle& g) {
  if (!g.is_finite()) return DyadicRational(1);
  std::uint64_t n = detail::finite_size(g.order(), g.name());
  return DyadicRational(1) - DyadicRational::inverse_power_of_two(n - 1);
}

class HaagerupFunction {
 public:
  HaagerupFunction(std::shared_ptr<const FamilyGroup> fam, CNDOnPair phi = {})
      : fam_(std::move(fam)), phi_(std::move(phi)) {
    if (!fam_->is_group_indexed()) throw std::invalid_argument("u needs a group-indexed family");
  }

  const FamilyGroup& family() const { return *fam_; }
  const GroupHandle& G() const { return fam_->index_group(); }
  const CNDOnPair& phi() const { return phi_; }

  std::string psi_description() const {
    const GroupHandle& g = G();
    if (!g.is_finite()) return "spiral enumeration of " + g.name() + ": 0, 1, -1, 2, -2, ...";
    return "canonical enumeration of " + g.name() + " (identity first)";
  }

  /// psi(h^-1 k) for keys h, k
  std::uint64_t psi_between(IndexKey h, IndexKey k) const {
    const GroupHandle& g = G();
    return g.rank(g.mul(g.inv(g.unrank(h)), g.unrank(k)));
  }

  DyadicRational weight(IndexKey h, IndexKey k) const { return DyadicRational::inverse_power_of_two(psi_between(h, k)); }

  /// phi(pi_(h,k)(x)), h-slot first.
  Rational v_pair(IndexKey h, IndexKey k, const FamElement& x) const {
    if (h == k) throw std::invalid_argument("v_pair needs h != k");
    const Nil2Group& pg = fam_->pair_group(h, k);
    return phi_(pg, fam_->proj_pair(x, h, k));
  }

  /// Exact value through the finite split: pairs inside the support, plus
  /// pairs with one index outside, where pi_(h,k)(x) is i1(x_h) or i2(x_k)
  /// and the weights outside the support sum to the tail total minus the
  /// weights inside.
  Rational u(const FamElement& x) const {
    const std::set<IndexKey> s = fam_->support(x);
    const DyadicRational total = tail_total(G());
    const Nil2Group& pg = fam_->uniform_pair_group();
    Rational acc = 0;
    for (auto h : s)
      for (auto k : s)
        if (h != k) acc += weight(h, k).to_rational() * v_pair(h, k, x);
    for (auto h : s) {
      auto it = x.comps.find(h);
      if (it == x.comps.end()) continue;
      DyadicRational out_first = total, out_second = total;
      for (auto k : s) {
        if (k == h) continue;
        out_first -= weight(h, k);
        out_second -= weight(k, h);
      }
      Rational first = phi_(pg, pg.embed_A(it->second));
      Rational second = phi_(pg, pg.embed_B(it->second));
      acc += out_first.to_rational() * first + out_second.to_rational() * second;
    }
    return acc;
  }

  /// Direct double sum over all ordered pairs; finite G only.
  Rational u_direct(const FamElement& x) const {
    const auto& keys = fam_->keys();
    Rational acc = 0;
    for (auto h : keys)
      for (auto k : keys)
        if (h != k) acc += weight(h, k).to_rational() * v_pair(h, k, x);
    return acc;
  }

 private:
  std::shared_ptr<const FamilyGroup> fam_;
  CNDOnPair phi_;
};

/// Q = sum c_i c_j u(x_i^-1 x_j); conditional negative definiteness asks
/// for Q <= 0 whenever the coefficients sum to zero.
inline Rational cnd_gram_check(const HaagerupFunction& u, const std::vector<FamElement>& points,
                               const std::vector<Rational>& coeffs) {
  if (points.size() != coeffs.size()) throw std::invalid_argument("one coefficient per point is required");
  Rational sum = 0;
  for (const auto& c : coeffs) sum += c;
  if (sum != 0) throw std::invalid_argument("coefficients must sum to zero");
  const FamilyGroup& fam = u.family();
  std::vector<FamElement> inverses;
  for (const auto& p : points) inverses.push_back(fam.inv(p));
  Rational q = 0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (coeffs[i] == 0 || coeffs[j] == 0) continue;
      q += coeffs[i] * coeffs[j] * u.u(fam.mul(inverses[i], points[j]));
    }
  return q;
}

/// Sublevel set {x : supp(x) in F, u(x) <= M} and the containment of it in
/// the box {v_(a,b)(x) <= 2^N M for all a != b in F}, N = max psi(a^-1 b).
struct PropernessReport {
  std::vector<IndexKey> F;
  Rational M;
  std::uint64_t N = 0;
  std::size_t window_size = 0;     // |{x : supp(x) in F}|
  BigInt expected_window_size;     // order of the family over F
  std::vector<FamElement> sublevel;
  std::size_t box_size = 0;        // |{x in window : inside the box}|
  bool contained = true;
  std::optional<FamElement> violation;
};

inline PropernessReport properness_check(const HaagerupFunction& u, const std::set<IndexKey>& F, const Rational& M) {
  const FamilyGroup& fam = u.family();
  if (!fam.member(0).is_finite()) throw std::domain_error("properness_check needs a finite H");
  if (F.empty()) throw std::invalid_argument("properness_check needs a nonempty F");
  PropernessReport rep;
  rep.F.assign(F.begin(), F.end());
  rep.M = M;
  for (auto a : F)
    for (auto b : F)
      if (a != b) rep.N = std::max(rep.N, u.psi_between(a, b));
  const std::size_t f = F.size();
  rep.expected_window_size = boost::multiprecision::pow(fam.member(0).order().value(), static_cast<unsigned>(f)) *
                             boost::multiprecision::pow(fam.uniform_pair_group().T().order().value(),
                                                        static_cast<unsigned>(f * (f - 1) / 2));
  auto window = fam.restricted(F);
  const std::uint64_t n = detail::finite_size(window->order(), window->name());
  const Rational bound = Rational(BigInt(1) << rep.N) * M;
  for (std::uint64_t r = 0; r < n; ++r) {
    FamElement x = window->unrank(r);
    auto supp = fam.support(x);
    if (std::includes(F.begin(), F.end(), supp.begin(), supp.end()) && fam.contains(x)) ++rep.window_size;
    bool in_box = true;
    for (auto a : F)
      for (auto b : F)
        if (a != b && u.v_pair(a, b, x) > bound) in_box = false;
    if (in_box) ++rep.box_size;
    if (u.u(x) <= M) {
      if (!in_box && rep.contained) {
        rep.contained = false;
        rep.violation = x;
      }
      rep.sublevel.push_back(std::move(x));
    }
  }
  return rep;
}

}  // namespace nilprod
