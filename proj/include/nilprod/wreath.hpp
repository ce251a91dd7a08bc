#pragma once

// Restricted second nilpotent wreath product (*2_G H) x| G, with G acting by
// left translation of indices, and its quotient onto the classical restricted
// wreath product (+_G A) x| G for abelian A.

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nilprod/groups.hpp"
#include "nilprod/nilfam.hpp"
#include "nilprod/wrap.hpp"

namespace nilprod {

/// g . x for a group-indexed family: index i moves to g i. A pair i < j whose
/// images come out in the opposite order is rewritten on (gj, gi) through the
/// same rule as a reversed projection: -swap(t) - x_j (x) x_i.
inline FamElement shift(const FamilyGroup& fam, const GroupElement& g, const FamElement& x) {
  const GroupHandle& G = fam.index_group();
  auto move = [&](IndexKey k) -> IndexKey { return G.rank(G.mul(g, G.unrank(k))); };
  FamElement r;
  std::map<IndexKey, IndexKey> image;
  for (const auto& [k, v] : x.comps) {
    IndexKey gk = move(k);
    image.emplace(k, gk);
    r.comps.emplace(gk, v);
  }
  auto img = [&](IndexKey k) {
    auto it = image.find(k);
    if (it != image.end()) return it->second;
    IndexKey gk = move(k);
    image.emplace(k, gk);
    return gk;
  };
  std::set<IndexPair> pairs;
  for (const auto& [p, v] : x.tens) pairs.insert(p);
  for (auto it = x.comps.begin(); it != x.comps.end(); ++it)
    for (auto jt = std::next(it); jt != x.comps.end(); ++jt) pairs.insert({it->first, jt->first});
  for (const auto& [i, j] : pairs) {
    const IndexKey gi = img(i), gj = img(j);
    auto tv = x.tens.find({i, j});
    if (gi < gj) {
      if (tv != x.tens.end()) r.tens.emplace(IndexPair{gi, gj}, tv->second);
      continue;
    }
    // the pair now reads x_i x_j with i-slot at the larger index
    Nil2Element p = fam.proj_pair(x, i, j);
    const Nil2Group& pg = fam.pair_group(gj, gi);
    AbelianElement t = pg.T().sub(pg.T().neg(fam.grid(gi, gj).transpose(p.t)),
                                  pg.grid().elem(fam.member(j).abelianize(p.b), fam.member(i).abelianize(p.a)));
    if (!t.is_zero()) r.tens.emplace(IndexPair{gj, gi}, std::move(t));
  }
  return r;
}

struct WreathElement {
  FamElement base;
  GroupElement act;

  friend auto operator<=>(const WreathElement&, const WreathElement&) = default;
  friend bool operator==(const WreathElement&, const WreathElement&) = default;
};

class WreathGroup {
 public:
  using element_type = WreathElement;

  WreathGroup(GroupHandle h, GroupHandle g)
      : H_(std::move(h)), G_(std::move(g)), fam_(FamilyGroup::indexed(G_, H_)),
        ab_(direct_sum(H_.abelianization(), G_.abelianization())) {}

  const GroupHandle& H() const { return H_; }
  const GroupHandle& G() const { return G_; }
  const FamilyGroup& base() const { return *fam_; }
  const std::shared_ptr<const FamilyGroup>& base_ptr() const { return fam_; }

  std::string name() const { return "wreath(" + H_.name() + ", " + G_.name() + ")"; }

  WreathElement identity() const { return {fam_->identity(), G_.identity()}; }

  /// (x, g)(y, h) = (x . g.y, gh)
  WreathElement mul(const WreathElement& x, const WreathElement& y) const {
    return {fam_->mul(x.base, shift(*fam_, x.act, y.base)), G_.mul(x.act, y.act)};
  }
  WreathElement inv(const WreathElement& x) const {
    GroupElement gi = G_.inv(x.act);
    return {shift(*fam_, gi, fam_->inv(x.base)), std::move(gi)};
  }

  WreathElement embed_base(const FamElement& x) const { return {x, G_.identity()}; }
  WreathElement embed_act(const GroupElement& g) const { return {fam_->identity(), g}; }

  /// H's generators at the identity index, then G's generators.
  std::vector<WreathElement> generators() const {
    std::vector<WreathElement> out;
    const IndexKey e = G_.rank(G_.identity());
    for (const auto& h : H_.generators())
      if (!H_.is_identity(h)) out.push_back(embed_base(fam_->embed(e, h)));
    for (const auto& g : G_.generators()) out.push_back(embed_act(g));
    return out;
  }

  Cardinal order() const { return fam_->order() * G_.order(); }

  bool contains(const WreathElement& x) const { return fam_->contains(x.base) && G_.contains(x.act); }

  /// Ab(H) + Ab(G): (x, g) -> (sum of the components' images, image of g).
  const FGAbelian& abelianization() const { return ab_; }
  AbelianElement abelianize(const WreathElement& x) const {
    const FGAbelian& ah = H_.abelianization();
    AbelianElement s = ah.zero();
    for (const auto& [k, v] : x.base.comps) s = ah.add(s, H_.abelianize(v));
    auto g = G_.abelianize(x.act).coords;
    s.coords.insert(s.coords.end(), g.begin(), g.end());
    return s;
  }

  bool is_abelian() const {
    bool g_trivial = G_.order() == Cardinal(1), h_trivial = H_.order() == Cardinal(1);
    return (h_trivial && G_.is_abelian()) || (g_trivial && H_.is_abelian());
  }

  std::uint64_t rank(const WreathElement& x) const {
    return fam_->rank(x.base) * detail::finite_size(G_.order(), G_.name()) + G_.rank(x.act);
  }
  WreathElement unrank(std::uint64_t r) const {
    std::uint64_t n = detail::finite_size(G_.order(), G_.name());
    return {fam_->unrank(r / n), G_.unrank(r % n)};
  }

  /// "(base | g)"
  std::string format(const WreathElement& x) const { return "(" + fam_->format(x.base) + " | " + G_.format(x.act) + ")"; }
  WreathElement parse(std::string_view text) const {
    text = detail::trim(text);
    if (text.size() < 2 || text.front() != '(' || text.back() != ')')
      throw LiteralError("wreath literal must look like (base | g)");
    auto parts = detail::split_top(text.substr(1, text.size() - 2), '|');
    if (parts.size() != 2) throw LiteralError("wreath literal must look like (base | g)");
    return {fam_->parse(parts[0]), G_.parse(parts[1])};
  }

  GroupElement encode(const WreathElement& x) const {
    detail::PayloadWriter w;
    w.put_vec(fam_->encode(x.base).payload);
    w.put_vec(x.act.payload);
    return std::move(w).finish();
  }
  WreathElement decode(const GroupElement& p) const {
    detail::PayloadReader r(p);
    WreathElement x{fam_->decode(GroupElement{r.get_vec()}), GroupElement{r.get_vec()}};
    r.expect_end();
    return x;
  }

 private:
  GroupHandle H_, G_;
  std::shared_ptr<const FamilyGroup> fam_;
  FGAbelian ab_;
};

inline std::shared_ptr<const WreathGroup> make_wreath(GroupHandle h, GroupHandle g) {
  return std::make_shared<const WreathGroup>(std::move(h), std::move(g));
}

inline GroupHandle wreath(GroupHandle h, GroupHandle g) { return as_handle(make_wreath(std::move(h), std::move(g))); }

/// Element of (+_G A) x| G: finitely supported components and an acting
/// element. Keys are canonical ranks of G.
struct ClassicalElement {
  std::map<IndexKey, GroupElement> comps;
  GroupElement act;

  friend auto operator<=>(const ClassicalElement&, const ClassicalElement&) = default;
  friend bool operator==(const ClassicalElement&, const ClassicalElement&) = default;
};

/// The classical restricted wreath product of an abelian A by G, kept apart
/// from the nilpotent version so counting and homomorphism checks against it
/// are independent.
class ClassicalWreath {
 public:
  using element_type = ClassicalElement;

  ClassicalWreath(GroupHandle a, GroupHandle g) : A_(std::move(a)), G_(std::move(g)) {
    if (!A_.is_abelian()) throw std::invalid_argument("classical wreath product needs an abelian base, got " + A_.name());
    std::vector<std::int64_t> f = A_.abelianization().factors();
    const auto& gf = G_.abelianization().factors();
    f.insert(f.end(), gf.begin(), gf.end());
    ab_ = FGAbelian(std::move(f));
  }

  const GroupHandle& A() const { return A_; }
  const GroupHandle& G() const { return G_; }

  std::string name() const { return "wr(" + A_.name() + ", " + G_.name() + ")"; }
  ClassicalElement identity() const { return {{}, G_.identity()}; }

  /// (f, g)(f', h) = (f + g.f', gh) with (g.f')(g i) = f'(i).
  ClassicalElement mul(const ClassicalElement& x, const ClassicalElement& y) const {
    ClassicalElement r{x.comps, G_.mul(x.act, y.act)};
    for (const auto& [k, v] : y.comps) {
      IndexKey gk = G_.rank(G_.mul(x.act, G_.unrank(k)));
      auto [it, fresh] = r.comps.emplace(gk, v);
      if (fresh) continue;
      it->second = A_.mul(it->second, v);
      if (A_.is_identity(it->second)) r.comps.erase(it);
    }
    return r;
  }
  ClassicalElement inv(const ClassicalElement& x) const {
    GroupElement gi = G_.inv(x.act);
    ClassicalElement r{{}, gi};
    for (const auto& [k, v] : x.comps) r.comps.emplace(G_.rank(G_.mul(gi, G_.unrank(k))), A_.inv(v));
    return r;
  }
  std::vector<ClassicalElement> generators() const {
    std::vector<ClassicalElement> out;
    const IndexKey e = G_.rank(G_.identity());
    for (const auto& a : A_.generators())
      if (!A_.is_identity(a)) out.push_back({{{e, a}}, G_.identity()});
    for (const auto& g : G_.generators()) out.push_back({{}, g});
    return out;
  }
  /// |A|^|G| |G|
  Cardinal order() const {
    if (!G_.is_finite()) return A_.order() == Cardinal(1) ? G_.order() : Cardinal::infinite();
    if (!A_.is_finite()) return Cardinal::infinite();
    BigInt n = G_.order().value();
    return Cardinal(boost::multiprecision::pow(A_.order().value(), n.convert_to<unsigned>()) * n);
  }
  bool contains(const ClassicalElement& x) const {
    if (!G_.contains(x.act)) return false;
    if (G_.is_finite()) {
      std::uint64_t n = detail::finite_size(G_.order(), G_.name());
      for (const auto& [k, v] : x.comps)
        if (k >= n) return false;
    }
    for (const auto& [k, v] : x.comps)
      if (!A_.contains(v) || A_.is_identity(v)) return false;
    return true;
  }
  const FGAbelian& abelianization() const { return ab_; }
  AbelianElement abelianize(const ClassicalElement& x) const {
    const FGAbelian& aa = A_.abelianization();
    AbelianElement s = aa.zero();
    for (const auto& [k, v] : x.comps) s = aa.add(s, A_.abelianize(v));
    auto g = G_.abelianize(x.act).coords;
    s.coords.insert(s.coords.end(), g.begin(), g.end());
    return s;
  }
  bool is_abelian() const { return A_.order() == Cardinal(1) ? G_.is_abelian() : G_.order() == Cardinal(1); }

  std::uint64_t rank(const ClassicalElement& x) const {
    std::uint64_t n = detail::finite_size(G_.order(), G_.name());
    std::uint64_t na = detail::finite_size(A_.order(), A_.name());
    std::uint64_t r = 0;
    for (IndexKey k = 0; k < n; ++k) {
      auto it = x.comps.find(k);
      r = r * na + (it == x.comps.end() ? 0 : A_.rank(it->second));
    }
    return r * n + G_.rank(x.act);
  }
  ClassicalElement unrank(std::uint64_t r) const {
    std::uint64_t n = detail::finite_size(G_.order(), G_.name());
    std::uint64_t na = detail::finite_size(A_.order(), A_.name());
    ClassicalElement x{{}, G_.unrank(r % n)};
    r /= n;
    for (IndexKey k = n; k-- > 0;) {
      GroupElement v = A_.unrank(r % na);
      r /= na;
      if (!A_.is_identity(v)) x.comps.emplace(k, std::move(v));
    }
    if (r != 0) throw std::out_of_range("rank out of range for " + name());
    return x;
  }

  /// "({i: a, ...} | g)"
  std::string format(const ClassicalElement& x) const {
    std::string s = "({";
    bool first = true;
    for (const auto& [k, v] : x.comps) {
      s += (first ? "" : ", ") + G_.format(G_.unrank(k)) + ": " + A_.format(v);
      first = false;
    }
    return s + "} | " + G_.format(x.act) + ")";
  }
  ClassicalElement parse(std::string_view text) const {
    text = detail::trim(text);
    if (text.size() < 2 || text.front() != '(' || text.back() != ')')
      throw LiteralError("classical wreath literal must look like ({i: a, ...} | g)");
    auto parts = detail::split_top(text.substr(1, text.size() - 2), '|');
    if (parts.size() != 2) throw LiteralError("classical wreath literal must look like ({i: a, ...} | g)");
    auto base = detail::trim(parts[0]);
    if (base.size() < 2 || base.front() != '{' || base.back() != '}') throw LiteralError("base must be braced");
    ClassicalElement x{{}, G_.parse(parts[1])};
    auto inner = detail::trim(base.substr(1, base.size() - 2));
    if (!inner.empty())
      for (auto entry : detail::split_top(inner, ',')) {
        auto kv = detail::split_top(entry, ':');
        if (kv.size() != 2) throw LiteralError("component entry must look like i: a");
        IndexKey k = G_.rank(G_.parse(kv[0]));
        GroupElement v = A_.parse(kv[1]);
        if (x.comps.count(k)) throw LiteralError("duplicate component index");
        if (!A_.is_identity(v)) x.comps.emplace(k, std::move(v));
      }
    return x;
  }

  GroupElement encode(const ClassicalElement& x) const {
    detail::PayloadWriter w;
    w.put(static_cast<std::int64_t>(x.comps.size()));
    for (const auto& [k, v] : x.comps) {
      w.put(static_cast<std::int64_t>(k));
      w.put_vec(v.payload);
    }
    w.put_vec(x.act.payload);
    return std::move(w).finish();
  }
  ClassicalElement decode(const GroupElement& p) const {
    detail::PayloadReader r(p);
    ClassicalElement x;
    std::int64_t n = r.get();
    if (n < 0) throw std::invalid_argument("malformed classical wreath payload");
    for (std::int64_t i = 0; i < n; ++i) {
      auto k = static_cast<IndexKey>(r.get());
      x.comps.emplace(k, GroupElement{r.get_vec()});
    }
    x.act = GroupElement{r.get_vec()};
    r.expect_end();
    return x;
  }

 private:
  GroupHandle A_, G_;
  FGAbelian ab_;
};

/// Drops the tensor part: (x, g) -> (components of x, g). Needs abelian H.
inline ClassicalElement quotient_to_classical(const WreathGroup& w, const WreathElement& x) {
  if (!w.H().is_abelian()) throw std::invalid_argument("quotient to the classical wreath product needs abelian H");
  return {x.base.comps, x.act};
}

}  // namespace nilprod
