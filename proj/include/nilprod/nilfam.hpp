#pragma once

// Second nilpotent product of a family {H_i} over a totally ordered index
// set. Indices are keys in N compared numerically: explicit labels for finite
// lists, canonical ranks for group-indexed families (so the identity of the
// index group has key 0).

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nilprod/abelian.hpp"
#include "nilprod/groups.hpp"
#include "nilprod/nilprod2.hpp"
#include "nilprod/wrap.hpp"

namespace nilprod {

using IndexKey = std::uint64_t;
using IndexPair = std::pair<IndexKey, IndexKey>;

/// Sparse normal form: non-identity components and nonzero tensor
/// coordinates on pairs (i, j) with i < j.
struct FamElement {
  std::map<IndexKey, GroupElement> comps;
  std::map<IndexPair, AbelianElement> tens;

  bool is_identity() const { return comps.empty() && tens.empty(); }

  friend auto operator<=>(const FamElement&, const FamElement&) = default;
  friend bool operator==(const FamElement&, const FamElement&) = default;
};

class FamilyGroup {
 public:
  using element_type = FamElement;

  /// Finite list H_1, ..., H_k; labels default to 1..k and must increase.
  static std::shared_ptr<const FamilyGroup> list(std::vector<GroupHandle> groups, std::vector<IndexKey> labels = {}) {
    if (groups.empty()) throw std::invalid_argument("family needs at least one group");
    if (labels.empty())
      for (std::size_t i = 0; i < groups.size(); ++i) labels.push_back(i + 1);
    if (labels.size() != groups.size()) throw std::invalid_argument("one label per group is required");
    for (std::size_t i = 1; i < labels.size(); ++i)
      if (labels[i - 1] >= labels[i]) throw std::invalid_argument("family labels must be strictly increasing");
    auto f = std::shared_ptr<FamilyGroup>(new FamilyGroup());
    f->keys_ = labels;
    for (std::size_t i = 0; i < groups.size(); ++i) f->members_.emplace(labels[i], std::move(groups[i]));
    f->init();
    return f;
  }

  /// One copy of H per element of G, ordered by G's canonical enumeration.
  static std::shared_ptr<const FamilyGroup> indexed(GroupHandle g, GroupHandle h) {
    auto f = std::shared_ptr<FamilyGroup>(new FamilyGroup());
    f->G_ = std::move(g);
    f->H_ = std::move(h);
    if (f->G_->is_finite()) {
      auto n = detail::finite_size(f->G_->order(), f->G_->name());
      for (IndexKey k = 0; k < n; ++k) f->keys_->push_back(k);
    } else {
      f->keys_.reset();
    }
    f->init();
    return f;
  }

  /// The same family restricted to a finite set of indices.
  std::shared_ptr<const FamilyGroup> restricted(const std::set<IndexKey>& keys) const {
    auto f = std::shared_ptr<FamilyGroup>(new FamilyGroup());
    f->G_ = G_;
    f->H_ = H_;
    f->keys_ = std::vector<IndexKey>(keys.begin(), keys.end());
    for (auto k : keys) {
      if (!has_key(k)) throw std::invalid_argument("restriction to an index outside the family");
      if (!H_) f->members_.emplace(k, members_.at(k));
    }
    f->init();
    return f;
  }

  bool is_group_indexed() const { return G_.has_value(); }
  const GroupHandle& index_group() const {
    if (!G_) throw std::logic_error("family is not group-indexed");
    return *G_;
  }
  bool has_finite_index() const { return keys_.has_value(); }
  /// Indices in order; finite index sets only.
  const std::vector<IndexKey>& keys() const {
    if (!keys_) throw std::domain_error("index set of " + name() + " is infinite");
    return *keys_;
  }
  bool has_key(IndexKey k) const {
    if (keys_) return std::binary_search(keys_->begin(), keys_->end(), k);
    return true;
  }

  const GroupHandle& member(IndexKey k) const {
    if (H_) return *H_;
    auto it = members_.find(k);
    if (it == members_.end()) throw std::invalid_argument("no group at index " + std::to_string(k));
    return it->second;
  }

  /// H_i *2 H_j with the i-slot first (either order of i, j).
  const Nil2Group& pair_group(IndexKey i, IndexKey j) const {
    if (i == j) throw std::invalid_argument("pair_group needs distinct indices");
    if (H_) return *hh_;
    return *pairs_.at({i, j});
  }
  const TensorGrid& grid(IndexKey i, IndexKey j) const { return pair_group(i, j).grid(); }
  /// H *2 H for a group-indexed family.
  const Nil2Group& uniform_pair_group() const {
    if (!hh_) throw std::logic_error("family members differ");
    return *hh_;
  }

  std::string format_key(IndexKey k) const {
    if (G_) return G_->format(G_->unrank(k));
    return std::to_string(k);
  }
  IndexKey parse_key(std::string_view s) const {
    IndexKey k;
    if (G_) {
      k = G_->rank(G_->parse(s));
    } else {
      std::int64_t v = detail::parse_int(s);
      if (v < 0) throw LiteralError("negative family index");
      k = static_cast<IndexKey>(v);
    }
    if (!has_key(k)) throw LiteralError("index '" + std::string(detail::trim(s)) + "' is not in the family");
    return k;
  }

  std::string name() const {
    if (G_) {
      std::string s = "nil[" + G_->name() + "](" + H_->name();
      if (keys_ && (!G_->is_finite() || keys_->size() != detail::finite_size(G_->order(), G_->name()))) {
        s += "; ";
        for (std::size_t i = 0; i < keys_->size(); ++i) s += (i ? "," : "") + format_key((*keys_)[i]);
      }
      return s + ")";
    }
    std::string s = "nil(";
    for (std::size_t i = 0; i < keys_->size(); ++i) s += (i ? ", " : "") + members_.at((*keys_)[i]).name();
    return s + ")";
  }

  FamElement identity() const { return {}; }

  /// Components multiply pointwise; for i < j the coordinate gains
  /// -(y_i (x) x_j) from moving y's letter at i left past x's letter at j.
  FamElement mul(const FamElement& x, const FamElement& y) const {
    FamElement r;
    r.comps = x.comps;
    for (const auto& [k, v] : y.comps) {
      auto [it, fresh] = r.comps.emplace(k, v);
      if (fresh) continue;
      const GroupHandle& h = member(k);
      it->second = h.mul(it->second, v);
      if (h.is_identity(it->second)) r.comps.erase(it);
    }
    r.tens = x.tens;
    for (const auto& [p, v] : y.tens) add_tens(r, p, v);
    for (const auto& [i, yi] : y.comps) {
      const AbelianElement ai = member(i).abelianize(yi);
      for (auto it = x.comps.upper_bound(i); it != x.comps.end(); ++it) {
        const IndexKey j = it->first;
        const TensorGrid& g = grid(i, j);
        add_tens(r, {i, j}, g.group().neg(g.elem(ai, member(j).abelianize(it->second))));
      }
    }
    return r;
  }

  FamElement inv(const FamElement& x) const {
    FamElement r;
    std::map<IndexKey, AbelianElement> ab;
    for (const auto& [k, v] : x.comps) {
      r.comps.emplace(k, member(k).inv(v));
      ab.emplace(k, member(k).abelianize(v));
    }
    for (const auto& [p, v] : x.tens) add_tens(r, p, grid(p.first, p.second).group().neg(v));
    for (auto it = ab.begin(); it != ab.end(); ++it)
      for (auto jt = std::next(it); jt != ab.end(); ++jt) {
        const TensorGrid& g = grid(it->first, jt->first);
        add_tens(r, {it->first, jt->first}, g.group().neg(g.elem(it->second, jt->second)));
      }
    return r;
  }

  /// Embedding of H_k at index k.
  FamElement embed(IndexKey k, const GroupElement& h) const {
    if (!has_key(k)) throw std::invalid_argument("embed at an index outside the family");
    FamElement r;
    if (!member(k).is_identity(h)) r.comps.emplace(k, h);
    return r;
  }

  /// Finite index sets only.
  std::vector<FamElement> generators() const {
    std::vector<FamElement> out;
    for (auto k : keys())
      for (const auto& g : member(k).generators())
        if (!member(k).is_identity(g)) out.push_back(embed(k, g));
    return out;
  }

  /// prod |H_i| . prod_{i<j} |Ab(H_i) (x) Ab(H_j)|
  Cardinal order() const {
    if (!keys_) {
      if (H_->order() == Cardinal(1)) return Cardinal(1);
      return Cardinal::infinite();
    }
    Cardinal c(1);
    for (auto k : *keys_) c *= member(k).order();
    for (std::size_t a = 0; a < keys_->size(); ++a)
      for (std::size_t b = a + 1; b < keys_->size(); ++b) c *= grid((*keys_)[a], (*keys_)[b]).group().order();
    return c;
  }

  bool contains(const FamElement& x) const {
    for (const auto& [k, v] : x.comps)
      if (!has_key(k) || !member(k).contains(v) || member(k).is_identity(v)) return false;
    for (const auto& [p, v] : x.tens) {
      if (p.first >= p.second || !has_key(p.first) || !has_key(p.second)) return false;
      const FGAbelian& t = grid(p.first, p.second).group();
      if (!t.contains(v) || v.is_zero()) return false;
    }
    return true;
  }

  /// Sum of Ab(H_i) over the (finite) index set, coordinates concatenated in
  /// index order.
  const FGAbelian& abelianization() const {
    if (!keys_) throw std::domain_error("abelianization of " + name() + " is not finitely generated");
    return ab_;
  }
  AbelianElement abelianize(const FamElement& x) const {
    AbelianElement r;
    for (auto k : keys()) {
      auto it = x.comps.find(k);
      auto c = it == x.comps.end() ? member(k).abelianization().zero() : member(k).abelianize(it->second);
      r.coords.insert(r.coords.end(), c.coords.begin(), c.coords.end());
    }
    return r;
  }

  bool is_abelian() const {
    if (!keys_) return H_->is_abelian() && hh_->T().is_trivial();
    for (auto k : *keys_)
      if (!member(k).is_abelian()) return false;
    for (std::size_t a = 0; a < keys_->size(); ++a)
      for (std::size_t b = a + 1; b < keys_->size(); ++b)
        if (!grid((*keys_)[a], (*keys_)[b]).group().is_trivial()) return false;
    return true;
  }

  /// Mixed radix: components in index order, then pair coordinates in
  /// lexicographic pair order (last digit least significant).
  std::uint64_t rank(const FamElement& x) const {
    check_rankable();
    std::uint64_t r = 0;
    for (auto k : *keys_) {
      auto it = x.comps.find(k);
      const GroupHandle& h = member(k);
      r = r * detail::finite_size(h.order(), h.name()) + (it == x.comps.end() ? 0 : h.rank(it->second));
    }
    for (std::size_t a = 0; a < keys_->size(); ++a)
      for (std::size_t b = a + 1; b < keys_->size(); ++b) {
        IndexPair p{(*keys_)[a], (*keys_)[b]};
        const FGAbelian& t = grid(p.first, p.second).group();
        auto it = x.tens.find(p);
        r = r * detail::finite_size(t.order(), "tensor part") + (it == x.tens.end() ? 0 : detail::abelian_rank(t, it->second));
      }
    return r;
  }

  FamElement unrank(std::uint64_t r) const {
    check_rankable();
    FamElement x;
    const auto& ks = *keys_;
    for (std::size_t a = ks.size(); a-- > 0;)
      for (std::size_t b = ks.size(); b-- > a + 1;) {
        const FGAbelian& t = grid(ks[a], ks[b]).group();
        std::uint64_t n = detail::finite_size(t.order(), "tensor part");
        AbelianElement v = detail::abelian_unrank(t, r % n);
        r /= n;
        if (!v.is_zero()) x.tens.emplace(IndexPair{ks[a], ks[b]}, std::move(v));
      }
    for (std::size_t a = ks.size(); a-- > 0;) {
      const GroupHandle& h = member(ks[a]);
      std::uint64_t n = detail::finite_size(h.order(), h.name());
      GroupElement v = h.unrank(r % n);
      r /= n;
      if (!h.is_identity(v)) x.comps.emplace(ks[a], std::move(v));
    }
    if (r != 0) throw std::out_of_range("rank out of range for " + name());
    return x;
  }

  /// "{i: h, ... | (i,j): (c,...), ...}"; the identity is "{}".
  std::string format(const FamElement& x) const {
    std::string s = "{";
    bool first = true;
    for (const auto& [k, v] : x.comps) {
      s += (first ? "" : ", ") + format_key(k) + ": " + member(k).format(v);
      first = false;
    }
    if (!x.tens.empty()) {
      s += first ? "| " : " | ";
      first = true;
      for (const auto& [p, v] : x.tens) {
        s += (first ? "" : ", ") + std::string("(") + format_key(p.first) + "," + format_key(p.second) +
             "): " + detail::format_tuple(v.coords);
        first = false;
      }
    }
    return s + "}";
  }

  FamElement parse(std::string_view text) const {
    text = detail::trim(text);
    if (text.size() < 2 || text.front() != '{' || text.back() != '}')
      throw LiteralError("family literal must look like {i: h, ... | (i,j): t, ...}");
    auto halves = detail::split_top(text.substr(1, text.size() - 2), '|');
    if (halves.size() > 2) throw LiteralError("family literal has more than one '|'");
    FamElement x;
    for (auto entry : split_entries(halves[0])) {
      auto kv = detail::split_top(entry, ':');
      if (kv.size() != 2) throw LiteralError("component entry must look like i: h");
      IndexKey k = parse_key(kv[0]);
      GroupElement v = member(k).parse(kv[1]);
      if (x.comps.count(k)) throw LiteralError("duplicate component index");
      if (!member(k).is_identity(v)) x.comps.emplace(k, std::move(v));
    }
    if (halves.size() == 2)
      for (auto entry : split_entries(halves[1])) {
        auto kv = detail::split_top(entry, ':');
        if (kv.size() != 2) throw LiteralError("tensor entry must look like (i,j): t");
        auto pk = detail::trim(kv[0]);
        if (pk.size() < 2 || pk.front() != '(' || pk.back() != ')') throw LiteralError("tensor key must look like (i,j)");
        auto ij = detail::split_top(pk.substr(1, pk.size() - 2), ',');
        if (ij.size() != 2) throw LiteralError("tensor key must name two indices");
        IndexPair p{parse_key(ij[0]), parse_key(ij[1])};
        if (p.first >= p.second) throw LiteralError("tensor key must list its indices in increasing order");
        const FGAbelian& t = grid(p.first, p.second).group();
        auto coords = detail::parse_tuple(kv[1]);
        if (coords.size() != t.rank()) throw LiteralError("tensor entry has the wrong number of coordinates");
        if (x.tens.count(p)) throw LiteralError("duplicate tensor entry");
        AbelianElement v = t.element(std::move(coords));
        if (!v.is_zero()) x.tens.emplace(p, std::move(v));
      }
    return x;
  }

  GroupElement encode(const FamElement& x) const {
    detail::PayloadWriter w;
    w.put(static_cast<std::int64_t>(x.comps.size()));
    for (const auto& [k, v] : x.comps) {
      w.put(static_cast<std::int64_t>(k));
      w.put_vec(v.payload);
    }
    w.put(static_cast<std::int64_t>(x.tens.size()));
    for (const auto& [p, v] : x.tens) {
      w.put(static_cast<std::int64_t>(p.first));
      w.put(static_cast<std::int64_t>(p.second));
      w.put_vec(v.coords);
    }
    return std::move(w).finish();
  }
  FamElement decode(const GroupElement& g) const {
    detail::PayloadReader r(g);
    FamElement x;
    std::int64_t n = r.get();
    if (n < 0) throw std::invalid_argument("malformed family payload");
    for (std::int64_t i = 0; i < n; ++i) {
      auto k = static_cast<IndexKey>(r.get());
      x.comps.emplace(k, GroupElement{r.get_vec()});
    }
    n = r.get();
    if (n < 0) throw std::invalid_argument("malformed family payload");
    for (std::int64_t i = 0; i < n; ++i) {
      auto a = static_cast<IndexKey>(r.get());
      auto b = static_cast<IndexKey>(r.get());
      x.tens.emplace(IndexPair{a, b}, AbelianElement{r.get_vec()});
    }
    r.expect_end();
    return x;
  }

  /// Erases every letter outside S.
  FamElement proj_S(const FamElement& x, const std::set<IndexKey>& s) const {
    FamElement r;
    for (const auto& [k, v] : x.comps)
      if (s.count(k)) r.comps.emplace(k, v);
    for (const auto& [p, v] : x.tens)
      if (s.count(p.first) && s.count(p.second)) r.tens.emplace(p, v);
    return r;
  }

  /// Image in H_i *2 H_j with the i-slot first. For i > j the stored
  /// coordinate t(j,i) is read through [y, x] = [x, y]^-1 and the letters
  /// x_j x_i are reordered: t = -swap(t(j,i)) - x_i (x) x_j.
  Nil2Element proj_pair(const FamElement& x, IndexKey i, IndexKey j) const {
    const Nil2Group& g = pair_group(i, j);
    Nil2Element r = g.identity();
    if (auto it = x.comps.find(i); it != x.comps.end()) r.a = it->second;
    if (auto it = x.comps.find(j); it != x.comps.end()) r.b = it->second;
    if (i < j) {
      if (auto it = x.tens.find({i, j}); it != x.tens.end()) r.t = it->second;
      return r;
    }
    const FGAbelian& t = g.T();
    if (auto it = x.tens.find({j, i}); it != x.tens.end()) r.t = t.neg(grid(j, i).transpose(it->second));
    r.t = t.sub(r.t, g.grid().elem(member(i).abelianize(r.a), member(j).abelianize(r.b)));
    return r;
  }

  /// Indices carrying a nontrivial component or a nonzero tensor coordinate.
  std::set<IndexKey> support(const FamElement& x) const {
    std::set<IndexKey> s;
    for (const auto& [k, v] : x.comps) s.insert(k);
    for (const auto& [p, v] : x.tens) {
      s.insert(p.first);
      s.insert(p.second);
    }
    return s;
  }

  /// Indices i for which some j != i has proj_pair(x, i, j) outside the
  /// j-factor. Candidates j: the direct support plus one index beyond it.
  std::set<IndexKey> support_via_projections(const FamElement& x) const {
    const std::set<IndexKey> direct = support(x);
    std::set<IndexKey> probes = direct;
    if (auto outside = index_outside(direct)) probes.insert(*outside);
    std::set<IndexKey> s;
    for (auto i : direct)
      for (auto j : probes) {
        if (j == i) continue;
        Nil2Element p = proj_pair(x, i, j);
        if (!member(i).is_identity(p.a) || !p.t.is_zero()) {
          s.insert(i);
          break;
        }
      }
    return s;
  }

  /// Some index not in `s`, if the index set has one.
  std::optional<IndexKey> index_outside(const std::set<IndexKey>& s) const {
    if (keys_) {
      for (auto k : *keys_)
        if (!s.count(k)) return k;
      return std::nullopt;
    }
    for (IndexKey k = 0;; ++k)
      if (!s.count(k)) return k;
  }

  /// [x, z] = x z x^-1 z^-1
  FamElement commutator(const FamElement& x, const FamElement& z) const { return mul(mul(x, z), mul(inv(x), inv(z))); }

 private:
  FamilyGroup() : keys_(std::vector<IndexKey>{}) {}

  void init() {
    if (H_) {
      hh_ = std::make_shared<const Nil2Group>(*H_, *H_);
    } else {
      for (auto i : *keys_)
        for (auto j : *keys_)
          if (i != j) pairs_.emplace(IndexPair{i, j}, std::make_shared<const Nil2Group>(members_.at(i), members_.at(j)));
    }
    if (keys_) {
      std::vector<std::int64_t> f;
      for (auto k : *keys_) {
        const auto& mf = member(k).abelianization().factors();
        f.insert(f.end(), mf.begin(), mf.end());
      }
      ab_ = FGAbelian(std::move(f));
    }
  }

  void check_rankable() const {
    if (!keys_) throw std::domain_error("no canonical enumeration for " + name() + ": index set is infinite");
  }

  void add_tens(FamElement& r, const IndexPair& p, const AbelianElement& v) const {
    if (v.is_zero()) return;
    auto [it, fresh] = r.tens.emplace(p, v);
    if (fresh) return;
    it->second = grid(p.first, p.second).group().add(it->second, v);
    if (it->second.is_zero()) r.tens.erase(it);
  }

  static std::vector<std::string_view> split_entries(std::string_view s) {
    std::vector<std::string_view> out;
    s = detail::trim(s);
    if (s.empty()) return out;
    for (auto e : detail::split_top(s, ',')) {
      e = detail::trim(e);
      if (e.empty()) throw LiteralError("empty entry in family literal");
      out.push_back(e);
    }
    return out;
  }

  std::optional<GroupHandle> G_, H_;
  std::optional<std::vector<IndexKey>> keys_;
  std::map<IndexKey, GroupHandle> members_;
  std::shared_ptr<const Nil2Group> hh_;
  std::map<IndexPair, std::shared_ptr<const Nil2Group>> pairs_;
  FGAbelian ab_;
};

inline GroupHandle nil_family(std::vector<GroupHandle> groups) {
  return as_handle(FamilyGroup::list(std::move(groups)));
}

/// Identification of *2 over I with *2 over the blocks of a partition of I,
/// each block carrying *2 of its members. Blocks are ordered by their least
/// index. The outer family labels blocks 1..b.
class Regrouping {
 public:
  Regrouping(std::shared_ptr<const FamilyGroup> fam, std::vector<std::vector<IndexKey>> partition)
      : fam_(std::move(fam)) {
    std::set<IndexKey> seen;
    for (auto& b : partition) {
      if (b.empty()) throw std::invalid_argument("partition has an empty block");
      std::sort(b.begin(), b.end());
      for (auto k : b)
        if (!fam_->has_key(k) || !seen.insert(k).second) throw std::invalid_argument("invalid partition");
    }
    if (seen.size() != fam_->keys().size()) throw std::invalid_argument("partition does not cover the index set");
    std::sort(partition.begin(), partition.end());
    blocks_ = std::move(partition);

    std::vector<GroupHandle> outer_members;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      block_groups_.push_back(fam_->restricted(std::set<IndexKey>(blocks_[b].begin(), blocks_[b].end())));
      outer_members.push_back(as_handle(block_groups_.back()));
      std::size_t off = 0;
      for (auto k : blocks_[b]) {
        offset_[k] = off;
        off += fam_->member(k).abelianization().rank();
      }
    }
    outer_ = FamilyGroup::list(std::move(outer_members));
  }

  const std::vector<std::vector<IndexKey>>& blocks() const { return blocks_; }
  const FamilyGroup& source() const { return *fam_; }
  const FamilyGroup& outer() const { return *outer_; }
  const std::shared_ptr<const FamilyGroup>& outer_ptr() const { return outer_; }
  const FamilyGroup& block_group(std::size_t b) const { return *block_groups_.at(b); }

  /// Within-block parts are proj_S; the cross coordinate between j in an
  /// earlier block and j' in a later one is proj_pair(x, j, j').
  FamElement forward(const FamElement& x) const {
    FamElement r;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
      FamElement y = fam_->proj_S(x, std::set<IndexKey>(blocks_[b].begin(), blocks_[b].end()));
      if (!y.is_identity()) r.comps.emplace(b + 1, block_groups_[b]->encode(y));
    }
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      for (std::size_t c = b + 1; c < blocks_.size(); ++c) {
        const TensorGrid& og = outer_->grid(b + 1, c + 1);
        AbelianElement v = og.group().zero();
        for (auto j : blocks_[b])
          for (auto jj : blocks_[c]) {
            Nil2Element p = fam_->proj_pair(x, j, jj);
            each_slot(j, jj, og, [&](std::size_t local, std::size_t outer) { v.coords[outer] = p.t.coords[local]; });
          }
        if (!v.is_zero()) r.tens.emplace(IndexPair{b + 1, c + 1}, std::move(v));
      }
    return r;
  }

  /// Inverse of forward. A cross coordinate c on (j, j') with j > j' is
  /// stored as t(j', j) = swap(-c - x_j (x) x_j').
  FamElement backward(const FamElement& y) const {
    FamElement x;
    for (const auto& [b, v] : y.comps) {
      FamElement part = block_groups_.at(b - 1)->decode(v);
      x.comps.insert(part.comps.begin(), part.comps.end());
      x.tens.insert(part.tens.begin(), part.tens.end());
    }
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      for (std::size_t c = b + 1; c < blocks_.size(); ++c) {
        const TensorGrid& og = outer_->grid(b + 1, c + 1);
        auto it = y.tens.find({b + 1, c + 1});
        for (auto j : blocks_[b])
          for (auto jj : blocks_[c]) {
            const Nil2Group& pg = fam_->pair_group(j, jj);
            AbelianElement cc = pg.T().zero();
            if (it != y.tens.end())
              each_slot(j, jj, og, [&](std::size_t local, std::size_t outer) { cc.coords[local] = it->second.coords[outer]; });
            if (j < jj) {
              if (!cc.is_zero()) x.tens[{j, jj}] = cc;
              continue;
            }
            AbelianElement u = pg.T().sub(pg.T().neg(cc), pg.grid().elem(fam_->member(j).abelianize(comp_or_identity(x, j)),
                                                                          fam_->member(jj).abelianize(comp_or_identity(x, jj))));
            AbelianElement t = pg.grid().transpose(u);
            if (!t.is_zero()) x.tens[{jj, j}] = std::move(t);
          }
      }
    return x;
  }

 private:
  GroupElement comp_or_identity(const FamElement& x, IndexKey k) const {
    auto it = x.comps.find(k);
    return it == x.comps.end() ? fam_->member(k).identity() : it->second;
  }

  /// Calls f(local slot in grid(j, jj), slot in the outer block grid) for
  /// every slot of Ab(H_j) (x) Ab(H_jj).
  template <class F>
  void each_slot(IndexKey j, IndexKey jj, const TensorGrid& og, F&& f) const {
    const TensorGrid& lg = fam_->grid(j, jj);
    const std::size_t oj = offset_.at(j), ojj = offset_.at(jj);
    for (std::size_t p = 0; p < lg.left().rank(); ++p)
      for (std::size_t q = 0; q < lg.right().rank(); ++q)
        if (auto s = lg.slot(p, q)) f(*s, *og.slot(oj + p, ojj + q));
  }

  std::shared_ptr<const FamilyGroup> fam_;
  std::vector<std::vector<IndexKey>> blocks_;
  std::vector<std::shared_ptr<const FamilyGroup>> block_groups_;
  std::shared_ptr<const FamilyGroup> outer_;
  std::map<IndexKey, std::size_t> offset_;
};

/// [x, z] for x supported on J and z on I \ J: the commutator together with
/// whether it is purely central.
struct CentralBracket {
  FamElement value;
  bool central_only = false;
};

inline CentralBracket central_hom_check(const FamilyGroup& fam, const FamElement& x, const FamElement& z) {
  CentralBracket r{fam.commutator(x, z), false};
  r.central_only = r.value.comps.empty();
  return r;
}

}  // namespace nilprod
