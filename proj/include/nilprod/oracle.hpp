#pragma once

// Brute-force verifiers over explicitly enumerated finite groups: closure
// enumeration, axiom checks, isomorphism verification and search.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nilprod/group_algorithms.hpp"
#include "nilprod/groups.hpp"

namespace nilprod {

/// Finite group as an element list, closed under the group operation, with
/// an optional full multiplication table.
class EnumeratedGroup {
 public:
  /// Elements by closure of the generators (breadth-first from the identity).
  explicit EnumeratedGroup(GroupHandle g, std::size_t max_order = kMaxEnumeration, std::size_t table_limit = 256)
      : g_(std::move(g)) {
    elements_ = closure(g_, g_.generators(), max_order);
    for (std::size_t i = 0; i < elements_.size(); ++i) index_.emplace(elements_[i], i);
    for (const auto& s : g_.generators()) gens_.push_back(index(s));
    if (elements_.size() <= table_limit) build_table();
  }

  const GroupHandle& group() const { return g_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<GroupElement>& elements() const { return elements_; }
  const GroupElement& element(std::size_t i) const { return elements_.at(i); }
  std::size_t identity_index() const { return 0; }
  const std::vector<std::size_t>& generator_indices() const { return gens_; }

  std::optional<std::size_t> find(const GroupElement& x) const {
    auto it = index_.find(x);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t index(const GroupElement& x) const {
    auto i = find(x);
    if (!i) throw std::logic_error("element " + g_.format(x) + " escaped the enumeration of " + g_.name());
    return *i;
  }

  std::size_t mul(std::size_t i, std::size_t j) const {
    if (!table_.empty()) return table_[i * elements_.size() + j];
    return index(g_.mul(elements_[i], elements_[j]));
  }
  std::size_t inv(std::size_t i) const { return index(g_.inv(elements_[i])); }

  std::size_t element_order(std::size_t i) const {
    std::size_t k = 1;
    for (std::size_t y = i; y != 0; y = mul(y, i)) ++k;
    return k;
  }

  bool is_abelian() const {
    for (auto a : gens_)
      for (auto b : gens_)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  bool has_table() const { return !table_.empty(); }
  void build_table() {
    if (has_table()) return;
    const std::size_t n = elements_.size();
    std::vector<std::uint32_t> t(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) t[i * n + j] = static_cast<std::uint32_t>(index(g_.mul(elements_[i], elements_[j])));
    table_ = std::move(t);
  }

 private:
  GroupHandle g_;
  std::vector<GroupElement> elements_;
  std::map<GroupElement, std::size_t> index_;
  std::vector<std::size_t> gens_;
  std::vector<std::uint32_t> table_;
};

struct AxiomReport {
  bool ok = true;
  bool exhaustive = false;
  std::size_t checks = 0;
  std::string failure;
};

/// Identity and inverses for every element; associativity by Light's test
/// ((x a) y = x (a y) for generators a, which covers all triples) up to
/// `exhaustive_limit` elements, else on `samples` random triples.
inline AxiomReport check_axioms(EnumeratedGroup& g, std::size_t exhaustive_limit = 4096, std::size_t samples = 10000,
                                std::uint64_t seed = 1) {
  AxiomReport r;
  const std::size_t n = g.size();
  const std::size_t e = g.identity_index();
  const GroupHandle& h = g.group();
  if (!(g.element(e) == h.identity())) {
    r.ok = false;
    r.failure = "enumeration does not start at the identity";
    return r;
  }
  for (std::size_t x = 0; x < n; ++x) {
    r.checks += 3;
    std::size_t xi = g.inv(x);
    if (g.mul(e, x) != x || g.mul(x, e) != x) {
      r.ok = false;
      r.failure = "identity fails at " + h.format(g.element(x));
      return r;
    }
    if (g.mul(x, xi) != e || g.mul(xi, x) != e) {
      r.ok = false;
      r.failure = "inverse fails at " + h.format(g.element(x));
      return r;
    }
  }
  if (n <= exhaustive_limit) {
    r.exhaustive = true;
    g.build_table();
    for (auto a : g.generator_indices())
      for (std::size_t x = 0; x < n; ++x) {
        const std::size_t xa = g.mul(x, a);
        for (std::size_t y = 0; y < n; ++y) {
          ++r.checks;
          if (g.mul(xa, y) != g.mul(x, g.mul(a, y))) {
            r.ok = false;
            r.failure = "associativity fails at " + h.format(g.element(x)) + ", " + h.format(g.element(a)) + ", " +
                        h.format(g.element(y));
            return r;
          }
        }
      }
    return r;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    std::size_t x = pick(rng), y = pick(rng), z = pick(rng);
    ++r.checks;
    if (g.mul(g.mul(x, y), z) != g.mul(x, g.mul(y, z))) {
      r.ok = false;
      r.failure = "associativity fails at " + h.format(g.element(x)) + ", " + h.format(g.element(y)) + ", " +
                  h.format(g.element(z));
      return r;
    }
  }
  return r;
}

/// A bijection G -> H by element index, or the reason there is none.
struct IsoResult {
  bool ok = false;
  std::vector<std::size_t> map;
  std::string witness;
};

/// Checks that f is a bijection and f(xy) = f(x) f(y) for every pair.
inline IsoResult verify_isomorphism(const EnumeratedGroup& g, const EnumeratedGroup& h,
                                    const std::function<GroupElement(const GroupElement&)>& f) {
  IsoResult r;
  if (g.size() != h.size()) {
    r.witness = "orders differ: " + std::to_string(g.size()) + " vs " + std::to_string(h.size());
    return r;
  }
  const std::size_t n = g.size();
  std::vector<bool> hit(n, false);
  r.map.resize(n);
  for (std::size_t x = 0; x < n; ++x) {
    auto y = h.find(f(g.element(x)));
    if (!y) {
      r.witness = "image of " + g.group().format(g.element(x)) + " is outside the target";
      return r;
    }
    if (hit[*y]) {
      r.witness = "not injective at " + g.group().format(g.element(x));
      return r;
    }
    hit[*y] = true;
    r.map[x] = *y;
  }
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (r.map[g.mul(x, y)] != h.mul(r.map[x], r.map[y])) {
        r.witness = g.group().format(g.element(x)) + " * " + g.group().format(g.element(y));
        return r;
      }
  r.ok = true;
  return r;
}

/// Same check for a map given by indices.
inline IsoResult verify_isomorphism(const EnumeratedGroup& g, const EnumeratedGroup& h,
                                    const std::vector<std::size_t>& map) {
  if (map.size() != g.size()) return {false, {}, "map has the wrong length"};
  return verify_isomorphism(g, h, [&](const GroupElement& x) { return h.element(map.at(g.index(x))); });
}

namespace detail {

inline std::vector<std::size_t> order_profile(const EnumeratedGroup& g) {
  std::vector<std::size_t> p;
  for (std::size_t i = 0; i < g.size(); ++i) p.push_back(g.element_order(i));
  std::sort(p.begin(), p.end());
  return p;
}

/// Generators chosen greedily among elements of largest order.
inline std::vector<std::size_t> greedy_generators(const EnumeratedGroup& g) {
  std::vector<std::size_t> idx(g.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<std::size_t> ord(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) ord[i] = g.element_order(i);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return ord[a] > ord[b]; });
  std::vector<std::size_t> gens;
  std::vector<bool> in(g.size(), false);
  in[0] = true;
  std::size_t count = 1;
  for (auto x : idx) {
    if (count == g.size()) break;
    if (in[x]) continue;
    gens.push_back(x);
    std::vector<std::size_t> queue;
    for (std::size_t i = 0; i < g.size(); ++i)
      if (in[i]) queue.push_back(i);
    for (std::size_t head = 0; head < queue.size(); ++head)
      for (auto s : gens) {
        std::size_t y = g.mul(queue[head], s);
        if (!in[y]) {
          in[y] = true;
          ++count;
          queue.push_back(y);
        }
      }
  }
  return gens;
}

/// Extends images of gens[0..m) along the Cayley graph of the subgroup they
/// generate; fails on an inconsistent or non-injective edge.
inline bool extend_partial(const EnumeratedGroup& g, const EnumeratedGroup& h, const std::vector<std::size_t>& gens,
                           const std::vector<std::size_t>& images, std::size_t m, std::vector<std::size_t>& f) {
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  f.assign(g.size(), kUnset);
  std::vector<bool> used(h.size(), false);
  f[0] = 0;
  used[0] = true;
  std::vector<std::size_t> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t x = queue[head];
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t y = g.mul(x, gens[i]);
      const std::size_t fy = h.mul(f[x], images[i]);
      if (f[y] == kUnset) {
        if (used[fy]) return false;
        used[fy] = true;
        f[y] = fy;
        queue.push_back(y);
      } else if (f[y] != fy) {
        return false;
      }
    }
  }
  return true;
}

inline bool search_images(const EnumeratedGroup& g, const EnumeratedGroup& h, const std::vector<std::size_t>& gens,
                          const std::vector<std::vector<std::size_t>>& candidates, std::vector<std::size_t>& images,
                          std::vector<std::size_t>& f) {
  const std::size_t m = images.size();
  if (m == gens.size()) return extend_partial(g, h, gens, images, m, f);
  for (auto c : candidates[m]) {
    images.push_back(c);
    if (extend_partial(g, h, gens, images, m + 1, f) && search_images(g, h, gens, candidates, images, f)) return true;
    images.pop_back();
  }
  return false;
}

}  // namespace detail

/// Backtracking over generator images, pruned by element orders and by
/// consistency on the Cayley graph of the partial subgroup. Sound and
/// complete for groups up to `max_order` elements.
inline std::optional<IsoResult> find_isomorphism(const EnumeratedGroup& g, const EnumeratedGroup& h,
                                                 std::size_t max_order = 64) {
  if (g.size() > max_order || h.size() > max_order)
    throw std::length_error("isomorphism search is limited to groups of order <= " + std::to_string(max_order));
  if (g.size() != h.size() || g.is_abelian() != h.is_abelian()) return std::nullopt;
  if (detail::order_profile(g) != detail::order_profile(h)) return std::nullopt;
  const auto gens = detail::greedy_generators(g);
  std::vector<std::vector<std::size_t>> candidates;
  for (auto s : gens) {
    std::vector<std::size_t> c;
    const std::size_t o = g.element_order(s);
    for (std::size_t y = 0; y < h.size(); ++y)
      if (h.element_order(y) == o) c.push_back(y);
    candidates.push_back(std::move(c));
  }
  std::vector<std::size_t> images, f;
  if (!detail::search_images(g, h, gens, candidates, images, f)) return std::nullopt;
  IsoResult r = verify_isomorphism(g, h, f);
  if (!r.ok) throw std::logic_error("isomorphism search produced an invalid map: " + r.witness);
  return r;
}

/// Invariant factors of an enumerated abelian group, presented on a greedy
/// generating set to keep the relation lattice small.
inline FGAbelian abelian_invariants(const EnumeratedGroup& g) {
  if (!g.is_abelian()) throw std::invalid_argument(g.group().name() + " is not abelian");
  std::vector<GroupElement> gens;
  for (auto i : detail::greedy_generators(g)) gens.push_back(g.element(i));
  GroupHandle small = subgroup_generated(g.group(), std::move(gens), g.group().name());
  return canonical_form(abelianize_finite(small, g.elements()).group);
}

}  // namespace nilprod
