#pragma once

// Generic closure-based algorithms over any group model: subgroup closure,
// commutator subgroups, lower central series and abelianization of finite
// groups. A model exposes element_type, identity(), mul(), inv() and
// generators(); elements must be totally ordered.

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "nilprod/abelian.hpp"

namespace nilprod {

template <class G>
concept GroupModel = requires(const G& g, const typename G::element_type& x) {
  { g.identity() } -> std::convertible_to<typename G::element_type>;
  { g.mul(x, x) } -> std::convertible_to<typename G::element_type>;
  { g.inv(x) } -> std::convertible_to<typename G::element_type>;
  { x < x } -> std::convertible_to<bool>;
  { x == x } -> std::convertible_to<bool>;
};

template <class G>
concept FinitelyGeneratedModel = GroupModel<G> && requires(const G& g) {
  { g.generators() } -> std::convertible_to<std::vector<typename G::element_type>>;
};

template <class G>
using element_t = typename G::element_type;

/// Default bound on enumerations.
inline constexpr std::size_t kMaxEnumeration = std::size_t{1} << 16;

class EnumerationLimitError : public std::length_error {
 public:
  explicit EnumerationLimitError(std::size_t limit)
      : std::length_error("enumeration exceeded " + std::to_string(limit) + " elements") {}
};

template <GroupModel G>
element_t<G> commutator(const G& g, const element_t<G>& x, const element_t<G>& y) {
  return g.mul(g.mul(x, y), g.mul(g.inv(x), g.inv(y)));
}

template <GroupModel G>
element_t<G> power(const G& g, element_t<G> x, std::int64_t k) {
  if (k < 0) {
    x = g.inv(x);
    k = -k;
  }
  element_t<G> r = g.identity();
  while (k > 0) {
    if (k & 1) r = g.mul(r, x);
    x = g.mul(x, x);
    k >>= 1;
  }
  return r;
}

/// Order of x, or nullopt when x^k != e for k <= limit.
template <GroupModel G>
std::optional<std::size_t> element_order(const G& g, const element_t<G>& x, std::size_t limit = kMaxEnumeration) {
  const auto e = g.identity();
  auto y = x;
  for (std::size_t k = 1; k <= limit; ++k) {
    if (y == e) return k;
    y = g.mul(y, x);
  }
  return std::nullopt;
}

/// Elements of <gens>, breadth-first from the identity under right
/// multiplication by the generators (enough for finite groups).
template <GroupModel G>
std::vector<element_t<G>> closure(const G& g, const std::vector<element_t<G>>& gens,
                                  std::size_t limit = kMaxEnumeration) {
  using E = element_t<G>;
  std::vector<E> out{g.identity()};
  std::set<E> seen{out.front()};
  for (std::size_t head = 0; head < out.size(); ++head) {
    for (const auto& s : gens) {
      E y = g.mul(out[head], s);
      if (seen.insert(y).second) {
        if (out.size() >= limit) throw EnumerationLimitError(limit);
        out.push_back(std::move(y));
      }
    }
  }
  return out;
}

/// Normal closure of `seeds` under conjugation by `conjugators`.
template <GroupModel G>
std::vector<element_t<G>> normal_closure(const G& g, const std::vector<element_t<G>>& seeds,
                                         const std::vector<element_t<G>>& conjugators,
                                         std::size_t limit = kMaxEnumeration) {
  using E = element_t<G>;
  const E e = g.identity();
  std::vector<E> gens;
  for (const auto& s : seeds)
    if (!(s == e)) gens.push_back(s);
  for (;;) {
    std::vector<E> elems = closure(g, gens, limit);
    std::set<E> members(elems.begin(), elems.end());
    bool grown = false;
    const std::size_t n = gens.size();
    for (std::size_t i = 0; i < n && !grown; ++i)
      for (const auto& c : conjugators) {
        E y = g.mul(g.mul(c, gens[i]), g.inv(c));
        if (!members.count(y)) {
          gens.push_back(std::move(y));
          grown = true;
          break;
        }
      }
    if (!grown) return elems;
  }
}

/// [G, N] for a normal subgroup N given by a generating set; with G = <X>
/// this is the normal closure of {[x, n]}.
template <FinitelyGeneratedModel G>
std::vector<element_t<G>> commutator_with(const G& g, const std::vector<element_t<G>>& normal_gens,
                                          std::size_t limit = kMaxEnumeration) {
  using E = element_t<G>;
  const std::vector<E> gens = g.generators();
  std::vector<E> seeds;
  std::set<E> dedup;
  for (const auto& x : gens)
    for (const auto& n : normal_gens) {
      E c = commutator(g, x, n);
      if (dedup.insert(c).second) seeds.push_back(std::move(c));
    }
  return normal_closure(g, seeds, gens, limit);
}

template <FinitelyGeneratedModel G>
std::vector<element_t<G>> derived_subgroup_elements(const G& g, std::size_t limit = kMaxEnumeration) {
  return commutator_with(g, g.generators(), limit);
}

/// Terms G_1 = G, G_{k+1} = [G, G_k] until the series stabilizes; the last
/// term repeats the stable value only once.
template <FinitelyGeneratedModel G>
std::vector<std::vector<element_t<G>>> lower_central_series_elements(const G& g,
                                                                     std::size_t limit = kMaxEnumeration) {
  std::vector<std::vector<element_t<G>>> terms;
  terms.push_back(closure(g, g.generators(), limit));
  for (;;) {
    auto next = commutator_with(g, terms.back(), limit);
    if (next.size() == terms.back().size()) return terms;
    terms.push_back(std::move(next));
  }
}

/// Nilpotency class from a lower central series: the index before the
/// trivial term, or nullopt when the series stalls at a nontrivial subgroup.
template <class E>
std::optional<std::size_t> nilpotency_class_of(const std::vector<std::vector<E>>& series) {
  if (series.empty() || series.back().size() != 1) return std::nullopt;
  return series.size() - 1;
}

/// Abelianization of a finite group from its element list: cosets of the
/// derived subgroup are explored breadth-first along the generators, each
/// non-tree edge contributes a relation, and the relation lattice is put into
/// Smith form.
template <class E>
struct AbelianizationData {
  FGAbelian group;
  std::map<E, AbelianElement> map;
};

template <FinitelyGeneratedModel G>
AbelianizationData<element_t<G>> abelianize_finite(const G& g, const std::vector<element_t<G>>& elements,
                                                   std::size_t quotient_limit = 10000) {
  using E = element_t<G>;
  const E e = g.identity();
  std::vector<E> gens;
  for (const auto& s : g.generators())
    if (!(s == e)) gens.push_back(s);

  const std::vector<E> derived = derived_subgroup_elements(g, elements.size() + 1);
  if (elements.size() % derived.size() != 0) throw std::logic_error("derived subgroup order does not divide |G|");
  if (elements.size() / derived.size() > quotient_limit) throw std::length_error("abelianization quotient too large");

  std::map<E, std::size_t> coset_of;
  std::vector<E> reps;
  for (const auto& x : elements) {
    if (coset_of.count(x)) continue;
    const std::size_t id = reps.size();
    reps.push_back(x);
    for (const auto& d : derived) coset_of.emplace(g.mul(x, d), id);
  }

  const std::size_t r = gens.size();
  std::vector<std::optional<std::vector<std::int64_t>>> vec(reps.size());
  vec[coset_of.at(e)] = std::vector<std::int64_t>(r, 0);
  std::vector<std::size_t> queue{coset_of.at(e)};
  std::set<std::vector<std::int64_t>> relations;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t c = queue[head];
    const auto& v = *vec[c];
    for (std::size_t i = 0; i < r; ++i) {
      const std::size_t next = coset_of.at(g.mul(reps[c], gens[i]));
      std::vector<std::int64_t> w = v;
      ++w[i];
      if (!vec[next]) {
        vec[next] = std::move(w);
        queue.push_back(next);
        continue;
      }
      for (std::size_t k = 0; k < r; ++k) w[k] -= (*vec[next])[k];
      bool zero = true;
      for (auto c2 : w) zero = zero && c2 == 0;
      if (!zero) relations.insert(std::move(w));
    }
  }

  IntegerMatrix rel(relations.size(), r);
  std::size_t row = 0;
  for (const auto& w : relations) {
    for (std::size_t k = 0; k < r; ++k) rel(row, k) = w[k];
    ++row;
  }
  AbelianPresentation pres = from_relations(r, rel);

  AbelianizationData<E> out{pres.group(), {}};
  std::vector<AbelianElement> coset_coords(reps.size());
  for (std::size_t c = 0; c < reps.size(); ++c) coset_coords[c] = pres.map(*vec[c]);
  for (const auto& [x, c] : coset_of) out.map.emplace(x, coset_coords[c]);
  return out;
}

}  // namespace nilprod
