#pragma once

// The second nilpotent product A *2 B on normal forms (a, b, t): a in A,
// b in B, t in Ab(A) (x) Ab(B) stored on the uncanonicalized (i, j) grid.
// The element (a, b, t) is the word a . b . c with c central.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nilprod/abelian.hpp"
#include "nilprod/groups.hpp"
#include "nilprod/wrap.hpp"

namespace nilprod {

struct Nil2Element {
  GroupElement a;
  GroupElement b;
  AbelianElement t;

  friend auto operator<=>(const Nil2Element&, const Nil2Element&) = default;
  friend bool operator==(const Nil2Element&, const Nil2Element&) = default;
};

class Nil2Group {
 public:
  using element_type = Nil2Element;

  Nil2Group(GroupHandle a, GroupHandle b)
      : A_(std::move(a)),
        B_(std::move(b)),
        grid_(A_.abelianization(), B_.abelianization()),
        ab_(direct_sum(A_.abelianization(), B_.abelianization())) {}

  const GroupHandle& A() const { return A_; }
  const GroupHandle& B() const { return B_; }
  const TensorGrid& grid() const { return grid_; }
  /// The central tensor part on grid coordinates.
  const FGAbelian& T() const { return grid_.group(); }

  std::string name() const { return "nil2(" + A_.name() + ", " + B_.name() + ")"; }

  Nil2Element identity() const { return {A_.identity(), B_.identity(), T().zero()}; }

  /// (a,b,t)(a',b',t') = (aa', bb', t + t' - a' (x) b): moving a' left past b
  /// leaves the central commutator [b, a'] = [a', b]^-1 behind.
  Nil2Element mul(const Nil2Element& x, const Nil2Element& y) const {
    AbelianElement corr = grid_.elem(A_.abelianize(y.a), B_.abelianize(x.b));
    return {A_.mul(x.a, y.a), B_.mul(x.b, y.b), T().sub(T().add(x.t, y.t), corr)};
  }

  Nil2Element inv(const Nil2Element& x) const {
    AbelianElement corr = grid_.elem(A_.abelianize(x.a), B_.abelianize(x.b));
    return {A_.inv(x.a), B_.inv(x.b), T().sub(T().neg(x.t), corr)};
  }

  std::vector<Nil2Element> generators() const {
    std::vector<Nil2Element> out;
    for (const auto& g : A_.generators()) out.push_back(embed_A(g));
    for (const auto& g : B_.generators()) out.push_back(embed_B(g));
    return out;
  }

  /// |A| |B| |A (x) B|
  Cardinal order() const { return A_.order() * B_.order() * T().order(); }

  bool contains(const Nil2Element& x) const { return A_.contains(x.a) && B_.contains(x.b) && T().contains(x.t); }

  /// Ab(A) + Ab(B), coordinates concatenated.
  const FGAbelian& abelianization() const { return ab_; }
  AbelianElement abelianize(const Nil2Element& x) const {
    AbelianElement r = A_.abelianize(x.a);
    auto rb = B_.abelianize(x.b).coords;
    r.coords.insert(r.coords.end(), rb.begin(), rb.end());
    return r;
  }

  bool is_abelian() const { return A_.is_abelian() && B_.is_abelian() && T().is_trivial(); }

  std::uint64_t rank(const Nil2Element& x) const {
    auto [nb, nt] = radices();
    return (A_.rank(x.a) * nb + B_.rank(x.b)) * nt + detail::abelian_rank(T(), x.t);
  }
  Nil2Element unrank(std::uint64_t r) const {
    auto [nb, nt] = radices();
    if (r / nt / nb >= detail::finite_size(A_.order(), A_.name()))
      throw std::out_of_range("rank out of range for " + name());
    AbelianElement t = detail::abelian_unrank(T(), r % nt);
    r /= nt;
    GroupElement b = B_.unrank(r % nb);
    return {A_.unrank(r / nb), std::move(b), std::move(t)};
  }

  /// "[a; b; t]" with t a comma-separated coordinate list.
  std::string format(const Nil2Element& x) const {
    return "[" + A_.format(x.a) + "; " + B_.format(x.b) + "; " + detail::format_coords(x.t) + "]";
  }
  Nil2Element parse(std::string_view text) const {
    text = detail::trim(text);
    if (text.size() < 2 || text.front() != '[' || text.back() != ']')
      throw LiteralError("nil2 literal must look like [a; b; t]");
    auto fields = detail::split_top(text.substr(1, text.size() - 2), ';');
    if (fields.size() != 3) throw LiteralError("nil2 literal needs three ';'-separated fields");
    auto coords = detail::parse_coords(fields[2]);
    if (coords.size() != T().rank())
      throw LiteralError("tensor part needs " + std::to_string(T().rank()) + " coordinates");
    return {A_.parse(fields[0]), B_.parse(fields[1]), T().element(std::move(coords))};
  }

  GroupElement encode(const Nil2Element& x) const {
    detail::PayloadWriter w;
    w.put_vec(x.a.payload);
    w.put_vec(x.b.payload);
    w.put_vec(x.t.coords);
    return std::move(w).finish();
  }
  Nil2Element decode(const GroupElement& g) const {
    detail::PayloadReader r(g);
    Nil2Element x{{r.get_vec()}, {r.get_vec()}, {r.get_vec()}};
    r.expect_end();
    return x;
  }

  Nil2Element embed_A(const GroupElement& a) const { return {a, B_.identity(), T().zero()}; }
  Nil2Element embed_B(const GroupElement& b) const { return {A_.identity(), b, T().zero()}; }
  Nil2Element central(const AbelianElement& t) const { return {A_.identity(), B_.identity(), t}; }
  const GroupElement& proj_A(const Nil2Element& x) const { return x.a; }
  const GroupElement& proj_B(const Nil2Element& x) const { return x.b; }
  const AbelianElement& proj_T(const Nil2Element& x) const { return x.t; }

  /// [embed_A(a), embed_B(b)] = (e, e, a (x) b)
  Nil2Element bracket(const GroupElement& a, const GroupElement& b) const {
    return central(grid_.elem(A_.abelianize(a), B_.abelianize(b)));
  }

  /// Invariant-factor form of the tensor part.
  FGAbelian tensor_canonical() const { return grid_.canonical(); }

 private:
  std::pair<std::uint64_t, std::uint64_t> radices() const {
    return {detail::finite_size(B_.order(), B_.name()), detail::finite_size(T().order(), "tensor part")};
  }

  GroupHandle A_, B_;
  TensorGrid grid_;
  FGAbelian ab_;
};

inline std::shared_ptr<const Nil2Group> make_nil2(GroupHandle a, GroupHandle b) {
  return std::make_shared<const Nil2Group>(std::move(a), std::move(b));
}

inline GroupHandle nil2(GroupHandle a, GroupHandle b) { return as_handle(make_nil2(std::move(a), std::move(b))); }

/// [G, G] = [A, A] + [B, B] + A (x) B.
struct Nil2DerivedStructure {
  GroupHandle derived_A;
  GroupHandle derived_B;
  FGAbelian tensor;
  BigInt order;
};

inline Nil2DerivedStructure derived_structure(const Nil2Group& g) {
  if (!g.A().is_finite() || !g.B().is_finite())
    throw std::domain_error("derived_structure needs finite factors");
  Nil2DerivedStructure s{derived_subgroup(g.A()), derived_subgroup(g.B()), g.tensor_canonical(), 0};
  s.order = s.derived_A.order().value() * s.derived_B.order().value() * s.tensor.order().value();
  return s;
}

/// Orders of the lower central series terms G_1, G_2, ... predicted from the
/// factors: G_2 = [A,A] + [B,B] + A (x) B and G_n = A_n + B_n for n >= 3.
/// Stops at the first repeated order. Throws on infinite factors.
inline std::vector<BigInt> lcs_nil2_orders(const Nil2Group& g) {
  if (!g.A().is_finite() || !g.B().is_finite()) throw std::domain_error("lcs_nil2 needs finite factors");
  auto sa = lower_central_series(g.A());
  auto sb = lower_central_series(g.B());
  auto term = [](const std::vector<GroupHandle>& s, std::size_t k) -> BigInt { return s[std::min(k, s.size() - 1)].order().value(); };
  std::vector<BigInt> out{g.order().value()};
  BigInt second = term(sa, 1) * term(sb, 1) * g.T().order().value();
  if (second == out.back()) return out;
  out.push_back(second);
  for (std::size_t k = 2;; ++k) {
    BigInt next = term(sa, k) * term(sb, k);
    if (next == out.back()) return out;
    out.push_back(next);
  }
}

/// Nilpotency class from the factors: 1 when both are abelian and the tensor
/// part vanishes, else max{2, class A, class B}; nullopt when a factor is not
/// nilpotent.
inline std::optional<std::size_t> nil2_class(const Nil2Group& g) {
  if (!g.A().is_finite() || !g.B().is_finite()) throw std::domain_error("nil2_class needs finite factors");
  auto ca = nilpotency_class(g.A());
  auto cb = nilpotency_class(g.B());
  if (!ca || !cb) return std::nullopt;
  if (g.order().value() == 1) return 0;
  if (g.is_abelian()) return 1;
  return std::max<std::size_t>({2, *ca, *cb});
}

/// Z/n *2 Z/n -> Heis(Z/n) (n = 0 for Z): (a, b, t) -> (b, a, -t) in the
/// triple coordinates of Heis. `sign = +1` gives the deliberately wrong
/// variant (b, a, t).
inline GroupElement heisenberg_image(const Nil2Group& g, const Nil2Element& x, int sign = -1) {
  std::int64_t n = g.T().rank() == 1 ? g.T().factors()[0] : -1;
  if (n < 0) throw std::invalid_argument("heisenberg_image needs Z/n *2 Z/n");
  std::int64_t a = x.a.payload.at(0), b = x.b.payload.at(0), t = x.t.coords.at(0);
  return {{b, a, detail::reduce_mod(sign < 0 ? -t : t, n)}};
}

/// Outcome of a homomorphism / bijection check.
struct MapCheck {
  bool ok = true;
  std::size_t checked = 0;
  std::string witness;  // first violation, formatted
};

/// Verifies heisenberg_image as a bijective homomorphism: exhaustively for
/// finite n, on `samples` random pairs drawn from a box for n = 0.
inline MapCheck check_heisenberg_iso(std::int64_t n, int sign = -1, std::size_t samples = 1000,
                                     std::uint64_t seed = 1) {
  GroupHandle base = n == 0 ? integers() : cyclic(n);
  Nil2Group g(base, base);
  GroupHandle heis = heisenberg(n);
  MapCheck out;
  auto fail = [&](const Nil2Element& x, const Nil2Element& y) {
    out.ok = false;
    out.witness = g.format(x) + " * " + g.format(y);
  };
  if (n == 0) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> d(-50, 50);
    auto rnd = [&] { return Nil2Element{{{d(rng)}}, {{d(rng)}}, {{d(rng)}}}; };
    for (std::size_t s = 0; s < samples && out.ok; ++s) {
      Nil2Element x = rnd(), y = rnd();
      ++out.checked;
      if (!(heisenberg_image(g, g.mul(x, y), sign) ==
            heis.mul(heisenberg_image(g, x, sign), heisenberg_image(g, y, sign))))
        fail(x, y);
    }
    return out;
  }
  const std::uint64_t size = detail::finite_size(g.order(), g.name());
  std::vector<Nil2Element> el;
  std::vector<GroupElement> img;
  std::set<GroupElement> seen;
  for (std::uint64_t r = 0; r < size; ++r) {
    el.push_back(g.unrank(r));
    img.push_back(heisenberg_image(g, el.back(), sign));
    seen.insert(img.back());
  }
  if (seen.size() != size || heis.order().value() != size) {
    out.ok = false;
    out.witness = "not a bijection";
    return out;
  }
  for (std::size_t i = 0; i < el.size() && out.ok; ++i)
    for (std::size_t j = 0; j < el.size(); ++j) {
      ++out.checked;
      if (!(heisenberg_image(g, g.mul(el[i], el[j]), sign) == heis.mul(img[i], img[j]))) {
        fail(el[i], el[j]);
        break;
      }
    }
  return out;
}

/// Result of the universal property: either the induced map on A *2 B or
/// a pair (a, b) whose images have a non-central commutator.
struct InducedHom {
  std::optional<std::pair<GroupElement, GroupElement>> rejection;
  std::function<GroupElement(const Nil2Element&)> map;
  MapCheck homomorphism;
};

/// Homomorphisms rA: A -> K and rB: B -> K with [rA(a), rB(b)] central for
/// all a, b induce (a, b, t) -> rA(a) rB(b) w(t), where w sends the grid
/// generator e_i (x) f_j to [rA(a_i), rB(b_j)] for lifts a_i, b_j of the basis
/// vectors. Finite A, B, K only; the result is verified exhaustively.
inline InducedHom induced_hom(const std::shared_ptr<const Nil2Group>& g, const FiniteHom& rA, const FiniteHom& rB) {
  const GroupHandle& K = rA.target;
  InducedHom out;
  const auto kgens = K.generators();
  auto central = [&](const GroupElement& z) {
    return std::all_of(kgens.begin(), kgens.end(), [&](const GroupElement& s) { return K.mul(z, s) == K.mul(s, z); });
  };
  const auto ea = g->A().elements(), eb = g->B().elements();
  for (const auto& a : ea)
    for (const auto& b : eb)
      if (!central(commutator(K, rA(a), rB(b)))) {
        out.rejection = {a, b};
        out.homomorphism.ok = false;
        return out;
      }

  // lifts of the basis vectors of Ab(A), Ab(B)
  auto lifts = [](const GroupHandle& h, const std::vector<GroupElement>& el) {
    const FGAbelian& ab = h.abelianization();
    std::vector<std::optional<GroupElement>> out(ab.rank());
    for (const auto& x : el) {
      AbelianElement v = h.abelianize(x);
      for (std::size_t i = 0; i < ab.rank(); ++i) {
        AbelianElement e = ab.zero();
        e.coords[i] = 1;
        if (!out[i] && v == e) out[i] = x;
      }
    }
    for (const auto& o : out)
      if (!o) throw std::logic_error("abelianization map is not surjective");
    std::vector<GroupElement> r;
    for (auto& o : out) r.push_back(*o);
    return r;
  };
  const auto la = lifts(g->A(), ea), lb = lifts(g->B(), eb);
  const TensorGrid& grid = g->grid();
  std::vector<GroupElement> w(grid.group().rank());
  for (std::size_t i = 0; i < la.size(); ++i)
    for (std::size_t j = 0; j < lb.size(); ++j)
      if (auto s = grid.slot(i, j)) w[*s] = commutator(K, rA(la[i]), rB(lb[j]));

  out.map = [g, rA, rB, w, K](const Nil2Element& x) {
    GroupElement r = K.mul(rA(x.a), rB(x.b));
    for (std::size_t s = 0; s < w.size(); ++s) r = K.mul(r, power(K, w[s], x.t.coords[s]));
    return r;
  };

  const std::uint64_t size = detail::finite_size(g->order(), g->name());
  std::vector<Nil2Element> el;
  std::vector<GroupElement> img;
  for (std::uint64_t r = 0; r < size; ++r) {
    el.push_back(g->unrank(r));
    img.push_back(out.map(el.back()));
  }
  for (std::size_t i = 0; i < el.size() && out.homomorphism.ok; ++i)
    for (std::size_t j = 0; j < el.size(); ++j) {
      ++out.homomorphism.checked;
      if (!(out.map(g->mul(el[i], el[j])) == K.mul(img[i], img[j]))) {
        out.homomorphism.ok = false;
        out.homomorphism.witness = g->format(el[i]) + " * " + g->format(el[j]);
        break;
      }
    }
  return out;
}

}  // namespace nilprod
