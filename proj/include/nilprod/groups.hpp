#pragma once

// Concrete groups behind one runtime interface: cyclic, integers, dihedral,
// permutation, Heisenberg, abelian-by-invariants, direct sums and enumerated
// subgroups. Elements are kind-tagged integer payloads.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nilprod/abelian.hpp"
#include "nilprod/group_algorithms.hpp"

namespace nilprod {

struct GroupElement {
  std::vector<std::int64_t> payload;

  friend auto operator<=>(const GroupElement&, const GroupElement&) = default;
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

/// Malformed element literal or group parameter.
class LiteralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class GroupImpl {
 public:
  virtual ~GroupImpl() = default;

  virtual std::string name() const = 0;
  virtual GroupElement identity() const = 0;
  virtual GroupElement mul(const GroupElement& x, const GroupElement& y) const = 0;
  virtual GroupElement inv(const GroupElement& x) const = 0;
  virtual std::vector<GroupElement> generators() const = 0;
  virtual Cardinal order() const = 0;
  virtual bool contains(const GroupElement& x) const = 0;

  virtual const FGAbelian& abelianization() const = 0;
  virtual AbelianElement abelianize(const GroupElement& x) const = 0;
  virtual bool is_abelian() const = 0;

  /// Canonical enumeration: a bijection onto an initial segment of N (all
  /// of N for infinite groups) sending the identity to 0.
  virtual std::uint64_t rank(const GroupElement& x) const = 0;
  virtual GroupElement unrank(std::uint64_t r) const = 0;

  virtual std::string format(const GroupElement& x) const = 0;
  virtual GroupElement parse(std::string_view text) const = 0;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::int64_t parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty()) throw LiteralError("expected an integer");
  bool neg = false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i == s.size()) throw LiteralError("expected an integer, got '" + std::string(s) + "'");
  std::int64_t v = 0;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i])))
      throw LiteralError("expected an integer, got '" + std::string(s) + "'");
    v = checked_add(checked_mul(v, 10), s[i] - '0');
  }
  return neg ? -v : v;
}

/// Splits on `sep` at bracket depth zero.
inline std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '[' || c == '{' || c == '<') ++depth;
    if (c == ')' || c == ']' || c == '}' || c == '>') --depth;
    if (depth < 0) throw LiteralError("unbalanced brackets in '" + std::string(s) + "'");
    if (c == sep && depth == 0) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  if (depth != 0) throw LiteralError("unbalanced brackets in '" + std::string(s) + "'");
  parts.push_back(s.substr(start));
  return parts;
}

/// "(x, y, z)" -> {x, y, z}
inline std::vector<std::int64_t> parse_tuple(std::string_view s) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')')
    throw LiteralError("expected a parenthesized tuple, got '" + std::string(s) + "'");
  s = trim(s.substr(1, s.size() - 2));
  std::vector<std::int64_t> out;
  if (s.empty()) return out;
  for (auto part : split_top(s, ',')) out.push_back(parse_int(part));
  return out;
}

inline std::string format_tuple(const std::vector<std::int64_t>& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

/// Model view of a GroupImpl for the generic algorithms.
struct ImplModel {
  using element_type = GroupElement;
  const GroupImpl& g;
  GroupElement identity() const { return g.identity(); }
  GroupElement mul(const GroupElement& x, const GroupElement& y) const { return g.mul(x, y); }
  GroupElement inv(const GroupElement& x) const { return g.inv(x); }
  std::vector<GroupElement> generators() const { return g.generators(); }
};

}  // namespace detail

/// Shared base for finite groups: enumeration, ranks and abelianization come
/// from closure of the generators unless a subclass knows them directly.
class FiniteGroupBase : public GroupImpl {
 public:
  Cardinal order() const override { return Cardinal(static_cast<std::int64_t>(enumeration().elements.size())); }

  bool contains(const GroupElement& x) const override { return enumeration().index.count(x) > 0; }

  std::uint64_t rank(const GroupElement& x) const override {
    auto it = enumeration().index.find(x);
    if (it == enumeration().index.end()) throw std::invalid_argument("element not in " + name());
    return it->second;
  }

  GroupElement unrank(std::uint64_t r) const override {
    const auto& el = enumeration().elements;
    if (r >= el.size()) throw std::out_of_range("rank out of range for " + name());
    return el[r];
  }

  const FGAbelian& abelianization() const override { return ab_data().group; }

  AbelianElement abelianize(const GroupElement& x) const override {
    auto it = ab_data().map.find(x);
    if (it == ab_data().map.end()) throw std::invalid_argument("element not in " + name());
    return it->second;
  }

  bool is_abelian() const override {
    const auto gens = generators();
    for (const auto& x : gens)
      for (const auto& y : gens)
        if (!(mul(x, y) == mul(y, x))) return false;
    return true;
  }

  const std::vector<GroupElement>& elements() const { return enumeration().elements; }

 protected:
  struct Enumeration {
    std::vector<GroupElement> elements;
    std::map<GroupElement, std::uint64_t> index;
  };

  virtual std::vector<GroupElement> build_elements() const {
    return closure(detail::ImplModel{*this}, generators(), kMaxEnumeration);
  }

  const Enumeration& enumeration() const {
    std::call_once(enum_once_, [this] {
      enum_.elements = build_elements();
      for (std::size_t i = 0; i < enum_.elements.size(); ++i) enum_.index.emplace(enum_.elements[i], i);
    });
    return enum_;
  }

 private:
  const AbelianizationData<GroupElement>& ab_data() const {
    std::call_once(ab_once_, [this] { ab_ = abelianize_finite(detail::ImplModel{*this}, elements()); });
    return ab_;
  }

  mutable std::once_flag enum_once_, ab_once_;
  mutable Enumeration enum_;
  mutable AbelianizationData<GroupElement> ab_;
};

class CyclicGroup final : public FiniteGroupBase {
 public:
  explicit CyclicGroup(std::int64_t n) : n_(n), ab_(FGAbelian::cyclic(n)) {
    if (n < 1) throw LiteralError("cyclic group needs n >= 1");
  }
  std::int64_t modulus() const { return n_; }

  std::string name() const override { return "Z/" + std::to_string(n_); }
  GroupElement identity() const override { return {{0}}; }
  GroupElement mul(const GroupElement& x, const GroupElement& y) const override {
    return {{detail::reduce_mod(x.payload.at(0) + y.payload.at(0), n_)}};
  }
  GroupElement inv(const GroupElement& x) const override { return {{detail::reduce_mod(-x.payload.at(0), n_)}}; }
  std::vector<GroupElement> generators() const override {
    if (n_ == 1) return {};
    return {{{1}}};
  }
  Cardinal order() const override { return Cardinal(n_); }
  bool contains(const GroupElement& x) const override {
    return x.payload.size() == 1 && x.payload[0] >= 0 && x.payload[0] < n_;
  }
  const FGAbelian& abelianization() const override { return ab_; }
  AbelianElement abelianize(const GroupElement& x) const override {
    if (n_ == 1) return {};
    return {{x.payload.at(0)}};
  }
  bool is_abelian() const override { return true; }
  std::uint64_t rank(const GroupElement& x) const override { return static_cast<std::uint64_t>(x.payload.at(0)); }
  GroupElement unrank(std::uint64_t r) const override {
    if (r >= static_cast<std::uint64_t>(n_)) throw std::out_of_range("rank out of range for " + name());
    return {{static_cast<std::int64_t>(r)}};
  }
  std::string format(const GroupElement& x) const override { return std::to_string(x.payload.at(0)); }
  GroupElement parse(std::string_view text) const override {
    return {{detail::reduce_mod(detail::parse_int(text), n_)}};
  }

 protected:
  std::vector<GroupElement> build_elements() const override {
    std::vector<GroupElement> out;
    for (std::int64_t r = 0; r < n_; ++r) out.push_back({{r}});
    return out;
  }

 private:
  std::int64_t n_;
  FGAbelian ab_;
};

/// Z with the spiral enumeration 0, 1, -1, 2, -2, ...
class IntegersGroup final : public GroupImpl {
 public:
  std::string name() const override { return "Z"; }
  GroupElement identity() const override { return {{0}}; }
  GroupElement mul(const GroupElement& x, const GroupElement& y) const override {
    return {{detail::checked_add(x.payload.at(0), y.payload.at(0))}};
  }
  GroupElement inv(const GroupElement& x) const override { return {{detail::checked_neg(x.payload.at(0))}}; }
  std::vector<GroupElement> generators() const override { return {{{1}}}; }
  Cardinal order() const override { return Cardinal::infinite(); }
  bool contains(const GroupElement& x) const override { return x.payload.size() == 1; }
  const FGAbelian& abelianization() const override { return ab_; }
  AbelianElement abelianize(const GroupElement& x) const override { return {{x.payload.at(0)}}; }
  bool is_abelian() const override { return true; }
  std::uint64_t rank(const GroupElement& x) const override {
    std::int64_t n = x.payload.at(0);
    if (n > 0) return 2 * static_cast<std::uint64_t>(n) - 1;
    return 2 * static_cast<std::uint64_t>(-n);
  }
  GroupElement unrank(std::uint64_t r) const override {
    if (r % 2 == 1) return {{static_cast<std::int64_t>((r + 1) / 2)}};
    return {{-static_cast<std::int64_t>(r / 2)}};
  }
  std::string format(const GroupElement& x) const override { return std::to_string(x.payload.at(0)); }
  GroupElement parse(std::string_view text) const override { return {{detail::parse_int(text)}}; }

 private:
  FGAbelian ab_ = FGAbelian::cyclic(0);
};

/// D_n = <r, s | r^n, s^2, srs = r^-1>, order 2n; payload (k, e) is r^k s^e.
class DihedralGroup final : public FiniteGroupBase {
 public:
  explicit DihedralGroup(std::int64_t n) : n_(n) {
    if (n < 1) throw LiteralError("dihedral group needs n >= 1");
    ab_ = n % 2 == 0 ? FGAbelian({2, 2}) : FGAbelian({2});
  }
  std::int64_t degree() const { return n_; }

  std::string name() const override { return "D" + std::to_string(n_); }
  GroupElement identity() const override { return {{0, 0}}; }
  GroupElement mul(const GroupElement& x, const GroupElement& y) const override {
    std::int64_t k = x.payload.at(0), s = x.payload.at(1);
    std::int64_t l = y.payload.at(0), t = y.payload.at(1);
    return {{detail::reduce_mod(s ? k - l : k + l, n_), (s + t) % 2}};
  }
  GroupElement inv(const GroupElement& x) const override {
    if (x.payload.at(1)) return x;
    return {{detail::reduce_mod(-x.payload[0], n_), 0}};
  }
  std::vector<GroupElement> generators() const override {
    if (n_ == 1) return {{{0, 1}}};
    return {{{1, 0}}, {{0, 1}}};
  }
  Cardinal order() const override { return Cardinal(2 * n_); }
  bool contains(const GroupElement& x) const override {
    return x.payload.size() == 2 && x.payload[0] >= 0 && x.payload[0] < n_ && (x.payload[1] == 0 || x.payload[1] == 1);
  }
  const FGAbelian& abelianization() const override { return ab_; }
  AbelianElement abelianize(const GroupElement& x) const override {
    // even n: r -> (1,0), s -> (0,1); odd n: r is a commutator
    if (n_ % 2 == 0) return {{x.payload.at(0) % 2, x.payload.at(1)}};
    return {{x.payload.at(1)}};
  }
  bool is_abelian() const override { return n_ <= 2; }
  std::uint64_t rank(const GroupElement& x) const override {
    return static_cast<std::uint64_t>(2 * x.payload.at(0) + x.payload.at(1));
  }
  GroupElement unrank(std::uint64_t r) const override {
    if (r >= static_cast<std::uint64_t>(2 * n_)) throw std::out_of_range("rank out of range for " + name());
    return {{static_cast<std::int64_t>(r / 2), static_cast<std::int64_t>(r % 2)}};
  }
  std::string format(const GroupElement& x) const override {
    std::int64_t k = x.payload.at(0), s = x.payload.at(1);
    if (k == 0 && s == 0) return "e";
    std::string out;
    if (k == 1) out = "r";
    if (k > 1) out = "r^" + std::to_string(k);
    if (s) out += out.empty() ? "s" : "*s";
    return out;
  }
  /// Products of "r", "r^k", "s", "e" joined by '*'.
  GroupElement parse(std::string_view text) const override {
    GroupElement acc = identity();
    text = detail::trim(text);
    if (text.empty()) throw LiteralError("empty dihedral literal");
    for (auto part : detail::split_top(text, '*')) {
      part = detail::trim(part);
      GroupElement f;
      if (part == "e" || part == "1") {
        f = identity();
      } else if (part == "s") {
        f = {{0, 1}};
      } else if (!part.empty() && part[0] == 'r') {
        std::int64_t k = 1;
        if (part.size() > 1) {
          if (part[1] != '^') throw LiteralError("bad dihedral factor '" + std::string(part) + "'");
          k = detail::parse_int(part.substr(2));
        }
        f = {{detail::reduce_mod(k, n_), 0}};
      } else {
        throw LiteralError("bad dihedral factor '" + std::string(part) + "'");
      }
      acc = mul(acc, f);
    }
    return acc;
  }

 protected:
  std::vector<GroupElement> build_elements() const override {
    std::vector<GroupElement> out;
    for (std::uint64_t r = 0; r < static_cast<std::uint64_t>(2 * n_); ++r) out.push_back(unrank(r));
    return out;
  }

 private:
  std::int64_t n_;
  FGAbelian ab_;
};

/// Permutations of {1..m}; payload holds 0-based images. Products apply the
/// left factor first: (xy)(p) = y(x(p)).
class PermutationGroup final : public FiniteGroupBase {
 public:
  PermutationGroup(std::size_t m, std::vector<GroupElement> gens, std::string name = {})
      : m_(m), gens_(std::move(gens)), name_(std::move(name)) {
    for (const auto& g : gens_) validate(g);
    if (name_.empty()) {
      std::ostringstream os;
      os << "Perm(" << m_;
      for (const auto& g : gens_) os << "; " << format(g);
      os << ')';
      name_ = os.str();
    }
  }

  std::size_t degree() const { return m_; }

  std::string name() const override { return name_; }
  GroupElement identity() const override {
    GroupElement e;
    e.payload.resize(m_);
    std::iota(e.payload.begin(), e.payload.end(), 0);
    return e;
  }
  GroupElement mul(const GroupElement& x, const GroupElement& y) const override {
    GroupElement r;
    r.payload.resize(m_);
    for (std::size_t p = 0; p < m_; ++p) r.payload[p] = y.payload[static_cast<std::size_t>(x.payload[p])];
    return r;
  }
  GroupElement inv(const GroupElement& x) const override {
    GroupElement r;
    r.payload.resize(m_);
    for (std::size_t p = 0; p < m_; ++p) r.payload[static_cast<std::size_t>(x.payload[p])] = static_cast<std::int64_t>(p);
    return r;
  }
  std::vector<GroupElement> generators() const override { return gens_; }

  std::string format(const GroupElement& x) const override {
    std::ostringstream os;
    std::vector<bool> seen(m_, false);
    bool any = false;
    for (std::size_t p = 0; p < m_; ++p) {
      if (seen[p] || x.payload[p] == static_cast<std::int64_t>(p)) continue;
      any = true;
      os << '(';
      std::size_t q = p;
      bool first = true;
      while (!seen[q]) {
        seen[q] = true;
        os << (first ? "" : " ") << q + 1;
        first = false;
        q = static_cast<std::size_t>(x.payload[q]);
      }
      os << ')';
    }
    return any ? os.str() : "()";
  }

  GroupElement parse(std::string_view text) const override {
    GroupElement x = parse_cycles(text);
    if (!contains(x)) throw LiteralError("permutation '" + std::string(text) + "' is not in " + name_);
    return x;
  }

  /// Product of cycles such as "(1 2 3)(4 5)", applied left to right; any
  /// permutation of the points, member of this group or not.
  GroupElement parse_cycles(std::string_view text) const {
    text = detail::trim(text);
    GroupElement acc = identity();
    if (text == "e" || text == "()") return acc;
    std::size_t i = 0;
    while (i < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[i]))) {
        ++i;
        continue;
      }
      if (text[i] != '(') throw LiteralError("expected '(' in permutation literal '" + std::string(text) + "'");
      std::size_t close = text.find(')', i);
      if (close == std::string_view::npos) throw LiteralError("unterminated cycle in '" + std::string(text) + "'");
      std::string body(text.substr(i + 1, close - i - 1));
      std::replace(body.begin(), body.end(), ',', ' ');
      std::istringstream is(body);
      std::vector<std::int64_t> pts;
      std::string tok;
      while (is >> tok) pts.push_back(detail::parse_int(tok));
      GroupElement cyc = identity();
      std::vector<bool> used(m_, false);
      for (std::size_t k = 0; k < pts.size(); ++k) {
        std::int64_t a = pts[k];
        if (a < 1 || a > static_cast<std::int64_t>(m_)) throw LiteralError("point out of range in cycle");
        if (used[static_cast<std::size_t>(a - 1)]) throw LiteralError("repeated point in cycle");
        used[static_cast<std::size_t>(a - 1)] = true;
        std::int64_t b = pts[(k + 1) % pts.size()];
        cyc.payload[static_cast<std::size_t>(a - 1)] = b - 1;
      }
      acc = mul(acc, cyc);
      i = close + 1;
    }
    return acc;
  }

 private:
  void validate(const GroupElement& g) const {
    if (g.payload.size() != m_) throw LiteralError("permutation has wrong degree");
    std::vector<bool> hit(m_, false);
    for (auto v : g.payload) {
      if (v < 0 || v >= static_cast<std::int64_t>(m_) || hit[static_cast<std::size_t>(v)])
        throw LiteralError("malformed permutation");
      hit[static_cast<std::size_t>(v)] = true;
    }
  }

  std::size_t m_;
  std::vector<GroupElement> gens_;
  std::string name_;
};

/// Heis(Z/n) (or Heis(Z) for n = 0): triples with
/// (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
class HeisenbergGroup final : public GroupImpl {
 public:
  explicit HeisenbergGroup(std::int64_t n) : n_(n) {
    if (n < 0) throw LiteralError("Heisenberg modulus must be >= 0");
    ab_ = n == 1 ? FGAbelian() : FGAbelian({n, n});
    if (n == 1) throw LiteralError("Heis(Z/1) is trivial; use n >= 2");
  }
  std::int64_t modulus() const { return n_; }

  std::string name() const override { return n_ == 0 ? "Heis(Z)" : "Heis(Z/" + std::to_string(n_) + ")"; }
  GroupElement identity() const override { return {{0, 0, 0}}; }
  GroupElement mul(const GroupElement& x, const GroupElement& y) const override {
    const auto& p = x.payload;
    const auto& q = y.payload;
    std::int64_t c = detail::checked_add(detail::checked_add(p[2], q[2]), detail::mul_mod(p[0], q[1], n_));
    return {{red(detail::checked_add(p[0], q[0])), red(detail::checked_add(p[1], q[1])), red(c)}};
  }
  GroupElement inv(const GroupElement& x) const override {
    const auto& p = x.payload;
    std::int64_t c = detail::checked_add(detail::checked_neg(p[2]), detail::mul_mod(p[0], p[1], n_));
    return {{red(-p[0]), red(-p[1]), red(c)}};
  }
  std::vector<GroupElement> generators() const override { return {{{1, 0, 0}}, {{0, 1, 0}}}; }
  Cardinal order() const override {
    if (n_ == 0) return Cardinal::infinite();
    return Cardinal(BigInt(n_) * n_ * n_);
  }
  bool contains(const GroupElement& x) const override {
    if (x.payload.size() != 3) return false;
    if (n_ == 0) return true;
    return std::all_of(x.payload.begin(), x.payload.end(), [&](std::int64_t v) { return v >= 0 && v < n_; });
  }
  const FGAbelian& abelianization() const override { return ab_; }
  AbelianElement abelianize(const GroupElement& x) const override { return {{x.payload.at(0), x.payload.at(1)}}; }
  bool is_abelian() const override { return false; }
  std::uint64_t rank(const GroupElement& x) const override {
    if (n_ == 0) throw std::domain_error("no canonical enumeration implemented for Heis(Z)");
    auto n = static_cast<std::uint64_t>(n_);
    const auto& p = x.payload;
    return (static_cast<std::uint64_t>(p[0]) * n + static_cast<std::uint64_t>(p[1])) * n + static_cast<std::uint64_t>(p[2]);
  }
  GroupElement unrank(std::uint64_t r) const override {
    if (n_ == 0) throw std::domain_error("no canonical enumeration implemented for Heis(Z)");
    auto n = static_cast<std::uint64_t>(n_);
    if (r >= n * n * n) throw std::out_of_range("rank out of range for " + name());
    return {{static_cast<std::int64_t>(r / (n * n)), static_cast<std::int64_t>((r / n) % n),
             static_cast<std::int64_t>(r % n)}};
  }
  std::string format(const GroupElement& x) const override { return detail::format_tuple(x.payload); }
  GroupElement parse(std::string_view text) const override {
    auto v = detail::parse_tuple(text);
    if (v.size() != 3) throw LiteralError("Heisenberg literal needs three entries");
    return {{red(v[0]), red(v[1]), red(v[2])}};
  }

 private:
  std::int64_t red(std::int64_t v) const { return detail::reduce_mod(v, n_); }

  std::int64_t n_;
  FGAbelian ab_;
};

/// An abelian group given by its factor list; elements are coordinates.
class AbelianGroup final : public GroupImpl {
 public:
  explicit AbelianGroup(FGAbelian a) : a_(std::move(a)) {}

  std::string name() const override { return "Ab(" + a_.str() + ")"; }
  GroupElement identity() const override { return {a_.zero().coords}; }
  GroupElement mul(const GroupElement& x, const GroupElement& y) const override {
    return {a_.add({x.payload}, {y.payload}).coords};
  }
  GroupElement inv(const GroupElement& x) const override { return {a_.neg({x.payload}).coords}; }
  std::vector<GroupElement> generators() const override {
    std::vector<GroupElement> out;
    for (std::size_t i = 0; i < a_.rank(); ++i) {
      GroupElement e = identity();
      e.payload[i] = 1;
      out.push_back(std::move(e));
    }
    return out;
  }
  Cardinal order() const override { return a_.order(); }
  bool contains(const GroupElement& x) const override { return a_.contains({x.payload}); }
  const FGAbelian& abelianization() const override { return a_; }
  AbelianElement abelianize(const GroupElement& x) const override { return {x.payload}; }
  bool is_abelian() const override { return true; }
  std::uint64_t rank(const GroupElement& x) const override {
    if (!a_.is_finite()) throw std::domain_error("no canonical enumeration for infinite " + a_.str());
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < a_.rank(); ++i)
      r = r * static_cast<std::uint64_t>(a_.factors()[i]) + static_cast<std::uint64_t>(x.payload.at(i));
    return r;
  }
  GroupElement unrank(std::uint64_t r) const override {
    if (!a_.is_finite()) throw std::domain_error("no canonical enumeration for infinite " + a_.str());
    GroupElement x = identity();
    for (std::size_t i = a_.rank(); i-- > 0;) {
      auto d = static_cast<std::uint64_t>(a_.factors()[i]);
      x.payload[i] = static_cast<std::int64_t>(r % d);
      r /= d;
    }
    if (r != 0) throw std::out_of_range("rank out of range for " + name());
    return x;
  }
  std::string format(const GroupElement& x) const override { return detail::format_tuple(x.payload); }
  GroupElement parse(std::string_view text) const override {
    auto v = detail::parse_tuple(text);
    if (v.size() != a_.rank()) throw LiteralError("abelian literal has wrong length for " + a_.str());
    return {a_.element(std::move(v)).coords};
  }

 private:
  FGAbelian a_;
};

/// Runtime handle to an immutable group; the universal group model.
class GroupHandle {
 public:
  using element_type = GroupElement;

  GroupHandle() = default;
  explicit GroupHandle(std::shared_ptr<const GroupImpl> impl) : impl_(std::move(impl)) {}

  const GroupImpl& impl() const {
    if (!impl_) throw std::logic_error("empty GroupHandle");
    return *impl_;
  }
  const std::shared_ptr<const GroupImpl>& ptr() const { return impl_; }

  std::string name() const { return impl().name(); }
  GroupElement identity() const { return impl().identity(); }
  GroupElement mul(const GroupElement& x, const GroupElement& y) const { return impl().mul(x, y); }
  GroupElement inv(const GroupElement& x) const { return impl().inv(x); }
  std::vector<GroupElement> generators() const { return impl().generators(); }
  Cardinal order() const { return impl().order(); }
  bool is_finite() const { return order().is_finite(); }
  bool contains(const GroupElement& x) const { return impl().contains(x); }
  const FGAbelian& abelianization() const { return impl().abelianization(); }
  AbelianElement abelianize(const GroupElement& x) const { return impl().abelianize(x); }
  bool is_abelian() const { return impl().is_abelian(); }
  std::uint64_t rank(const GroupElement& x) const { return impl().rank(x); }
  GroupElement unrank(std::uint64_t r) const { return impl().unrank(r); }
  std::string format(const GroupElement& x) const { return impl().format(x); }
  GroupElement parse(std::string_view text) const { return impl().parse(text); }
  bool is_identity(const GroupElement& x) const { return x == identity(); }

  /// Elements in canonical order; finite groups only.
  std::vector<GroupElement> elements(std::size_t limit = kMaxEnumeration) const {
    Cardinal n = order();
    if (!n.is_finite()) throw std::domain_error("cannot enumerate infinite group " + name());
    if (n.value() > limit) throw EnumerationLimitError(limit);
    std::vector<GroupElement> out;
    auto count = n.value().convert_to<std::uint64_t>();
    out.reserve(count);
    for (std::uint64_t r = 0; r < count; ++r) out.push_back(unrank(r));
    return out;
  }

  /// Same group up to construction (compared by name).
  friend bool operator==(const GroupHandle& a, const GroupHandle& b) {
    return a.impl_ == b.impl_ || (a.impl_ && b.impl_ && a.impl_->name() == b.impl_->name());
  }

 private:
  std::shared_ptr<const GroupImpl> impl_;
};

/// Direct sum of finitely many groups; payload is length-prefixed per summand.
class DirectSumGroup final : public GroupImpl {
 public:
  explicit DirectSumGroup(std::vector<GroupHandle> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw LiteralError("direct sum needs at least one summand");
    std::vector<std::int64_t> f;
    for (const auto& p : parts_) {
      const auto& pf = p.abelianization().factors();
      f.insert(f.end(), pf.begin(), pf.end());
    }
    ab_ = FGAbelian(std::move(f));
  }

  const std::vector<GroupHandle>& parts() const { return parts_; }

  GroupElement join(const std::vector<GroupElement>& xs) const {
    if (xs.size() != parts_.size()) throw std::invalid_argument("direct sum arity mismatch");
    GroupElement out;
    for (const auto& x : xs) {
      out.payload.push_back(static_cast<std::int64_t>(x.payload.size()));
      out.payload.insert(out.payload.end(), x.payload.begin(), x.payload.end());
    }
    return out;
  }

  std::vector<GroupElement> split(const GroupElement& x) const {
    std::vector<GroupElement> out;
    std::size_t i = 0;
    for (std::size_t k = 0; k < parts_.size(); ++k) {
      if (i >= x.payload.size()) throw std::invalid_argument("malformed direct sum element");
      auto len = static_cast<std::size_t>(x.payload[i++]);
      if (i + len > x.payload.size()) throw std::invalid_argument("malformed direct sum element");
      out.push_back({std::vector<std::int64_t>(x.payload.begin() + static_cast<std::ptrdiff_t>(i),
                                               x.payload.begin() + static_cast<std::ptrdiff_t>(i + len))});
      i += len;
    }
    if (i != x.payload.size()) throw std::invalid_argument("malformed direct sum element");
    return out;
  }

  std::string name() const override {
    std::string s = "dsum(";
    for (std::size_t i = 0; i < parts_.size(); ++i) s += (i ? ", " : "") + parts_[i].name();
    return s + ")";
  }
  GroupElement identity() const override {
    std::vector<GroupElement> xs;
    for (const auto& p : parts_) xs.push_back(p.identity());
    return join(xs);
  }
  GroupElement mul(const GroupElement& x, const GroupElement& y) const override {
    auto a = split(x), b = split(y);
    for (std::size_t k = 0; k < parts_.size(); ++k) a[k] = parts_[k].mul(a[k], b[k]);
    return join(a);
  }
  GroupElement inv(const GroupElement& x) const override {
    auto a = split(x);
    for (std::size_t k = 0; k < parts_.size(); ++k) a[k] = parts_[k].inv(a[k]);
    return join(a);
  }
  std::vector<GroupElement> generators() const override {
    std::vector<GroupElement> out;
    for (std::size_t k = 0; k < parts_.size(); ++k)
      for (const auto& g : parts_[k].generators()) out.push_back(embed(k, g));
    return out;
  }
  GroupElement embed(std::size_t k, const GroupElement& g) const {
    std::vector<GroupElement> xs;
    for (const auto& p : parts_) xs.push_back(p.identity());
    xs.at(k) = g;
    return join(xs);
  }
  Cardinal order() const override {
    Cardinal c(1);
    for (const auto& p : parts_) c *= p.order();
    return c;
  }
  bool contains(const GroupElement& x) const override {
    try {
      auto a = split(x);
      for (std::size_t k = 0; k < parts_.size(); ++k)
        if (!parts_[k].contains(a[k])) return false;
      return true;
    } catch (const std::invalid_argument&) {
      return false;
    }
  }
  const FGAbelian& abelianization() const override { return ab_; }
  AbelianElement abelianize(const GroupElement& x) const override {
    auto a = split(x);
    AbelianElement out;
    for (std::size_t k = 0; k < parts_.size(); ++k) {
      auto c = parts_[k].abelianize(a[k]).coords;
      out.coords.insert(out.coords.end(), c.begin(), c.end());
    }
    return out;
  }
  bool is_abelian() const override {
    return std::all_of(parts_.begin(), parts_.end(), [](const GroupHandle& p) { return p.is_abelian(); });
  }
  /// Mixed radix over the summands' ranks, first summand most significant.
  std::uint64_t rank(const GroupElement& x) const override {
    auto a = split(x);
    std::uint64_t r = 0;
    for (std::size_t k = 0; k < parts_.size(); ++k) r = r * finite_order(k) + parts_[k].rank(a[k]);
    return r;
  }
  GroupElement unrank(std::uint64_t r) const override {
    std::vector<GroupElement> xs(parts_.size());
    for (std::size_t k = parts_.size(); k-- > 0;) {
      std::uint64_t n = finite_order(k);
      xs[k] = parts_[k].unrank(r % n);
      r /= n;
    }
    if (r != 0) throw std::out_of_range("rank out of range for " + name());
    return join(xs);
  }
  std::string format(const GroupElement& x) const override {
    auto a = split(x);
    std::string s = "<";
    for (std::size_t k = 0; k < parts_.size(); ++k) s += (k ? ", " : "") + parts_[k].format(a[k]);
    return s + ">";
  }
  GroupElement parse(std::string_view text) const override {
    text = detail::trim(text);
    if (text.size() < 2 || text.front() != '<' || text.back() != '>')
      throw LiteralError("direct sum literal must look like <x, y, ...>");
    auto fields = detail::split_top(text.substr(1, text.size() - 2), ',');
    if (fields.size() != parts_.size()) throw LiteralError("direct sum literal has wrong arity");
    std::vector<GroupElement> xs;
    for (std::size_t k = 0; k < parts_.size(); ++k) xs.push_back(parts_[k].parse(fields[k]));
    return join(xs);
  }

 private:
  std::uint64_t finite_order(std::size_t k) const {
    Cardinal c = parts_[k].order();
    if (!c.is_finite()) throw std::domain_error("no canonical enumeration for a direct sum with infinite summands");
    return c.value().convert_to<std::uint64_t>();
  }

  std::vector<GroupHandle> parts_;
  FGAbelian ab_;
};

/// Finite subgroup of an ambient group, enumerated by closure; elements keep
/// the ambient payloads and literal syntax.
class SubgroupGroup final : public FiniteGroupBase {
 public:
  SubgroupGroup(GroupHandle ambient, std::vector<GroupElement> gens, std::string label = {})
      : ambient_(std::move(ambient)), label_(std::move(label)) {
    const GroupElement e = ambient_.identity();
    for (auto& g : gens) {
      if (!ambient_.contains(g)) throw std::invalid_argument("subgroup generator not in " + ambient_.name());
      if (!(g == e) && std::find(gens_.begin(), gens_.end(), g) == gens_.end()) gens_.push_back(std::move(g));
    }
    if (label_.empty()) label_ = "<" + std::to_string(gens_.size()) + " gens> <= " + ambient_.name();
  }

  const GroupHandle& ambient() const { return ambient_; }

  std::string name() const override { return label_; }
  GroupElement identity() const override { return ambient_.identity(); }
  GroupElement mul(const GroupElement& x, const GroupElement& y) const override { return ambient_.mul(x, y); }
  GroupElement inv(const GroupElement& x) const override { return ambient_.inv(x); }
  std::vector<GroupElement> generators() const override { return gens_; }
  std::string format(const GroupElement& x) const override { return ambient_.format(x); }
  GroupElement parse(std::string_view text) const override {
    GroupElement x = ambient_.parse(text);
    if (!contains(x)) throw LiteralError("element not in subgroup " + label_);
    return x;
  }

 protected:
  /// Canonical order: ambient rank when available, else closure order.
  std::vector<GroupElement> build_elements() const override {
    auto el = closure(detail::ImplModel{*this}, gens_, kMaxEnumeration);
    try {
      std::vector<std::pair<std::uint64_t, GroupElement>> keyed;
      for (auto& x : el) keyed.emplace_back(ambient_.rank(x), x);
      std::sort(keyed.begin(), keyed.end());
      for (std::size_t i = 0; i < el.size(); ++i) el[i] = std::move(keyed[i].second);
    } catch (const std::domain_error&) {
    }
    return el;
  }

 private:
  GroupHandle ambient_;
  std::vector<GroupElement> gens_;
  std::string label_;
};

// Constructors.

inline GroupHandle cyclic(std::int64_t n) { return GroupHandle(std::make_shared<CyclicGroup>(n)); }
inline GroupHandle integers() { return GroupHandle(std::make_shared<IntegersGroup>()); }
inline GroupHandle dihedral(std::int64_t n) { return GroupHandle(std::make_shared<DihedralGroup>(n)); }
/// n = 0 gives Heis(Z).
inline GroupHandle heisenberg(std::int64_t n) { return GroupHandle(std::make_shared<HeisenbergGroup>(n)); }
inline GroupHandle abelian_group(FGAbelian a) { return GroupHandle(std::make_shared<AbelianGroup>(std::move(a))); }
inline GroupHandle direct_sum(std::vector<GroupHandle> parts) {
  return GroupHandle(std::make_shared<DirectSumGroup>(std::move(parts)));
}

inline GroupHandle permutation(std::size_t m, const std::vector<std::string>& cycle_literals, std::string name = {}) {
  PermutationGroup scratch(m, {});
  std::vector<GroupElement> gens;
  for (const auto& lit : cycle_literals) gens.push_back(scratch.parse_cycles(lit));
  return GroupHandle(std::make_shared<PermutationGroup>(m, std::move(gens), std::move(name)));
}

inline GroupHandle symmetric(std::size_t n) {
  if (n < 1) throw LiteralError("symmetric group needs n >= 1");
  std::vector<std::string> gens;
  if (n >= 2) {
    std::string cyc = "(";
    for (std::size_t i = 1; i <= n; ++i) cyc += (i > 1 ? " " : "") + std::to_string(i);
    gens.push_back(cyc + ")");
    gens.push_back("(1 2)");
  }
  return permutation(n, gens, "S" + std::to_string(n));
}

inline GroupHandle alternating(std::size_t n) {
  if (n < 1) throw LiteralError("alternating group needs n >= 1");
  std::vector<std::string> gens;
  for (std::size_t k = 3; k <= n; ++k) gens.push_back("(1 2 " + std::to_string(k) + ")");
  return permutation(n, gens, "A" + std::to_string(n));
}

inline GroupHandle subgroup_generated(const GroupHandle& g, std::vector<GroupElement> gens, std::string label = {}) {
  return GroupHandle(std::make_shared<SubgroupGroup>(g, std::move(gens), std::move(label)));
}

inline GroupHandle derived_subgroup(const GroupHandle& g) {
  if (!g.is_finite()) throw std::domain_error("derived_subgroup needs a finite group, got " + g.name());
  auto el = derived_subgroup_elements(g);
  return subgroup_generated(g, std::move(el), "[" + g.name() + ", " + g.name() + "]");
}

inline std::vector<GroupHandle> lower_central_series(const GroupHandle& g) {
  if (!g.is_finite()) throw std::domain_error("lower_central_series needs a finite group, got " + g.name());
  std::vector<GroupHandle> out;
  auto terms = lower_central_series_elements(g);
  for (std::size_t k = 0; k < terms.size(); ++k)
    out.push_back(subgroup_generated(g, std::move(terms[k]), g.name() + "_" + std::to_string(k + 1)));
  return out;
}

/// nullopt means "not nilpotent".
inline std::optional<std::size_t> nilpotency_class(const GroupHandle& g) {
  if (!g.is_finite()) throw std::domain_error("nilpotency_class needs a finite group, got " + g.name());
  return nilpotency_class_of(lower_central_series_elements(g));
}

/// Homomorphism between finite groups stored as a full table.
struct FiniteHom {
  GroupHandle source;
  GroupHandle target;
  std::map<GroupElement, GroupElement> table;

  GroupElement operator()(const GroupElement& x) const {
    auto it = table.find(x);
    if (it == table.end()) throw std::invalid_argument("element outside the domain of the homomorphism");
    return it->second;
  }
};

/// Extends generator images to a homomorphism, breadth-first over the
/// source; nullopt when the images do not define one.
inline std::optional<FiniteHom> extend_generator_images(const GroupHandle& source, const GroupHandle& target,
                                                        const std::vector<GroupElement>& images) {
  const auto gens = source.generators();
  if (gens.size() != images.size()) throw std::invalid_argument("one image per generator is required");
  FiniteHom h{source, target, {}};
  std::vector<GroupElement> queue{source.identity()};
  h.table.emplace(source.identity(), target.identity());
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const GroupElement x = queue[head];
    const GroupElement fx = h.table.at(x);
    for (std::size_t i = 0; i < gens.size(); ++i) {
      GroupElement y = source.mul(x, gens[i]);
      GroupElement fy = target.mul(fx, images[i]);
      auto [it, fresh] = h.table.emplace(y, fy);
      if (fresh) {
        if (queue.size() >= kMaxEnumeration) throw EnumerationLimitError(kMaxEnumeration);
        queue.push_back(std::move(y));
      } else if (!(it->second == fy)) {
        return std::nullopt;
      }
    }
  }
  return h;
}

}  // namespace nilprod
