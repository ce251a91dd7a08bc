#pragma once

// Adapter exposing a typed group model (Nil2Group, FamilyGroup, ...) through
// the runtime GroupHandle interface. Typed elements are serialized into the
// integer payload of a GroupElement.

#include <concepts>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nilprod/abelian.hpp"
#include "nilprod/groups.hpp"

namespace nilprod {

namespace detail {

class PayloadWriter {
 public:
  void put(std::int64_t v) { out_.push_back(v); }
  void put_vec(const std::vector<std::int64_t>& v) {
    out_.push_back(static_cast<std::int64_t>(v.size()));
    out_.insert(out_.end(), v.begin(), v.end());
  }
  GroupElement finish() && { return GroupElement{std::move(out_)}; }

 private:
  std::vector<std::int64_t> out_;
};

class PayloadReader {
 public:
  explicit PayloadReader(const GroupElement& g) : data_(g.payload) {}
  std::int64_t get() {
    if (pos_ >= data_.size()) throw std::invalid_argument("truncated element payload");
    return data_[pos_++];
  }
  std::vector<std::int64_t> get_vec() {
    std::int64_t n = get();
    if (n < 0 || static_cast<std::uint64_t>(n) > data_.size() - pos_)
      throw std::invalid_argument("malformed element payload");
    std::vector<std::int64_t> v(data_.begin() + static_cast<std::ptrdiff_t>(pos_),
                                data_.begin() + static_cast<std::ptrdiff_t>(pos_ + static_cast<std::size_t>(n)));
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  void expect_end() const {
    if (pos_ != data_.size()) throw std::invalid_argument("trailing data in element payload");
  }

 private:
  const std::vector<std::int64_t>& data_;
  std::size_t pos_ = 0;
};

/// Finite cardinal as a machine integer below 2^62.
inline std::uint64_t finite_size(const Cardinal& c, const std::string& what) {
  if (!c.is_finite()) throw std::domain_error(what + " is infinite");
  if (c.value() >= (BigInt(1) << 62)) throw std::domain_error(what + " is too large to rank");
  return c.value().convert_to<std::uint64_t>();
}

/// Lexicographic rank of a coordinate vector in a finite abelian group.
inline std::uint64_t abelian_rank(const FGAbelian& a, const AbelianElement& x) {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    if (a.factors()[i] == 0) throw std::domain_error("no canonical enumeration for infinite " + a.str());
    r = r * static_cast<std::uint64_t>(a.factors()[i]) + static_cast<std::uint64_t>(x.coords.at(i));
  }
  return r;
}

inline AbelianElement abelian_unrank(const FGAbelian& a, std::uint64_t r) {
  AbelianElement x = a.zero();
  for (std::size_t i = a.rank(); i-- > 0;) {
    auto d = a.factors()[i];
    if (d == 0) throw std::domain_error("no canonical enumeration for infinite " + a.str());
    x.coords[i] = static_cast<std::int64_t>(r % static_cast<std::uint64_t>(d));
    r /= static_cast<std::uint64_t>(d);
  }
  if (r != 0) throw std::out_of_range("rank out of range for " + a.str());
  return x;
}

/// "1,0,3" (no brackets) for a coordinate vector.
inline std::string format_coords(const AbelianElement& x) {
  std::string s;
  for (std::size_t i = 0; i < x.coords.size(); ++i) s += (i ? "," : "") + std::to_string(x.coords[i]);
  return s;
}

inline std::vector<std::int64_t> parse_coords(std::string_view s) {
  s = trim(s);
  std::vector<std::int64_t> out;
  if (s.empty()) return out;
  for (auto part : split_top(s, ',')) out.push_back(parse_int(part));
  return out;
}

}  // namespace detail

template <class M>
concept TypedGroup = requires(const M& m, const typename M::element_type& x, const GroupElement& p,
                              std::string_view s, std::uint64_t r) {
  { m.name() } -> std::convertible_to<std::string>;
  { m.identity() } -> std::convertible_to<typename M::element_type>;
  { m.mul(x, x) } -> std::convertible_to<typename M::element_type>;
  { m.inv(x) } -> std::convertible_to<typename M::element_type>;
  { m.generators() } -> std::convertible_to<std::vector<typename M::element_type>>;
  { m.order() } -> std::convertible_to<Cardinal>;
  { m.contains(x) } -> std::convertible_to<bool>;
  { m.abelianization() } -> std::convertible_to<const FGAbelian&>;
  { m.abelianize(x) } -> std::convertible_to<AbelianElement>;
  { m.is_abelian() } -> std::convertible_to<bool>;
  { m.rank(x) } -> std::convertible_to<std::uint64_t>;
  { m.unrank(r) } -> std::convertible_to<typename M::element_type>;
  { m.format(x) } -> std::convertible_to<std::string>;
  { m.parse(s) } -> std::convertible_to<typename M::element_type>;
  { m.encode(x) } -> std::same_as<GroupElement>;
  { m.decode(p) } -> std::same_as<typename M::element_type>;
};

template <TypedGroup M>
class TypedGroupImpl final : public GroupImpl {
 public:
  explicit TypedGroupImpl(std::shared_ptr<const M> model) : m_(std::move(model)) {}

  const M& model() const { return *m_; }
  const std::shared_ptr<const M>& model_ptr() const { return m_; }

  std::string name() const override { return m_->name(); }
  GroupElement identity() const override { return m_->encode(m_->identity()); }
  GroupElement mul(const GroupElement& x, const GroupElement& y) const override {
    return m_->encode(m_->mul(m_->decode(x), m_->decode(y)));
  }
  GroupElement inv(const GroupElement& x) const override { return m_->encode(m_->inv(m_->decode(x))); }
  std::vector<GroupElement> generators() const override {
    std::vector<GroupElement> out;
    for (const auto& g : m_->generators()) out.push_back(m_->encode(g));
    return out;
  }
  Cardinal order() const override { return m_->order(); }
  bool contains(const GroupElement& x) const override {
    try {
      return m_->contains(m_->decode(x));
    } catch (const std::invalid_argument&) {
      return false;
    }
  }
  const FGAbelian& abelianization() const override { return m_->abelianization(); }
  AbelianElement abelianize(const GroupElement& x) const override { return m_->abelianize(m_->decode(x)); }
  bool is_abelian() const override { return m_->is_abelian(); }
  std::uint64_t rank(const GroupElement& x) const override { return m_->rank(m_->decode(x)); }
  GroupElement unrank(std::uint64_t r) const override { return m_->encode(m_->unrank(r)); }
  std::string format(const GroupElement& x) const override { return m_->format(m_->decode(x)); }
  GroupElement parse(std::string_view text) const override { return m_->encode(m_->parse(text)); }

 private:
  std::shared_ptr<const M> m_;
};

template <TypedGroup M>
GroupHandle as_handle(std::shared_ptr<const M> model) {
  return GroupHandle(std::make_shared<TypedGroupImpl<M>>(std::move(model)));
}

/// The typed model behind a handle, or nullptr when the handle wraps
/// something else.
template <TypedGroup M>
std::shared_ptr<const M> model_of(const GroupHandle& g) {
  if (!g.ptr()) return nullptr;
  auto p = dynamic_cast<const TypedGroupImpl<M>*>(g.ptr().get());
  return p ? p->model_ptr() : nullptr;
}

}  // namespace nilprod
