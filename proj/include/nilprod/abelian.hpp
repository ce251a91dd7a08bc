#pragma once

// Finitely generated abelian groups, Smith normal form and tensor products.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nilprod/numeric.hpp"

namespace nilprod {

class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntegerMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("IntegerMatrix: ragged initializer");
      for (auto v : r) data_.emplace_back(v);
    }
  }

  static IntegerMatrix identity(std::size_t n) {
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  BigInt& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool is_diagonal() const {
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (i != j && (*this)(i, j) != 0) return false;
    return true;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  /// row[dst] += k * row[src]
  void add_row(std::size_t dst, std::size_t src, const BigInt& k) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += k * (*this)(src, j);
  }
  /// col[dst] += k * col[src]
  void add_col(std::size_t dst, std::size_t src, const BigInt& k) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += k * (*this)(i, src);
  }
  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }

  friend IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("IntegerMatrix: dimension mismatch");
    IntegerMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const BigInt& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend bool operator==(const IntegerMatrix& a, const IntegerMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  /// Exact determinant by fraction-free (Bareiss) elimination.
  BigInt determinant() const {
    if (rows_ != cols_) throw std::invalid_argument("determinant of non-square matrix");
    std::size_t n = rows_;
    if (n == 0) return 1;
    IntegerMatrix m = *this;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (m(k, k) == 0) {
        std::size_t p = k + 1;
        while (p < n && m(p, k) == 0) ++p;
        if (p == n) return 0;
        m.swap_rows(k, p);
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i)
        for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      prev = m(k, k);
    }
    return sign * m(n - 1, n - 1);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
};

/// diagonal == left * input * right, with left and right unimodular.
struct SmithForm {
  IntegerMatrix diagonal;
  IntegerMatrix left;
  IntegerMatrix right;
};

/// Smith normal form by elementary row/column reduction. The pivot at each
/// stage is an entry of minimal nonzero absolute value in the trailing block.
inline SmithForm smith_normal_form(IntegerMatrix m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  IntegerMatrix u = IntegerMatrix::identity(rows);
  IntegerMatrix v = IntegerMatrix::identity(cols);

  const std::size_t steps = std::min(rows, cols);
  for (std::size_t t = 0; t < steps; ++t) {
    for (;;) {
      std::optional<std::pair<std::size_t, std::size_t>> best;
      BigInt best_abs;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j) {
          if (m(i, j) == 0) continue;
          BigInt a = abs(m(i, j));
          if (!best || a < best_abs) {
            best = {i, j};
            best_abs = std::move(a);
          }
        }
      if (!best) return {std::move(m), std::move(u), std::move(v)};

      m.swap_rows(t, best->first);
      u.swap_rows(t, best->first);
      m.swap_cols(t, best->second);
      v.swap_cols(t, best->second);

      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (m(i, t) == 0) continue;
        BigInt q = m(i, t) / m(t, t);
        m.add_row(i, t, -q);
        u.add_row(i, t, -q);
        if (m(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (m(t, j) == 0) continue;
        BigInt q = m(t, j) / m(t, t);
        m.add_col(j, t, -q);
        v.add_col(j, t, -q);
        if (m(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // divisibility: fold an offending row into the pivot row and retry
      std::optional<std::size_t> offending;
      for (std::size_t i = t + 1; i < rows && !offending; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (m(i, j) % m(t, t) != 0) {
            offending = i;
            break;
          }
      if (!offending) break;
      m.add_row(t, *offending, 1);
      u.add_row(t, *offending, 1);
    }
    if (m(t, t) < 0) {
      m.negate_row(t);
      u.negate_row(t);
    }
  }
  return {std::move(m), std::move(u), std::move(v)};
}

/// Element of a finitely generated abelian group: one coordinate per factor,
/// reduced into [0, d) for finite factors.
struct AbelianElement {
  std::vector<std::int64_t> coords;

  bool is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](std::int64_t c) { return c == 0; });
  }
  friend auto operator<=>(const AbelianElement&, const AbelianElement&) = default;
  friend bool operator==(const AbelianElement&, const AbelianElement&) = default;
};

/// Finitely generated abelian group Z/d1 + ... + Z/dk. A factor 0 stands for
/// Z; factors equal to 1 are never stored. The empty list is the trivial group.
class FGAbelian {
 public:
  FGAbelian() = default;
  explicit FGAbelian(std::vector<std::int64_t> factors) : factors_(std::move(factors)) {
    for (auto d : factors_) {
      if (d < 0) throw std::invalid_argument("FGAbelian: negative factor");
      if (d == 1) throw std::invalid_argument("FGAbelian: factor 1 is not allowed");
    }
  }

  /// Z/n, with n == 0 meaning Z and n == 1 the trivial group.
  static FGAbelian cyclic(std::int64_t n) {
    if (n < 0) throw std::invalid_argument("FGAbelian: negative modulus");
    return n == 1 ? FGAbelian() : FGAbelian({n});
  }

  /// Drops factors equal to 1.
  static FGAbelian from_factors(std::span<const std::int64_t> factors) {
    std::vector<std::int64_t> kept;
    for (auto d : factors)
      if (d != 1) kept.push_back(d);
    return FGAbelian(std::move(kept));
  }

  const std::vector<std::int64_t>& factors() const { return factors_; }
  std::size_t rank() const { return factors_.size(); }
  bool is_trivial() const { return factors_.empty(); }
  bool is_finite() const {
    return std::none_of(factors_.begin(), factors_.end(), [](std::int64_t d) { return d == 0; });
  }

  /// d1 | d2 | ... with zero factors last.
  bool is_canonical() const {
    for (std::size_t i = 0; i + 1 < factors_.size(); ++i) {
      std::int64_t a = factors_[i], b = factors_[i + 1];
      if (a == 0 && b != 0) return false;
      if (a != 0 && b != 0 && b % a != 0) return false;
    }
    return true;
  }

  Cardinal order() const {
    if (!is_finite()) return Cardinal::infinite();
    BigInt n = 1;
    for (auto d : factors_) n *= d;
    return Cardinal(n);
  }

  AbelianElement zero() const { return {std::vector<std::int64_t>(factors_.size(), 0)}; }

  AbelianElement element(std::vector<std::int64_t> raw) const {
    check(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = detail::reduce_mod(raw[i], factors_[i]);
    return {std::move(raw)};
  }

  bool contains(const AbelianElement& x) const {
    if (x.coords.size() != factors_.size()) return false;
    for (std::size_t i = 0; i < factors_.size(); ++i)
      if (factors_[i] != 0 && (x.coords[i] < 0 || x.coords[i] >= factors_[i])) return false;
    return true;
  }

  AbelianElement add(const AbelianElement& x, const AbelianElement& y) const {
    check(x.coords.size());
    check(y.coords.size());
    AbelianElement r{std::vector<std::int64_t>(factors_.size())};
    for (std::size_t i = 0; i < factors_.size(); ++i)
      r.coords[i] = detail::reduce_mod(detail::checked_add(x.coords[i], y.coords[i]), factors_[i]);
    return r;
  }

  AbelianElement neg(const AbelianElement& x) const {
    check(x.coords.size());
    AbelianElement r{std::vector<std::int64_t>(factors_.size())};
    for (std::size_t i = 0; i < factors_.size(); ++i)
      r.coords[i] = detail::reduce_mod(detail::checked_neg(x.coords[i]), factors_[i]);
    return r;
  }

  AbelianElement sub(const AbelianElement& x, const AbelianElement& y) const { return add(x, neg(y)); }

  AbelianElement scale(const AbelianElement& x, std::int64_t k) const {
    check(x.coords.size());
    AbelianElement r{std::vector<std::int64_t>(factors_.size())};
    for (std::size_t i = 0; i < factors_.size(); ++i) r.coords[i] = detail::mul_mod(x.coords[i], k, factors_[i]);
    return r;
  }

  /// All elements in lexicographic coordinate order; finite groups only.
  std::vector<AbelianElement> elements(std::size_t limit = 1u << 20) const {
    if (!is_finite()) throw std::domain_error("cannot enumerate an infinite abelian group");
    if (order().value() > limit) throw std::length_error("abelian group too large to enumerate");
    std::vector<AbelianElement> out;
    AbelianElement x = zero();
    for (;;) {
      out.push_back(x);
      std::size_t i = factors_.size();
      for (;;) {
        if (i == 0) return out;
        --i;
        if (++x.coords[i] < factors_[i]) break;
        x.coords[i] = 0;
      }
    }
  }

  /// "Z/2+Z/4+Z"; the trivial group prints as "0".
  std::string str() const {
    if (factors_.empty()) return "0";
    std::ostringstream os;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      if (i) os << '+';
      if (factors_[i] == 0)
        os << 'Z';
      else
        os << "Z/" << factors_[i];
    }
    return os.str();
  }

  friend bool operator==(const FGAbelian&, const FGAbelian&) = default;

 private:
  void check(std::size_t n) const {
    if (n != factors_.size()) throw std::invalid_argument("abelian element does not belong to " + str());
  }

  std::vector<std::int64_t> factors_;
};

inline FGAbelian direct_sum(const FGAbelian& a, const FGAbelian& b) {
  std::vector<std::int64_t> f = a.factors();
  f.insert(f.end(), b.factors().begin(), b.factors().end());
  return FGAbelian(std::move(f));
}

/// Z^r / (row lattice of a relation matrix) in invariant-factor form, with the
/// change of basis taking generator exponent vectors to coordinates.
class AbelianPresentation {
 public:
  AbelianPresentation(FGAbelian group, IntegerMatrix basis, std::vector<std::size_t> kept)
      : group_(std::move(group)), basis_(std::move(basis)), kept_(std::move(kept)) {}

  const FGAbelian& group() const { return group_; }
  std::size_t generators() const { return basis_.rows(); }

  /// Coordinates of the image of the exponent vector.
  AbelianElement map(std::span<const std::int64_t> exponents) const {
    if (exponents.size() != basis_.rows()) throw std::invalid_argument("exponent vector has wrong length");
    std::vector<std::int64_t> raw(kept_.size());
    for (std::size_t k = 0; k < kept_.size(); ++k) {
      BigInt acc = 0;
      for (std::size_t i = 0; i < exponents.size(); ++i)
        if (exponents[i] != 0) acc += BigInt(exponents[i]) * basis_(i, kept_[k]);
      std::int64_t d = group_.factors()[k];
      if (d != 0) {
        acc %= d;
        if (acc < 0) acc += d;
      }
      raw[k] = detail::to_int64(acc);
    }
    return {std::move(raw)};
  }

 private:
  FGAbelian group_;
  IntegerMatrix basis_;  // r x r change of basis (right transform of the Smith form)
  std::vector<std::size_t> kept_;
};

/// Abelian group on `generators` generators subject to the row relations.
inline AbelianPresentation from_relations(std::size_t generators, const IntegerMatrix& relations) {
  if (relations.rows() > 0 && relations.cols() != generators)
    throw std::invalid_argument("relation matrix must have one column per generator");
  IntegerMatrix m = relations.rows() > 0 ? relations : IntegerMatrix(0, generators);
  SmithForm s = smith_normal_form(std::move(m));
  std::vector<std::int64_t> factors;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < generators; ++i) {
    BigInt d = i < s.diagonal.rows() ? s.diagonal(i, i) : BigInt(0);
    if (d == 1) continue;
    factors.push_back(detail::to_int64(d));
    kept.push_back(i);
  }
  return AbelianPresentation(FGAbelian(std::move(factors)), std::move(s.right), std::move(kept));
}

/// Invariant-factor form of `a`, with the map from a's coordinates.
inline AbelianPresentation canonicalize(const FGAbelian& a) {
  IntegerMatrix rel(a.rank(), a.rank());
  for (std::size_t i = 0; i < a.rank(); ++i) rel(i, i) = a.factors()[i];
  return from_relations(a.rank(), rel);
}

inline FGAbelian canonical_form(const FGAbelian& a) {
  if (a.is_canonical()) return a;
  return canonicalize(a).group();
}

/// The (i, j)-indexed tensor product of two factor lists: slot (i, j) carries
/// Z/gcd(d_i, e_j); slots with gcd 1 are dropped from the coordinate vector.
class TensorGrid {
 public:
  TensorGrid() = default;
  TensorGrid(const FGAbelian& left, const FGAbelian& right) : left_(left), right_(right) {
    slot_.assign(left.rank() * right.rank(), kNoSlot);
    std::vector<std::int64_t> moduli;
    for (std::size_t i = 0; i < left.rank(); ++i)
      for (std::size_t j = 0; j < right.rank(); ++j) {
        std::int64_t g = detail::gcd0(left.factors()[i], right.factors()[j]);
        if (g == 1) continue;
        slot_[i * right.rank() + j] = moduli.size();
        moduli.push_back(g);
      }
    group_ = FGAbelian(std::move(moduli));
  }

  const FGAbelian& left() const { return left_; }
  const FGAbelian& right() const { return right_; }
  /// Uncanonicalized product group, coordinates in slot order.
  const FGAbelian& group() const { return group_; }

  std::optional<std::size_t> slot(std::size_t i, std::size_t j) const {
    std::size_t s = slot_.at(i * right_.rank() + j);
    if (s == kNoSlot) return std::nullopt;
    return s;
  }

  /// a (x) b, coordinate (i, j) = a_i * b_j mod gcd(d_i, e_j).
  AbelianElement elem(const AbelianElement& a, const AbelianElement& b) const {
    if (a.coords.size() != left_.rank() || b.coords.size() != right_.rank())
      throw std::invalid_argument("tensor_elem: element does not match its group");
    AbelianElement r = group_.zero();
    for (std::size_t i = 0; i < left_.rank(); ++i) {
      if (a.coords[i] == 0) continue;
      for (std::size_t j = 0; j < right_.rank(); ++j) {
        std::size_t s = slot_[i * right_.rank() + j];
        if (s == kNoSlot) continue;
        r.coords[s] = detail::mul_mod(a.coords[i], b.coords[j], group_.factors()[s]);
      }
    }
    return r;
  }

  /// The grid of right (x) left.
  TensorGrid transposed() const { return TensorGrid(right_, left_); }

  /// Moves an element of this grid to the transposed grid (a (x) b -> b (x) a).
  AbelianElement transpose(const AbelianElement& x) const {
    if (x.coords.size() != group_.rank()) throw std::invalid_argument("transpose: element does not match grid");
    AbelianElement r{std::vector<std::int64_t>(x.coords.size())};
    // transposed slot order is (j, i) row-major over right_ x left_
    std::size_t k = 0;
    for (std::size_t j = 0; j < right_.rank(); ++j)
      for (std::size_t i = 0; i < left_.rank(); ++i) {
        std::size_t s = slot_[i * right_.rank() + j];
        if (s == kNoSlot) continue;
        r.coords[k++] = x.coords[s];
      }
    return r;
  }

  FGAbelian canonical() const { return canonical_form(group_); }

 private:
  static constexpr std::size_t kNoSlot = static_cast<std::size_t>(-1);

  FGAbelian left_, right_, group_;
  std::vector<std::size_t> slot_;
};

/// A (x) B in invariant-factor form.
inline FGAbelian tensor(const FGAbelian& a, const FGAbelian& b) { return TensorGrid(a, b).canonical(); }

inline AbelianElement tensor_elem(const FGAbelian& a, const FGAbelian& b, const AbelianElement& x,
                                  const AbelianElement& y) {
  if (!a.contains(x) || !b.contains(y)) throw std::invalid_argument("tensor_elem: element not in its group");
  return TensorGrid(a, b).elem(x, y);
}

}  // namespace nilprod
