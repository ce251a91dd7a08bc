#pragma once

// Group expression language:
//   expr := atom | "nil2(" expr "," expr ")" | "nil(" expr {"," expr}+ ")"
//         | "dsum(" expr {"," expr}+ ")" | "wreath(" expr "," expr ")"
//   atom := "Z" | "Z/" nat | "D" nat | "S" nat | "A" nat | "Heis(" atom ")"
// Whitespace between tokens is ignored.

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nilprod::cli {

enum class ExprKind { Integers, Cyclic, Dihedral, Symmetric, Alternating, Heis, Nil2, NilN, DSum, Wreath };

/// AST node. `n` is used by Cyclic, Dihedral, Symmetric, Alternating (n >= 1);
/// `args` by Heis (one atom) and the composite kinds.
struct GroupExpr {
  ExprKind kind = ExprKind::Integers;
  std::int64_t n = 0;
  std::vector<GroupExpr> args;

  friend bool operator==(const GroupExpr&, const GroupExpr&) = default;
};

inline bool is_atom(const GroupExpr& e) {
  switch (e.kind) {
    case ExprKind::Integers:
    case ExprKind::Cyclic:
    case ExprKind::Dihedral:
    case ExprKind::Symmetric:
    case ExprKind::Alternating:
    case ExprKind::Heis:
      return true;
    default:
      return false;
  }
}

/// Diagnostic with the byte offset where parsing stopped.
class ParseError : public std::invalid_argument {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : std::invalid_argument("at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

inline constexpr std::size_t kMaxExprDepth = 64;
inline constexpr std::int64_t kMaxExprNat = 1'000'000'000;

namespace detail {

class ExprParser {
 public:
  explicit ExprParser(std::string_view s) : s_(s) {}

  GroupExpr parse_all() {
    GroupExpr e = expr(0);
    skip();
    if (pos_ != s_.size()) throw ParseError(pos_, "unexpected trailing input");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool at(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void expect(char c) {
    if (!at(c)) throw ParseError(pos_, std::string("expected '") + c + "'");
    ++pos_;
  }

  std::int64_t nat() {
    skip();
    const std::size_t start = pos_;
    std::int64_t v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + (s_[pos_] - '0');
      if (v > kMaxExprNat) throw ParseError(start, "number too large");
      ++pos_;
    }
    if (pos_ == start) throw ParseError(start, "expected a number");
    if (v == 0) throw ParseError(start, "n must be >= 1");
    return v;
  }

  std::vector<GroupExpr> arg_list(std::size_t depth, std::size_t min, std::size_t max, const std::string& name) {
    expect('(');
    std::vector<GroupExpr> args{expr(depth + 1)};
    while (at(',')) {
      ++pos_;
      args.push_back(expr(depth + 1));
    }
    skip();
    if (!at(')')) throw ParseError(pos_, "expected ',' or ')'");
    if (args.size() < min || args.size() > max) {
      std::string want = min == max ? std::to_string(min) : "at least " + std::to_string(min);
      throw ParseError(pos_, name + " takes " + want + " arguments, got " + std::to_string(args.size()));
    }
    ++pos_;
    return args;
  }

  GroupExpr expr(std::size_t depth) {
    if (depth > kMaxExprDepth) throw ParseError(pos_, "expression nested too deeply");
    skip();
    const std::size_t start = pos_;
    if (pos_ >= s_.size()) throw ParseError(pos_, "expected a group expression");
    const char c = s_[pos_];
    // single-letter atoms followed by a number
    if (c == 'D' || c == 'S' || c == 'A') {
      ++pos_;
      GroupExpr e;
      e.kind = c == 'D' ? ExprKind::Dihedral : c == 'S' ? ExprKind::Symmetric : ExprKind::Alternating;
      e.n = nat();
      return e;
    }
    if (c == 'Z') {
      ++pos_;
      if (at('/')) {
        ++pos_;
        return {ExprKind::Cyclic, nat(), {}};
      }
      return {ExprKind::Integers, 0, {}};
    }
    std::size_t end = pos_;
    while (end < s_.size() && std::isalnum(static_cast<unsigned char>(s_[end]))) ++end;
    const std::string_view name = s_.substr(pos_, end - pos_);
    pos_ = end;
    constexpr std::size_t kMany = static_cast<std::size_t>(-1);
    if (name == "Heis") {
      auto args = arg_list(depth, 1, 1, "Heis");
      if (!is_atom(args[0])) throw ParseError(start, "Heis takes an atom");
      return {ExprKind::Heis, 0, std::move(args)};
    }
    if (name == "nil2") return {ExprKind::Nil2, 0, arg_list(depth, 2, 2, "nil2")};
    if (name == "nil") return {ExprKind::NilN, 0, arg_list(depth, 2, kMany, "nil")};
    if (name == "dsum") return {ExprKind::DSum, 0, arg_list(depth, 2, kMany, "dsum")};
    if (name == "wreath") return {ExprKind::Wreath, 0, arg_list(depth, 2, 2, "wreath")};
    throw ParseError(start, name.empty() ? "expected a group expression" : "unknown group '" + std::string(name) + "'");
  }
};

}  // namespace detail

inline GroupExpr parse_expr(std::string_view text) { return detail::ExprParser(text).parse_all(); }

/// Canonical spelling; parse_expr(to_string(e)) == e.
inline std::string to_string(const GroupExpr& e) {
  auto list = [&](const char* head) {
    std::string s = std::string(head) + "(";
    for (std::size_t i = 0; i < e.args.size(); ++i) s += (i ? ", " : "") + to_string(e.args[i]);
    return s + ")";
  };
  switch (e.kind) {
    case ExprKind::Integers:
      return "Z";
    case ExprKind::Cyclic:
      return "Z/" + std::to_string(e.n);
    case ExprKind::Dihedral:
      return "D" + std::to_string(e.n);
    case ExprKind::Symmetric:
      return "S" + std::to_string(e.n);
    case ExprKind::Alternating:
      return "A" + std::to_string(e.n);
    case ExprKind::Heis:
      return list("Heis");
    case ExprKind::Nil2:
      return list("nil2");
    case ExprKind::NilN:
      return list("nil");
    case ExprKind::DSum:
      return list("dsum");
    case ExprKind::Wreath:
      return list("wreath");
  }
  throw std::logic_error("unknown expression kind");
}

}  // namespace nilprod::cli
