#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "nilprod/cli/expr.hpp"
#include "nilprod/groups.hpp"
#include "nilprod/nilfam.hpp"
#include "nilprod/nilprod2.hpp"
#include "nilprod/wreath.hpp"

namespace nilprod::cli {

class EvalError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A group built from an expression. The typed pointers are set when the
/// top-level node is of that kind.
struct Evaluated {
  GroupHandle group;
  std::shared_ptr<const Nil2Group> nil2;
  std::shared_ptr<const FamilyGroup> family;
  std::shared_ptr<const WreathGroup> wreath;
};

/// Permutation degrees above this are refused outright.
inline constexpr std::int64_t kMaxPermutationDegree = 16;

inline Evaluated evaluate(const GroupExpr& e) {
  auto sub = [](const std::vector<GroupExpr>& args) {
    std::vector<GroupHandle> out;
    for (const auto& a : args) out.push_back(evaluate(a).group);
    return out;
  };
  try {
    switch (e.kind) {
      case ExprKind::Integers:
        return {integers(), nullptr, nullptr, nullptr};
      case ExprKind::Cyclic:
        return {cyclic(e.n), nullptr, nullptr, nullptr};
      case ExprKind::Dihedral:
        return {dihedral(e.n), nullptr, nullptr, nullptr};
      case ExprKind::Symmetric:
      case ExprKind::Alternating:
        if (e.n > kMaxPermutationDegree)
          throw EvalError("permutation degree " + std::to_string(e.n) + " exceeds " +
                          std::to_string(kMaxPermutationDegree));
        return {e.kind == ExprKind::Symmetric ? symmetric(e.n) : alternating(e.n), nullptr, nullptr, nullptr};
      case ExprKind::Heis: {
        const GroupExpr& r = e.args.at(0);
        if (r.kind == ExprKind::Integers) return {heisenberg(0), nullptr, nullptr, nullptr};
        if (r.kind == ExprKind::Cyclic) return {heisenberg(r.n), nullptr, nullptr, nullptr};
        throw EvalError("Heis needs Z or Z/n, got " + to_string(r));
      }
      case ExprKind::Nil2: {
        auto parts = sub(e.args);
        auto m = make_nil2(parts[0], parts[1]);
        return {as_handle(m), m, nullptr, nullptr};
      }
      case ExprKind::NilN: {
        auto f = FamilyGroup::list(sub(e.args));
        return {as_handle(f), nullptr, f, nullptr};
      }
      case ExprKind::DSum:
        return {direct_sum(sub(e.args)), nullptr, nullptr, nullptr};
      case ExprKind::Wreath: {
        auto parts = sub(e.args);
        auto w = make_wreath(parts[0], parts[1]);
        return {as_handle(w), nullptr, nullptr, w};
      }
    }
  } catch (const EvalError&) {
    throw;
  } catch (const std::exception& ex) {
    throw EvalError(to_string(e) + ": " + ex.what());
  }
  throw EvalError("unknown expression kind");
}

inline Evaluated evaluate(std::string_view text) { return evaluate(parse_expr(text)); }

}  // namespace nilprod::cli
