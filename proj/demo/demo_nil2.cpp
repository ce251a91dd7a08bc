// Second nilpotent product of two cyclic groups: order, a commutator, and the
// Heisenberg identification.
#include <iostream>

#include "nilprod/nilprod.hpp"

using namespace nilprod;

int main() {
  auto g = make_nil2(cyclic(4), cyclic(6));
  std::cout << g->name() << " has order " << g->order() << "\n";
  std::cout << "tensor part: " << canonical_form(g->T()).str() << "\n";

  auto a = g->embed_A(GroupElement{{1}});
  auto b = g->embed_B(GroupElement{{1}});
  std::cout << "a*b = " << g->format(g->mul(a, b)) << "\n";
  std::cout << "b*a = " << g->format(g->mul(b, a)) << "\n";
  auto c = g->mul(g->mul(a, b), g->mul(g->inv(a), g->inv(b)));
  std::cout << "[a,b] = " << g->format(c) << "\n";

  for (std::int64_t n = 2; n <= 5; ++n) {
    auto r = check_heisenberg_iso(n);
    std::cout << "nil2(Z/" << n << ", Z/" << n << ") ~ Heis(Z/" << n << "): " << (r.ok ? "verified" : r.witness)
              << " (" << r.checked << " checks)\n";
  }
}
