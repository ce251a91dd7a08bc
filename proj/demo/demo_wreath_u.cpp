// The pairwise function u on the nilpotent wreath product of Z/2 by Z:
// exact values and shift invariance.
#include <iostream>

#include "nilprod/nilprod.hpp"

using namespace nilprod;

int main() {
  auto w = make_wreath(cyclic(2), integers());
  HaagerupFunction u(w->base_ptr());
  std::cout << "index order: " << u.psi_description() << "\n";
  for (const char* lit : {"{0: 1}", "{| (0,1): (1)}", "{0: 1, 1: 1}", "{0: 1, 3: 1}", "{-2: 1, 2: 1}"}) {
    auto x = w->base().parse(lit);
    auto moved = shift(w->base(), GroupElement{{5}}, x);
    std::cout << "u(" << lit << ") = " << u.u(x) << ", after shifting by 5: " << w->base().format(moved)
              << " -> " << u.u(moved) << "\n";
  }
}
