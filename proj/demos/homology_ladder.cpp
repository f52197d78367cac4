// Prints the integral homology of G_N for N = 3..9 as a ladder, one row per
// degree, to show the stabilization of the low degrees and the extra middle
// class at N = 7.

#include <iostream>
#include <string>

#include "grassmu/homology.hpp"
#include "grassmu/schubert.hpp"

namespace {

std::string group_name(const grassmu::homology::HomologyGroup& g) {
  std::string s;
  if (g.free_rank == 1) s = "Z";
  else if (g.free_rank > 1) s = "Z^" + std::to_string(g.free_rank);
  for (const auto& d : g.torsion) {
    if (!s.empty()) s += "+";
    s += "Z/" + d.get_str();
  }
  return s.empty() ? "0" : s;
}

}  // namespace

int main() {
  constexpr int n_lo = 3, n_hi = 9;
  int top = 0;
  for (int n = n_lo; n <= n_hi; ++n)
    top = std::max(top, grassmu::schubert::grassmannian_dimension(n));

  std::cout << "q\\N";
  for (int n = n_lo; n <= n_hi; ++n) std::cout << "\tG_" << n;
  std::cout << "\n";

  for (int q = 0; q <= top; ++q) {
    std::cout << q;
    for (int n = n_lo; n <= n_hi; ++n) {
      std::cout << "\t";
      if (q > grassmu::schubert::grassmannian_dimension(n)) {
        std::cout << ".";
        continue;
      }
      std::cout << group_name(grassmu::homology::homology_group(n, q));
    }
    std::cout << "\n";
  }
  return 0;
}
