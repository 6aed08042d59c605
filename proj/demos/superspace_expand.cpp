// Component content of the superspace equation and Hamiltonian.

#include <iostream>

#include "skdv/skdv.hpp"

int main(int argc, char** argv) {
  using namespace skdv;
  ParamMap p;
  if (argc > 1) p["a"] = parse_rational(argv[1]);
  const ModelDef m = get_model("skdv_a_potential", p);
  const auto [t0, t1] = to_components(*m.superspace_equation);
  std::cout << "theta^0: " << t0 << " = 0\n";
  std::cout << "theta^1: " << t1 << " = 0\n";

  const SuperExpr h = models::skdv2_super_hamiltonian();
  std::cout << "\nint dtheta H_bar = " << berezin(h) << '\n';
  std::cout << "xi -> 0:          " << substitute(berezin(h), {{"xi", DiffPoly{}}}) << '\n';
  return 0;
}
