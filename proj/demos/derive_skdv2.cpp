// Constraint analysis of the sKdV-2 Lagrangian, printed step by step.

#include <iostream>

#include "skdv/skdv.hpp"

int main() {
  using namespace skdv;
  const ModelDef m = get_model("skdv2_lagrangian");
  std::cout << "L = " << m.lagrangian->density << "\n\n";

  const DBAReport r = run_dba(*m.lagrangian);
  for (const auto& s : r.steps) std::cout << s << '\n';

  std::cout << "\nconstraints\n";
  for (const auto& c : r.constraints)
    std::cout << "  " << c.id << " = " << c.density << "  [" << c.klass << ", " << c.status_text() << "]\n";
  std::cout << "\nmultipliers\n";
  for (const auto& [k, v] : r.multipliers) std::cout << "  " << k << " = " << v << '\n';
  std::cout << "\nH_L = " << r.H_L.density << '\n';
  std::cout << "H   = " << r.H_total.density << "\n\n";

  for (const auto& [f, e] : hamilton_equation_forms(r, r.H_total)) std::cout << "  (" << f << ")  " << e << " = 0\n";

  const CheckOutcome eq = check_lagrangian_hamiltonian_equivalence(m, r, symbolic_total_hamiltonian(r));
  std::cout << '\n';
  for (const auto& d : eq.details) std::cout << "  " << d << '\n';
  return eq.ok ? 0 : 1;
}
