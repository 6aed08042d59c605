#pragma once

#include "skdv/core/diffpoly.hpp"
#include "skdv/variational/antiderivative.hpp"

namespace skdv {

/// Formal inverse x-derivative with zero integration constant.
///
/// The exact part is integrated explicitly; whatever has no local
/// antiderivative is kept under a single Dinv atom. d_x(dinv(p)) == p.
inline DiffPoly dinv(const DiffPoly& p) {
  if (p.is_zero()) return {};
  p.require_parity("dinv");
  auto [primitive, rest] = variational::integrate_by_parts(p);
  if (rest.is_zero()) return primitive;
  if (is_local(rest) && !variational::has_super_atoms(rest)) {
    if (auto w = variational::homotopy_antiderivative(rest)) return primitive + *w;
  }
  return primitive + make_nonlocal(rest);
}

inline DiffPoly dinv(const DiffPoly& p, int k) {
  DiffPoly out = p;
  for (int i = 0; i < k; ++i) out = dinv(out);
  return out;
}

}  // namespace skdv
