#pragma once

// First-order Lagrangians: momenta, the Legendre transformation and the
// velocity Hessian.

#include <map>
#include <string>
#include <vector>

#include "skdv/variational/euler.hpp"

namespace skdv {

/// Density linear (or at most quadratic, for the Hessian) in the TDot atoms
/// of the dynamical fields. TDot atoms never carry x-derivatives.
struct FirstOrderLagrangian {
  DiffPoly density;
  FieldTable fields;

  std::vector<std::string> dynamical() const { return fields.names_of(FieldKind::Dynamical); }

  /// Terms containing a time-derivative atom.
  DiffPoly kinetic() const {
    DiffPoly out;
    for (const auto& [atoms, c] : density)
      if (std::any_of(atoms.begin(), atoms.end(),
                      [](const Atom& a) { return a.kind == AtomKind::TimeJet; }))
        out.add_canonical(atoms, c);
    return out;
  }
  DiffPoly potential() const { return density - kinetic(); }

  void validate() const {
    fields.check(density);
    density.require_parity("Lagrangian");
    if (!density.compatible_with(Parity::Even)) throw ParityError("Lagrangian density must be even");
    for (const auto& [atoms, c] : density)
      for (const auto& a : atoms) {
        if (a.kind == AtomKind::TimeJet && a.order != 0)
          throw UnsupportedError("x-derivatives of time derivatives in a first-order Lagrangian");
        if (a.kind == AtomKind::Nonlocal) throw UnsupportedError("nonlocal Lagrangian density");
      }
  }
};

inline int tdot_degree(const std::vector<Atom>& atoms) {
  return static_cast<int>(std::count_if(atoms.begin(), atoms.end(), [](const Atom& a) {
    return a.kind == AtomKind::TimeJet;
  }));
}

/// Pi_f = dL/dTDot(f), left derivative.
inline std::map<std::string, DiffPoly> momenta(const FirstOrderLagrangian& L) {
  L.validate();
  std::map<std::string, DiffPoly> out;
  for (const auto& f : L.dynamical())
    out[f] = variational::partial_left(L.density, L.fields.time_atom(f));
  return out;
}

struct LegendreResult {
  std::map<std::string, DiffPoly> momenta;
  LocalFunctional hamiltonian;  // fields: the Lagrangian's table plus momenta
};

/// Table of `L` with a conjugate momentum added for every dynamical field.
inline FieldTable phase_space(const FieldTable& fields) {
  FieldTable out = fields;
  for (const auto& f : fields.names_of(FieldKind::Dynamical))
    if (!fields.at(f).conjugate) out.add_momentum(f);
  return out;
}

/// H_L = sum_f TDot(f) * Pi_f - L for a Lagrangian linear in the velocities.
inline LegendreResult legendre(const FirstOrderLagrangian& L) {
  L.validate();
  for (const auto& [atoms, c] : L.density)
    if (tdot_degree(atoms) > 1)
      throw UnsupportedError("Legendre transformation needs a Lagrangian linear in time derivatives");
  LegendreResult r;
  r.momenta = momenta(L);
  DiffPoly h = -L.density;
  for (const auto& [f, p] : r.momenta) h += L.fields.tdot(f) * p;
  if (contains_time_atoms(h)) throw Error("time derivatives survive the Legendre transformation");
  r.hamiltonian = LocalFunctional{std::move(h), phase_space(L.fields)};
  return r;
}

struct Hessian {
  std::vector<std::string> fields;
  std::vector<std::vector<DiffPoly>> entries;
  bool is_degenerate = false;
};

namespace detail {

inline DiffPoly determinant(std::vector<std::vector<DiffPoly>> m) {
  const std::size_t n = m.size();
  if (n == 0) return DiffPoly(1);
  if (n == 1) return m[0][0];
  DiffPoly det;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<DiffPoly>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<DiffPoly> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(std::move(row));
    }
    DiffPoly t = m[0][j] * determinant(std::move(minor));
    det += (j % 2 == 0) ? t : -t;
  }
  return det;
}

}  // namespace detail

/// Second left derivatives with respect to the velocities. Degeneracy is
/// decided on the even block by cofactor expansion; an odd block that is
/// identically zero makes the Hessian degenerate, a nonzero one is not
/// supported.
inline Hessian hessian(const FirstOrderLagrangian& L) {
  L.validate();
  Hessian h;
  h.fields = L.dynamical();
  const std::size_t n = h.fields.size();
  h.entries.assign(n, std::vector<DiffPoly>(n));
  for (std::size_t i = 0; i < n; ++i) {
    DiffPoly p = variational::partial_left(L.density, L.fields.time_atom(h.fields[i]));
    for (std::size_t j = 0; j < n; ++j)
      h.entries[i][j] = variational::partial_left(p, L.fields.time_atom(h.fields[j]));
  }
  std::vector<std::size_t> even, odd;
  for (std::size_t i = 0; i < n; ++i)
    (L.fields.at(h.fields[i]).parity == Parity::Even ? even : odd).push_back(i);
  bool odd_block_zero = true;
  for (auto i : odd)
    for (auto j : odd) odd_block_zero = odd_block_zero && h.entries[i][j].is_zero();
  if (!odd.empty()) {
    if (!odd_block_zero) throw UnsupportedError("nonzero odd-odd velocity Hessian block");
    h.is_degenerate = true;
    return h;
  }
  std::vector<std::vector<DiffPoly>> block;
  for (auto i : even) {
    std::vector<DiffPoly> row;
    for (auto j : even) row.push_back(h.entries[i][j]);
    block.push_back(std::move(row));
  }
  h.is_degenerate = detail::determinant(std::move(block)).is_zero();
  return h;
}

namespace detail {

inline std::vector<std::vector<Rational>> invert(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) throw Error("singular velocity Hessian");
    std::swap(m[c], m[piv]);
    std::swap(inv[c], inv[piv]);
    const Rational d = m[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      m[c][k] /= d;
      inv[c][k] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const Rational f = m[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        m[r][k] -= f * m[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

}  // namespace detail

/// Legendre transformation of a regular bosonic Lagrangian
///   L = 1/2 v^T M v + A(phi) v - V(phi),  M constant and invertible,
/// giving H = 1/2 (Pi - A)^T M^{-1} (Pi - A) + V.
inline LegendreResult regular_legendre(const FirstOrderLagrangian& L) {
  Hessian h = hessian(L);
  if (h.is_degenerate) throw Error("regular Legendre transformation of a degenerate Lagrangian");
  const std::size_t n = h.fields.size();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const DiffPoly& e = h.entries[i][j];
      if (!e.is_constant()) throw UnsupportedError("velocity Hessian depends on the fields");
      m[i][j] = e.constant_term();
    }
  for (const auto& [atoms, c] : L.density)
    if (tdot_degree(atoms) > 2) throw UnsupportedError("Lagrangian beyond quadratic in velocities");
  const auto inv = detail::invert(m);

  LegendreResult r;
  FieldTable ps = phase_space(L.fields);
  DiffPoly potential = L.potential();
  std::vector<DiffPoly> shifted(n);
  for (std::size_t i = 0; i < n; ++i) {
    DiffPoly p = variational::partial_left(L.density, L.fields.time_atom(h.fields[i]));
    r.momenta[h.fields[i]] = p;
    DiffPoly a = drop_terms_with(p, [](const Atom& x) { return x.kind == AtomKind::TimeJet; });
    shifted[i] = ps.var(*ps.at(h.fields[i]).conjugate) - a;
  }
  DiffPoly hd = -potential;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (inv[i][j] != 0) hd += shifted[i] * shifted[j] * (inv[i][j] / 2);
  r.hamiltonian = LocalFunctional{std::move(hd), std::move(ps)};
  return r;
}

}  // namespace skdv
