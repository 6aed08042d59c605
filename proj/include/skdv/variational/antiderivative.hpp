#pragma once

// Exact-derivative witness search for local differential polynomials.
//
// Two tools: the jet-space homotopy operator, which produces G with
// d_x G = p whenever p is exact, and a terminating integration-by-parts
// reduction that splits any p into d_x G + R with R free of reducible
// top-order terms.

#include <map>
#include <optional>

#include "skdv/core/diffpoly.hpp"
#include "skdv/variational/partial.hpp"

namespace skdv::variational {

/// Jet variables (order-0 atoms of non-constant Jet/TimeJet kind) in `p`.
inline std::vector<Atom> jet_variables(const DiffPoly& p) {
  std::vector<Atom> vars;
  for (const auto& [atoms, c] : p)
    for (const auto& a : atoms) {
      if (!a.is_jet_like() || a.constant) continue;
      Atom base = a.with_order(0);
      if (std::find(vars.begin(), vars.end(), base) == vars.end()) vars.push_back(base);
    }
  std::sort(vars.begin(), vars.end());
  return vars;
}

/// Euler operator restricted to local atoms: sum_k (-D)^k dL/d(var_k).
inline DiffPoly euler_local(const DiffPoly& p, const Atom& var) {
  DiffPoly out;
  const int top = max_order(p, var);
  for (int k = 0; k <= top; ++k) {
    DiffPoly t = partial_left(p, var.with_order(k));
    if (t.is_zero()) continue;
    t = dx(t, k);
    if (k % 2 == 1) t *= Rational(-1);
    out += t;
  }
  return out;
}

inline bool has_super_atoms(const DiffPoly& p) {
  for (const auto& [atoms, c] : p)
    for (const auto& a : atoms)
      if (a.is_super()) return true;
  return false;
}

/// Homotopy-operator antiderivative. Returns nullopt when `p` is not an
/// exact x-derivative. Integration constants are zero.
inline std::optional<DiffPoly> homotopy_antiderivative(const DiffPoly& p) {
  if (!is_local(p) || has_super_atoms(p))
    throw UndecidableError("antiderivative search needs a local jet polynomial");
  if (p.is_zero()) return DiffPoly{};

  std::map<int, DiffPoly> by_degree;
  for (const auto& [atoms, c] : p) {
    int degree = 0;
    for (const auto& a : atoms)
      if (!a.constant) ++degree;
    by_degree[degree].add_canonical(atoms, c);
  }
  if (by_degree.count(0)) return std::nullopt;

  DiffPoly witness;
  for (const auto& [degree, part] : by_degree) {
    DiffPoly g;
    for (const Atom& var : jet_variables(part)) {
      const int top = max_order(part, var);
      for (int k = 1; k <= top; ++k) {
        DiffPoly q = partial_left(part, var.with_order(k));
        if (q.is_zero()) continue;
        for (int i = 0; i < k; ++i) {
          const int m = k - 1 - i;
          DiffPoly t = dx(q, m);
          if (m % 2 == 1) t *= Rational(-1);
          g += atom_poly(var.with_order(i)) * t;
        }
      }
    }
    witness += g * Rational(1, degree);
  }
  if (dx(witness) != p) return std::nullopt;
  return witness;
}

struct PartialIntegration {
  DiffPoly primitive;  // G
  DiffPoly remainder;  // R, with p = d_x G + R
};

namespace detail {

// A term c * N * f_{K-1}^j * f_K is reducible when f_K is the unique atom of
// maximal order K >= 1 and every other atom has order <= K-2 or is f_{K-1}
// itself (at most once for odd f). Returns the index of f_K and j.
inline std::optional<std::pair<std::size_t, int>> reducible_top(const std::vector<Atom>& atoms) {
  int top = -1;
  for (const auto& a : atoms) {
    if (a.kind == AtomKind::Nonlocal || a.is_super()) return std::nullopt;
    if (!a.constant) top = std::max(top, a.order);
  }
  if (top < 1) return std::nullopt;
  std::optional<std::size_t> idx;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].constant || atoms[i].order != top) continue;
    if (idx) return std::nullopt;
    idx = i;
  }
  const Atom& t = atoms[*idx];
  int j = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i == *idx || atoms[i].constant) continue;
    const Atom& a = atoms[i];
    if (a.same_variable(t) && a.order == top - 1) {
      ++j;
    } else if (a.order > top - 2) {
      return std::nullopt;
    }
  }
  if (t.is_odd() && j > 0) return std::nullopt;
  return std::make_pair(*idx, j);
}

}  // namespace detail

/// Splits p = d_x G + R by repeated integration by parts on top-order
/// atoms. Terminates: each step replaces a term of maximal order K by terms
/// of maximal order < K.
inline PartialIntegration integrate_by_parts(const DiffPoly& p) {
  PartialIntegration out;
  DiffPoly work = p;
  for (int guard = 0; guard < 100000; ++guard) {
    bool progressed = false;
    for (const auto& [atoms, c] : work) {
      auto top = detail::reducible_top(atoms);
      if (!top) continue;
      auto [i, j] = *top;
      std::vector<Atom> lowered = atoms;
      lowered[i] = atoms[i].with_order(atoms[i].order - 1);
      DiffPoly t = DiffPoly::from_monomial(Monomial{c / (j + 1), std::move(lowered)});
      out.primitive += t;
      work -= dx(t);
      progressed = true;
      break;
    }
    if (!progressed) {
      out.remainder = std::move(work);
      return out;
    }
  }
  throw Error("integration by parts did not terminate");
}

}  // namespace skdv::variational
