#pragma once

// N=1 superspace with one fermionic superfield Phi = xi + theta*u and
// supercovariant derivative D = d_theta + theta d_x, D^2 = d_x.

#include <string>
#include <utility>

#include "skdv/core/render.hpp"
#include "skdv/variational/euler.hpp"

namespace skdv {

/// Names of the superfield and of its components Phi = body + theta*top.
struct Superfield {
  std::string name = "Phi";
  std::string body = "xi";  // odd
  std::string top = "u";    // even

  Atom atom(int k, bool time = false) const { return Atom::super(name, k, Parity::Odd, time); }
  DiffPoly sd(int k, bool time = false) const { return atom_poly(atom(k, time)); }
};

/// body + theta * theta_part. Both slots may mix superfield atoms D^k Phi
/// with theta-independent component atoms.
struct SuperExpr {
  DiffPoly body;
  DiffPoly theta;

  SuperExpr() = default;
  SuperExpr(DiffPoly b, DiffPoly t = {}) : body(std::move(b)), theta(std::move(t)) {}

  bool is_zero() const { return body.is_zero() && theta.is_zero(); }

  SuperExpr& operator+=(const SuperExpr& o) {
    body += o.body;
    theta += o.theta;
    return *this;
  }
  SuperExpr& operator-=(const SuperExpr& o) {
    body -= o.body;
    theta -= o.theta;
    return *this;
  }
  friend SuperExpr operator+(SuperExpr a, const SuperExpr& b) { return a += b; }
  friend SuperExpr operator-(SuperExpr a, const SuperExpr& b) { return a -= b; }
  friend SuperExpr operator-(const SuperExpr& a) { return {-a.body, -a.theta}; }
  friend SuperExpr operator*(const SuperExpr& a, const Rational& s) { return {a.body * s, a.theta * s}; }
  friend SuperExpr operator*(const Rational& s, const SuperExpr& a) { return a * s; }

  // (b1 + th t1)(b2 + th t2) = b1 b2 + th (inv(b1) t2 + t1 b2)
  friend SuperExpr operator*(const SuperExpr& a, const SuperExpr& b) {
    return {a.body * b.body, grade_involution(a.body) * b.theta + a.theta * b.body};
  }
  friend bool operator==(const SuperExpr& a, const SuperExpr& b) {
    return a.body == b.body && a.theta == b.theta;
  }
  friend bool operator!=(const SuperExpr& a, const SuperExpr& b) { return !(a == b); }
};

inline SuperExpr theta_symbol() { return {DiffPoly{}, DiffPoly(1)}; }

inline std::string to_string(const SuperExpr& e) {
  if (e.theta.is_zero()) return to_string(e.body);
  std::string t = "theta*(" + to_string(e.theta) + ")";
  if (e.body.is_zero()) return t;
  return to_string(e.body) + " + " + t;
}

namespace detail {

// D applied to a theta-free polynomial: superfield atoms shift D^k -> D^{k+1}
// with the grade sign of everything to their left; component atoms give
// theta * d_x.
inline SuperExpr super_d_poly(const DiffPoly& p) {
  SuperExpr out;
  for (const auto& [atoms, c] : p) {
    Parity before = Parity::Even;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const Atom& a = atoms[i];
      if (a.is_super()) {
        Atom next = a.with_order(a.order + 1);
        next.parity = a.parity * Parity::Odd;
        splice(out.body, atoms, i, is_odd(before) ? -c : c, atom_poly(next));
      } else {
        DiffPoly d = dx(atom_poly(a));
        if (!d.is_zero()) splice(out.theta, atoms, i, c, d);
      }
      before = before * a.parity;
    }
  }
  return out;
}

}  // namespace detail

/// D(b + theta t) = D(b) + t - theta D(t).
inline SuperExpr super_d(const SuperExpr& e) {
  SuperExpr db = detail::super_d_poly(e.body);
  SuperExpr dt = detail::super_d_poly(e.theta);
  return {db.body + e.theta, db.theta - dt.body};
}

inline SuperExpr super_d(const SuperExpr& e, int k) {
  SuperExpr out = e;
  for (int i = 0; i < k; ++i) out = super_d(out);
  return out;
}

inline SuperExpr dx(const SuperExpr& e) { return {dx(e.body), dx(e.theta)}; }

/// Components of D^k Phi: (xi_m + theta u_m) for k = 2m, (u_m + theta xi_{m+1}) for k = 2m+1.
inline SuperExpr component_of(const Atom& a, const Superfield& sf = {}) {
  const bool time = a.kind == AtomKind::SuperTime;
  auto make = [&](const std::string& f, int m, Parity p) {
    return atom_poly(time ? Atom::time_jet(f, m, p) : Atom::jet(f, m, p));
  };
  const int m = a.order / 2;
  if (a.order % 2 == 0) return {make(sf.body, m, Parity::Odd), make(sf.top, m, Parity::Even)};
  return {make(sf.top, m, Parity::Even), make(sf.body, m + 1, Parity::Odd)};
}

namespace detail {

inline SuperExpr expand_poly(const DiffPoly& p, const Superfield& sf) {
  SuperExpr out;
  for (const auto& [atoms, c] : p) {
    SuperExpr acc{DiffPoly(c)};
    for (const auto& a : atoms) {
      if (a.kind == AtomKind::Nonlocal) throw UnsupportedError("inverse derivative in a superspace expression");
      acc = acc * (a.is_super() ? component_of(a, sf) : SuperExpr{atom_poly(a)});
      if (acc.is_zero()) break;
    }
    out += acc;
  }
  return out;
}

}  // namespace detail

/// Replaces every D^k Phi by its theta expansion; returns (theta^0, theta^1).
inline std::pair<DiffPoly, DiffPoly> to_components(const SuperExpr& e, const Superfield& sf = {}) {
  SuperExpr b = detail::expand_poly(e.body, sf);
  SuperExpr t = detail::expand_poly(e.theta, sf);
  return {b.body, b.theta + t.body};
}

/// int d theta (a + theta b) = b, after expanding to components.
inline DiffPoly berezin(const SuperExpr& e, const Superfield& sf = {}) { return to_components(e, sf).second; }

/// The identification Phi == D^2 Phi: every D^k Phi becomes D^{k+2} Phi.
inline SuperExpr shift_superfield(const SuperExpr& e, int by = 2) {
  auto shift = [by](const DiffPoly& p) {
    DiffPoly out;
    for (const auto& [atoms, c] : p) {
      std::vector<Atom> v = atoms;
      for (auto& a : v)
        if (a.is_super()) {
          a.order += by;
          if (by % 2 != 0) a.parity = a.parity * Parity::Odd;
        }
      out.add_monomial(Monomial{c, std::move(v)});
    }
    return out;
  };
  return {shift(e.body), shift(e.theta)};
}

struct SuperMatch {
  bool match = false;
  DiffPoly component;  // Berezin integral of the superspace density
  DiffPoly reference;  // reduced component density, orientation applied
  std::optional<DiffPoly> witness;
  std::string diagnostic;
};

/// Orientation of the superspace Hamiltonian relative to the component total
/// Hamiltonian: berezin(H_bar) == -H (mod total derivatives).
inline constexpr int kSuperOrientation = -1;

/// Compares berezin(superH) with componentH after reduction by `reduce`
/// (constraints, psi -> xi_x) modulo total x-derivatives.
template <class Reduce>
SuperMatch check_super_component_match(const SuperExpr& superH, const DiffPoly& componentH, Reduce&& reduce,
                                       const Superfield& sf = {}) {
  SuperMatch m;
  m.component = berezin(superH, sf);
  m.reference = reduce(componentH) * Rational(kSuperOrientation);
  if (!is_local(m.reference)) {
    m.diagnostic = "nonlocal terms remain after reduction: " + to_string(m.reference);
    return m;
  }
  auto r = is_total_derivative(m.component - m.reference);
  m.match = r.exact;
  m.witness = r.witness;
  if (!m.match) m.diagnostic = "difference is not a total derivative: " + to_string(m.component - m.reference);
  return m;
}

}  // namespace skdv
