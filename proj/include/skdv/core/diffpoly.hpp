#pragma once

// Graded differential polynomials with exact rational coefficients.
//
// A DiffPoly is a finite sum of monomials. Each monomial is a product of jet
// atoms in canonical order; reordering odd atoms contributes the permutation
// sign to the coefficient and a repeated odd atom annihilates the monomial.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skdv/core/error.hpp"
#include "skdv/core/rational.hpp"

namespace skdv {

enum class Parity : std::uint8_t { Even = 0, Odd = 1 };

constexpr Parity operator*(Parity a, Parity b) noexcept {
  return a == b ? Parity::Even : Parity::Odd;
}
constexpr bool is_odd(Parity p) noexcept { return p == Parity::Odd; }
inline const char* to_string(Parity p) { return is_odd(p) ? "odd" : "even"; }

/// Jet       : d_x^order f
/// TimeJet   : d_x^order d_t f
/// Super     : D^order Phi  (supercovariant derivative of a superfield)
/// SuperTime : D^order d_t Phi
/// Nonlocal  : d_x^{-1} applied to `arg`
enum class AtomKind : std::uint8_t { Jet, TimeJet, Super, SuperTime, Nonlocal };

class DiffPoly;

struct Atom {
  AtomKind kind = AtomKind::Jet;
  std::string field;
  int order = 0;
  Parity parity = Parity::Even;
  bool constant = false;  // parameters: annihilated by d_x and d_t
  std::shared_ptr<const DiffPoly> arg;

  static Atom jet(std::string field, int order, Parity parity, bool constant = false) {
    return Atom{AtomKind::Jet, std::move(field), constant ? 0 : order, parity, constant, nullptr};
  }
  static Atom time_jet(std::string field, int order, Parity parity) {
    return Atom{AtomKind::TimeJet, std::move(field), order, parity, false, nullptr};
  }
  static Atom super(std::string field, int order, Parity field_parity, bool time = false) {
    // D is odd, so every application flips the parity of the superfield.
    const Parity p = (order % 2 == 0) ? field_parity : field_parity * Parity::Odd;
    return Atom{time ? AtomKind::SuperTime : AtomKind::Super, std::move(field), order, p, false,
                nullptr};
  }

  bool is_odd() const noexcept { return skdv::is_odd(parity); }
  bool is_local() const noexcept { return kind != AtomKind::Nonlocal; }
  bool is_super() const noexcept {
    return kind == AtomKind::Super || kind == AtomKind::SuperTime;
  }
  bool is_jet_like() const noexcept {
    return kind == AtomKind::Jet || kind == AtomKind::TimeJet;
  }
  /// Same dependent variable (kind and field), ignoring the derivative order.
  bool same_variable(const Atom& o) const noexcept {
    return kind == o.kind && field == o.field && kind != AtomKind::Nonlocal;
  }
  Atom with_order(int k) const {
    Atom a = *this;
    a.order = k;
    return a;
  }
};

int compare(const Atom& a, const Atom& b);
inline bool operator<(const Atom& a, const Atom& b) { return compare(a, b) < 0; }
inline bool operator==(const Atom& a, const Atom& b) { return compare(a, b) == 0; }
inline bool operator!=(const Atom& a, const Atom& b) { return compare(a, b) != 0; }

struct Monomial {
  Rational coeff{1};
  std::vector<Atom> atoms;

  Parity parity() const {
    Parity p = Parity::Even;
    for (const auto& a : atoms) p = p * a.parity;
    return p;
  }
};

/// Puts the atoms in canonical order, folding the sign of the odd
/// transpositions into the coefficient. Returns nullopt for the zero monomial
/// (vanishing coefficient or a repeated odd atom).
inline std::optional<Monomial> normalize(Monomial m) {
  if (m.coeff == 0) return std::nullopt;
  auto& v = m.atoms;
  bool negate = false;
  for (std::size_t i = 1; i < v.size(); ++i) {
    for (std::size_t j = i; j > 0 && v[j] < v[j - 1]; --j) {
      if (v[j].is_odd() && v[j - 1].is_odd()) negate = !negate;
      std::swap(v[j], v[j - 1]);
    }
  }
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i].is_odd() && v[i] == v[i - 1]) return std::nullopt;
  if (negate) m.coeff = -m.coeff;
  return m;
}

class DiffPoly {
 public:
  using TermMap = std::map<std::vector<Atom>, Rational>;

  DiffPoly() = default;
  explicit DiffPoly(Rational c) {
    if (c != 0) terms_.emplace(std::vector<Atom>{}, std::move(c));
  }
  explicit DiffPoly(int c) : DiffPoly(Rational(c)) {}

  static DiffPoly from_atom(Atom a) {
    DiffPoly p;
    p.terms_.emplace(std::vector<Atom>{std::move(a)}, Rational(1));
    return p;
  }

  static DiffPoly from_monomial(Monomial m) {
    DiffPoly p;
    p.add_monomial(std::move(m));
    return p;
  }

  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  const TermMap& terms() const noexcept { return terms_; }
  auto begin() const noexcept { return terms_.begin(); }
  auto end() const noexcept { return terms_.end(); }

  /// Adds a monomial, normalizing it first.
  void add_monomial(Monomial m) {
    if (auto n = normalize(std::move(m))) add_canonical(std::move(n->atoms), n->coeff);
  }

  /// Adds a term whose atom list is already canonical and odd-square free.
  void add_canonical(std::vector<Atom> atoms, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(std::move(atoms), c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Parity of the polynomial, or nullopt for a mixed-parity sum. Zero is even.
  std::optional<Parity> parity() const {
    std::optional<Parity> p;
    for (const auto& [atoms, c] : terms_) {
      Parity q = Parity::Even;
      for (const auto& a : atoms) q = q * a.parity;
      if (p && *p != q) return std::nullopt;
      p = q;
    }
    return p.value_or(Parity::Even);
  }

  bool is_homogeneous() const { return parity().has_value(); }

  /// Zero is compatible with either parity.
  bool compatible_with(Parity want) const {
    if (is_zero()) return true;
    auto p = parity();
    return p && *p == want;
  }

  Parity require_parity(const char* what) const {
    auto p = parity();
    if (!p) throw ParityError(std::string(what) + ": mixed-parity polynomial");
    return *p;
  }

  /// Constant term (coefficient of the empty atom list).
  Rational constant_term() const {
    auto it = terms_.find(std::vector<Atom>{});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
  }

  /// Coefficient of the first term in canonical order.
  Rational leading_coefficient() const {
    return terms_.empty() ? Rational(0) : terms_.begin()->second;
  }

  DiffPoly& operator+=(const DiffPoly& o) {
    for (const auto& [atoms, c] : o.terms_) add_canonical(atoms, c);
    return *this;
  }
  DiffPoly& operator-=(const DiffPoly& o) {
    for (const auto& [atoms, c] : o.terms_) add_canonical(atoms, -c);
    return *this;
  }
  DiffPoly& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
    } else {
      for (auto& [atoms, c] : terms_) c *= s;
    }
    return *this;
  }

  friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
  friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
  friend DiffPoly operator-(DiffPoly a) { return a *= Rational(-1); }
  friend DiffPoly operator*(DiffPoly a, const Rational& s) { return a *= s; }
  friend DiffPoly operator*(const Rational& s, DiffPoly a) { return a *= s; }
  friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
    DiffPoly out;
    for (const auto& [xa, ca] : a.terms_) {
      for (const auto& [xb, cb] : b.terms_) {
        Monomial m{ca * cb, {}};
        m.atoms.reserve(xa.size() + xb.size());
        m.atoms.insert(m.atoms.end(), xa.begin(), xa.end());
        m.atoms.insert(m.atoms.end(), xb.begin(), xb.end());
        out.add_monomial(std::move(m));
      }
    }
    return out;
  }

  int compare(const DiffPoly& o) const {
    auto i = terms_.begin();
    auto j = o.terms_.begin();
    for (; i != terms_.end() && j != o.terms_.end(); ++i, ++j) {
      if (i->first < j->first) return -1;
      if (j->first < i->first) return 1;
      if (i->second != j->second) return i->second < j->second ? -1 : 1;
    }
    if (i == terms_.end()) return j == o.terms_.end() ? 0 : -1;
    return 1;
  }

  friend bool operator==(const DiffPoly& a, const DiffPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const DiffPoly& a, const DiffPoly& b) { return !(a == b); }

 private:
  TermMap terms_;
};

// Canonical atom order: local atoms by field name, then kind, then order;
// nonlocal atoms after every local atom, by structural comparison of the
// wrapped argument.
inline int compare(const Atom& a, const Atom& b) {
  const bool an = a.kind == AtomKind::Nonlocal;
  const bool bn = b.kind == AtomKind::Nonlocal;
  if (an != bn) return an ? 1 : -1;
  if (an) {
    if (a.arg == b.arg) return 0;
    return a.arg->compare(*b.arg);
  }
  if (int c = a.field.compare(b.field); c != 0) return c < 0 ? -1 : 1;
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  if (a.order != b.order) return a.order < b.order ? -1 : 1;
  return 0;
}

inline Parity monomial_parity(const std::vector<Atom>& atoms) {
  Parity p = Parity::Even;
  for (const auto& a : atoms) p = p * a.parity;
  return p;
}

inline DiffPoly atom_poly(const Atom& a) { return DiffPoly::from_atom(a); }

/// Integer power of a polynomial; an odd base squared is zero automatically.
inline DiffPoly pow(const DiffPoly& base, int k) {
  DiffPoly out(1);
  for (int i = 0; i < k; ++i) out = out * base;
  return out;
}

/// Sum of the terms with (-1)^parity signs: the grade involution.
inline DiffPoly grade_involution(const DiffPoly& p) {
  DiffPoly out;
  for (const auto& [atoms, c] : p) out.add_canonical(atoms, is_odd(monomial_parity(atoms)) ? -c : c);
  return out;
}

/// Maximum nesting depth of formal inverse derivatives.
inline int nonlocal_depth(const DiffPoly& p) {
  int depth = 0;
  for (const auto& [atoms, c] : p)
    for (const auto& a : atoms)
      if (a.kind == AtomKind::Nonlocal) depth = std::max(depth, 1 + nonlocal_depth(*a.arg));
  return depth;
}

inline bool is_local(const DiffPoly& p) {
  for (const auto& [atoms, c] : p)
    for (const auto& a : atoms)
      if (a.kind == AtomKind::Nonlocal) return false;
  return true;
}

inline bool contains_time_atoms(const DiffPoly& p) {
  for (const auto& [atoms, c] : p)
    for (const auto& a : atoms) {
      if (a.kind == AtomKind::TimeJet || a.kind == AtomKind::SuperTime) return true;
      if (a.kind == AtomKind::Nonlocal && contains_time_atoms(*a.arg)) return true;
    }
  return false;
}

/// Wraps `arg` in a formal inverse derivative. The argument is stored with
/// leading coefficient 1 and the scale is pulled out, so that equal
/// nonlocal terms share a single atom.
inline DiffPoly make_nonlocal(const DiffPoly& arg) {
  if (arg.is_zero()) return {};
  const Parity p = arg.require_parity("inverse derivative");
  const Rational lead = arg.leading_coefficient();
  auto stored = std::make_shared<const DiffPoly>(arg * Rational(1 / lead));
  const int depth = 1 + nonlocal_depth(*stored);
  if (depth > 2) warn("inverse-derivative nesting depth " + std::to_string(depth) + " exceeds 2");
  Atom a{AtomKind::Nonlocal, {}, 0, p, false, std::move(stored)};
  return DiffPoly::from_atom(std::move(a)) * lead;
}

namespace detail {

/// Adds coeff * (atoms[0..i) * replacement * atoms(i..n)) to `out`.
inline void splice(DiffPoly& out, const std::vector<Atom>& atoms, std::size_t i,
                   const Rational& coeff, const DiffPoly& replacement) {
  for (const auto& [ratoms, rc] : replacement) {
    Monomial m{coeff * rc, {}};
    m.atoms.reserve(atoms.size() + ratoms.size());
    m.atoms.insert(m.atoms.end(), atoms.begin(), atoms.begin() + static_cast<long>(i));
    m.atoms.insert(m.atoms.end(), ratoms.begin(), ratoms.end());
    m.atoms.insert(m.atoms.end(), atoms.begin() + static_cast<long>(i) + 1, atoms.end());
    out.add_monomial(std::move(m));
  }
}

/// Applies an even derivation given by its action on single atoms.
template <class AtomRule>
DiffPoly apply_derivation(const DiffPoly& p, AtomRule&& rule) {
  DiffPoly out;
  for (const auto& [atoms, c] : p) {
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      DiffPoly d = rule(atoms[i]);
      if (!d.is_zero()) splice(out, atoms, i, c, d);
    }
  }
  return out;
}

}  // namespace detail

/// Total x-derivative. d_x is even: plain Leibniz rule, D^2 = d_x on
/// superfield atoms, and d_x Dinv(F) = F.
inline DiffPoly dx(const DiffPoly& p) {
  return detail::apply_derivation(p, [](const Atom& a) -> DiffPoly {
    switch (a.kind) {
      case AtomKind::Jet:
        return a.constant ? DiffPoly{} : atom_poly(a.with_order(a.order + 1));
      case AtomKind::TimeJet:
        return atom_poly(a.with_order(a.order + 1));
      case AtomKind::Super:
      case AtomKind::SuperTime:
        return atom_poly(a.with_order(a.order + 2));
      case AtomKind::Nonlocal:
        return *a.arg;
    }
    return {};
  });
}

inline DiffPoly dx(const DiffPoly& p, int k) {
  DiffPoly out = p;
  for (int i = 0; i < k; ++i) out = dx(out);
  return out;
}

/// Total time derivative; only first-order time derivatives are representable.
inline DiffPoly dt(const DiffPoly& p) {
  return detail::apply_derivation(p, [](const Atom& a) -> DiffPoly {
    switch (a.kind) {
      case AtomKind::Jet: {
        if (a.constant) return {};
        Atom t = a;
        t.kind = AtomKind::TimeJet;
        return atom_poly(t);
      }
      case AtomKind::Super: {
        Atom t = a;
        t.kind = AtomKind::SuperTime;
        return atom_poly(t);
      }
      case AtomKind::TimeJet:
      case AtomKind::SuperTime:
        throw UnsupportedError("second time derivatives are not representable");
      case AtomKind::Nonlocal:
        return make_nonlocal(dt(*a.arg));
    }
    return {};
  });
}

using SubstitutionRules = std::map<std::string, DiffPoly, std::less<>>;

/// Replaces atoms for which `lookup` returns a value, multiplying out in
/// place so that odd signs stay correct.
template <class Lookup>
DiffPoly substitute_atoms(const DiffPoly& p, Lookup&& lookup) {
  DiffPoly out;
  for (const auto& [atoms, c] : p) {
    std::vector<std::optional<DiffPoly>> repl;
    repl.reserve(atoms.size());
    bool touched = false;
    for (const auto& a : atoms) {
      repl.push_back(lookup(a));
      touched = touched || repl.back().has_value();
    }
    if (!touched) {
      out.add_canonical(atoms, c);
      continue;
    }
    DiffPoly acc(c);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      acc = acc * (repl[i] ? *repl[i] : atom_poly(atoms[i]));
      if (acc.is_zero()) break;
    }
    out += acc;
  }
  return out;
}

/// Replaces every jet d_x^k f (and d_x^k d_t f) of a field named in `rules`
/// by the corresponding derivative of the rule's right-hand side. Nonlocal
/// arguments are substituted recursively.
inline DiffPoly substitute(const DiffPoly& p, const SubstitutionRules& rules) {
  std::map<std::pair<std::string, int>, DiffPoly> jet_cache;
  std::map<std::pair<std::string, int>, DiffPoly> time_cache;

  return substitute_atoms(p, [&](const Atom& a) -> std::optional<DiffPoly> {
    if (a.kind == AtomKind::Nonlocal) {
      DiffPoly inner = substitute(*a.arg, rules);
      if (inner == *a.arg) return std::nullopt;
      return make_nonlocal(inner);
    }
    if (!a.is_jet_like()) return std::nullopt;
    auto it = rules.find(a.field);
    if (it == rules.end()) return std::nullopt;
    if (!it->second.compatible_with(a.parity))
      throw ParityError("substitution rule for '" + a.field + "' changes parity");
    auto key = std::make_pair(a.field, a.order);
    if (a.kind == AtomKind::Jet) {
      auto c = jet_cache.find(key);
      if (c == jet_cache.end()) c = jet_cache.emplace(key, dx(it->second, a.order)).first;
      return c->second;
    }
    auto c = time_cache.find(key);
    if (c == time_cache.end()) c = time_cache.emplace(key, dx(dt(it->second), a.order)).first;
    return c->second;
  });
}

/// Replaces d_x^k d_t f by d_x^k of the given evolution f_t = rhs.
inline DiffPoly substitute_time_derivatives(const DiffPoly& p, const SubstitutionRules& flows) {
  return substitute_atoms(p, [&](const Atom& a) -> std::optional<DiffPoly> {
    if (a.kind == AtomKind::Nonlocal) {
      DiffPoly inner = substitute_time_derivatives(*a.arg, flows);
      if (inner == *a.arg) return std::nullopt;
      return make_nonlocal(inner);
    }
    if (a.kind != AtomKind::TimeJet) return std::nullopt;
    auto it = flows.find(a.field);
    if (it == flows.end()) return std::nullopt;
    if (!it->second.compatible_with(a.parity))
      throw ParityError("evolution of '" + a.field + "' changes parity");
    return dx(it->second, a.order);
  });
}

/// Drops every monomial containing an atom that satisfies `pred`.
template <class Pred>
DiffPoly drop_terms_with(const DiffPoly& p, Pred&& pred) {
  DiffPoly out;
  for (const auto& [atoms, c] : p)
    if (std::none_of(atoms.begin(), atoms.end(), pred)) out.add_canonical(atoms, c);
  return out;
}

/// Fields (jet variables) that occur anywhere in `p`, nonlocal arguments included.
inline void collect_fields(const DiffPoly& p, std::vector<Atom>& out) {
  for (const auto& [atoms, c] : p)
    for (const auto& a : atoms) {
      if (a.kind == AtomKind::Nonlocal) {
        collect_fields(*a.arg, out);
        continue;
      }
      Atom base = a.with_order(0);
      if (std::find(out.begin(), out.end(), base) == out.end()) out.push_back(base);
    }
}

}  // namespace skdv
