#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skdv/core/diffpoly.hpp"

namespace skdv {

/// Parameter fields are symbolic constants (e.g. the family parameter a).
enum class FieldKind { Dynamical, Momentum, Multiplier, Parameter };

inline const char* to_string(FieldKind k) {
  switch (k) {
    case FieldKind::Dynamical: return "dynamical";
    case FieldKind::Momentum: return "momentum";
    case FieldKind::Multiplier: return "multiplier";
    case FieldKind::Parameter: return "parameter";
  }
  return "?";
}

struct FieldSpec {
  std::string name;
  Parity parity = Parity::Even;
  FieldKind kind = FieldKind::Dynamical;
  std::optional<std::string> conjugate = std::nullopt;
};

class FieldTable {
 public:
  FieldTable() = default;
  FieldTable(std::initializer_list<FieldSpec> specs) {
    for (const auto& s : specs) add(s);
  }

  FieldTable& add(FieldSpec spec) {
    if (spec.name.empty()) throw Error("field name must not be empty");
    if (find(spec.name)) throw Error("duplicate field '" + spec.name + "'");
    specs_.push_back(std::move(spec));
    return *this;
  }

  /// Adds the conjugate momentum "Pi_<name>" of a dynamical field, with the
  /// same parity, and links the pair both ways.
  FieldTable& add_momentum(std::string_view field) {
    const FieldSpec& f = at(field);
    if (f.kind != FieldKind::Dynamical) throw Error("momenta belong to dynamical fields only");
    std::string pname = "Pi_" + f.name;
    const Parity p = f.parity;
    const std::string fname = f.name;
    add(FieldSpec{pname, p, FieldKind::Momentum, fname});
    mutable_at(fname).conjugate = pname;
    return *this;
  }

  const FieldSpec* find(std::string_view name) const {
    for (const auto& s : specs_)
      if (s.name == name) return &s;
    return nullptr;
  }

  const FieldSpec& at(std::string_view name) const {
    if (auto* s = find(name)) return *s;
    throw UnknownFieldError(std::string(name));
  }

  bool contains(std::string_view name) const { return find(name) != nullptr; }

  const std::vector<FieldSpec>& specs() const noexcept { return specs_; }

  std::vector<std::string> names_of(FieldKind kind) const {
    std::vector<std::string> out;
    for (const auto& s : specs_)
      if (s.kind == kind) out.push_back(s.name);
    return out;
  }

  Atom atom(std::string_view name, int order = 0) const {
    const auto& s = at(name);
    return Atom::jet(s.name, order, s.parity, s.kind == FieldKind::Parameter);
  }

  Atom time_atom(std::string_view name, int order = 0) const {
    const auto& s = at(name);
    if (s.kind == FieldKind::Parameter) throw Error("parameters have no time derivative");
    return Atom::time_jet(s.name, order, s.parity);
  }

  DiffPoly var(std::string_view name, int order = 0) const { return atom_poly(atom(name, order)); }
  DiffPoly tdot(std::string_view name, int order = 0) const {
    return atom_poly(time_atom(name, order));
  }

  /// Conjugation links must be symmetric and point at existing fields.
  void validate() const {
    for (const auto& s : specs_) {
      if (!s.conjugate) continue;
      const auto* c = find(*s.conjugate);
      if (!c) throw Error("field '" + s.name + "' links to missing conjugate '" + *s.conjugate + "'");
      if (c->conjugate != s.name)
        throw Error("conjugate link of '" + s.name + "' is not symmetric");
      if (c->parity != s.parity) throw ParityError("conjugate pair '" + s.name + "' changes parity");
    }
  }

  /// Throws UnknownFieldError if `p` mentions a field that is not declared
  /// here, or ParityError if an atom disagrees with its declaration.
  void check(const DiffPoly& p) const {
    for (const auto& [atoms, c] : p)
      for (const auto& a : atoms) {
        if (a.kind == AtomKind::Nonlocal) {
          check(*a.arg);
          continue;
        }
        if (a.is_super()) continue;
        const auto& s = at(a.field);
        if (s.parity != a.parity) throw ParityError("atom of '" + a.field + "' has wrong parity");
      }
  }

 private:
  FieldSpec& mutable_at(std::string_view name) {
    for (auto& s : specs_)
      if (s.name == name) return s;
    throw UnknownFieldError(std::string(name));
  }

  std::vector<FieldSpec> specs_;
};

}  // namespace skdv
