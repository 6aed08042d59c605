#pragma once

// Finite-dimensional stand-in for the field theory: every field becomes 32
// lattice values in a small Grassmann algebra, x-derivatives become the
// spectral differentiation matrix, and functional derivatives are read off
// by perturbing with nilpotent variation generators.
//
// Generators 0 and 1 carry field values; 2 and 3 are reserved for
// variations (generator 2 alone for odd variables, the even product 2*3 for
// even ones). Fields are band-limited to modes |k| <= 2, so products of
// degree < 8 stay below Nyquist and lattice sums are exact integrals.

#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "skdv/core/diffpoly.hpp"
#include "skdv/core/field_table.hpp"

namespace oracle {

inline constexpr int kBits = 4;
inline constexpr int kSize = 1 << kBits;
inline constexpr unsigned kPhysical = 0b0011;
inline constexpr unsigned kOddVar = 0b0100;
inline constexpr unsigned kEvenVar = 0b1100;

struct GV {
  std::array<double, kSize> c{};

  static GV scalar(double v) {
    GV g;
    g.c[0] = v;
    return g;
  }
  GV& operator+=(const GV& o) {
    for (int i = 0; i < kSize; ++i) c[i] += o.c[i];
    return *this;
  }
  GV operator*(double s) const {
    GV g = *this;
    for (double& v : g.c) v *= s;
    return g;
  }
};

// Sign of theta^a theta^b -> theta^(a|b) with generators in increasing order.
inline int reorder_sign(unsigned a, unsigned b) {
  int swaps = 0;
  for (unsigned rest = b; rest; rest &= rest - 1) {
    const unsigned bit = rest & (~rest + 1);
    swaps += std::popcount(a & ~(bit | (bit - 1)));
  }
  return swaps % 2 ? -1 : 1;
}

inline GV operator*(const GV& x, const GV& y) {
  GV out;
  for (unsigned a = 0; a < kSize; ++a) {
    if (x.c[a] == 0) continue;
    for (unsigned b = 0; b < kSize; ++b) {
      if ((a & b) || y.c[b] == 0) continue;
      out.c[a | b] += reorder_sign(a, b) * x.c[a] * y.c[b];
    }
  }
  return out;
}

using Field = std::vector<GV>;

struct Lattice {
  static constexpr int N = 32;
  double length = 2 * std::numbers::pi;
  double h = length / N;
  std::vector<std::vector<double>> D;  // spectral d/dx, Nyquist dropped

  Lattice() : D(N, std::vector<double>(N, 0.0)) {
    // L = 2 pi, so mode k has wavenumber k.
    for (int j = 0; j < N; ++j)
      for (int i = 0; i < N; ++i) {
        double s = 0;
        for (int k = 1; k < N / 2; ++k) s += k * std::sin(k * h * (j - i));
        D[j][i] = -2.0 / N * s;
      }
  }

  Field apply(const Field& f, int k, bool transpose = false) const {
    Field cur = f;
    for (int r = 0; r < k; ++r) {
      Field next(N);
      for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i) {
          const double d = transpose ? D[i][j] : D[j][i];
          if (d != 0) next[j] += cur[i] * d;
        }
      cur = std::move(next);
    }
    return cur;
  }

  double x(int i) const { return h * i; }
};

inline const Lattice& lattice() {
  static const Lattice l;
  return l;
}

/// Lattice values of every non-parameter field plus numeric parameters.
struct State {
  std::map<std::string, Field> fields;
  std::map<std::string, double> params;
};

/// Band-limited random trigonometric profile with |k| <= 2.
inline std::vector<double> random_profile(std::mt19937_64& rng, bool zero_mean = false) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const double c0 = zero_mean ? 0.0 : d(rng);
  const double a1 = d(rng), b1 = d(rng), a2 = d(rng), b2 = d(rng);
  std::vector<double> out(Lattice::N);
  for (int i = 0; i < Lattice::N; ++i) {
    const double x = lattice().x(i);
    out[i] = c0 + a1 * std::cos(x) + b1 * std::sin(x) + a2 * std::cos(2 * x) + b2 * std::sin(2 * x);
  }
  return out;
}

inline State random_state(const skdv::FieldTable& t, std::mt19937_64& rng) {
  State s;
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (const auto& spec : t.specs()) {
    if (spec.kind == skdv::FieldKind::Parameter) {
      s.params[spec.name] = d(rng);
      continue;
    }
    Field f(Lattice::N);
    if (spec.parity == skdv::Parity::Even) {
      const auto body = random_profile(rng), soul = random_profile(rng);
      for (int i = 0; i < Lattice::N; ++i) {
        f[i].c[0] = body[i];
        f[i].c[0b11] = soul[i];
      }
    } else {
      const auto g1 = random_profile(rng), g2 = random_profile(rng);
      for (int i = 0; i < Lattice::N; ++i) {
        f[i].c[0b01] = g1[i];
        f[i].c[0b10] = g2[i];
      }
    }
    s.fields[spec.name] = std::move(f);
  }
  return s;
}

/// Pointwise evaluation. `shift` adds a constant to one jet variable.
class Evaluator {
 public:
  explicit Evaluator(const State& s) : s_(s) {}

  Field eval(const skdv::DiffPoly& p, const skdv::Atom* shifted = nullptr, const GV* shift = nullptr) {
    Field out(Lattice::N);
    for (const auto& [atoms, c] : p) {
      Field term(Lattice::N, GV::scalar(static_cast<double>(c)));
      for (const auto& a : atoms) {
        if (a.kind != skdv::AtomKind::Jet) throw skdv::UnsupportedError("oracle evaluates local jets only");
        if (a.constant) {
          for (auto& v : term) v = v * s_.params.at(a.field);
          continue;
        }
        const Field& v = jet(a.field, a.order);
        const bool hit = shifted && a == *shifted;
        for (int i = 0; i < Lattice::N; ++i) {
          GV val = v[i];
          if (hit) val += *shift;
          term[i] = term[i] * val;
        }
      }
      for (int i = 0; i < Lattice::N; ++i) out[i] += term[i];
    }
    return out;
  }

  const Field& jet(const std::string& f, int k) {
    auto key = std::make_pair(f, k);
    auto it = jets_.find(key);
    if (it != jets_.end()) return it->second;
    return jets_.emplace(key, lattice().apply(s_.fields.at(f), k)).first->second;
  }

 private:
  const State& s_;
  std::map<std::pair<std::string, int>, Field> jets_;
};

/// h * sum_i p(x_i): exact integral for band-limited data.
inline GV integral(const skdv::DiffPoly& p, const State& s) {
  Evaluator ev(s);
  GV out;
  for (const auto& v : ev.eval(p)) out += v * lattice().h;
  return out;
}

inline int max_order_of(const skdv::DiffPoly& p, const std::string& field) {
  int top = -1;
  for (const auto& [atoms, c] : p)
    for (const auto& a : atoms)
      if (a.kind == skdv::AtomKind::Jet && a.field == field) top = std::max(top, a.order);
  return top;
}

/// Lattice functional derivative (1/h) dF/d f_i of F = h sum_i p_i, from the
/// right (the variation generator sits to the right) or from the left.
inline Field gradient(const skdv::DiffPoly& p, const skdv::FieldSpec& f, const State& s, bool left) {
  Evaluator ev(s);
  Field out(Lattice::N);
  const bool odd = f.parity == skdv::Parity::Odd;
  GV eps;
  eps.c[odd ? kOddVar : kEvenVar] = 1.0;
  const unsigned var_bits = odd ? kOddVar : kEvenVar;
  const int top = max_order_of(p, f.name);
  for (int k = 0; k <= top; ++k) {
    const skdv::Atom a = skdv::Atom::jet(f.name, k, f.parity);
    const Field shifted = ev.eval(p, &a, &eps);
    Field partial(Lattice::N);
    for (int i = 0; i < Lattice::N; ++i)
      for (unsigned m = 0; m < kSize; ++m) {
        if ((m & ~kPhysical) != 0) continue;
        double v = shifted[i].c[m | var_bits];
        if (odd && left && std::popcount(m) % 2 == 1) v = -v;
        partial[i].c[m] = v;
      }
    // Chain rule through the k-th derivative matrix.
    Field back = lattice().apply(partial, k, true);
    for (int i = 0; i < Lattice::N; ++i) out[i] += back[i];
  }
  return out;
}

/// {F, G} for F = int f, G = int g with the canonical structure
/// {a, conj(a)} = omega_a: +1 for an even field, -1 for its momentum and for
/// odd pairs.
inline GV bracket(const skdv::DiffPoly& f, const skdv::DiffPoly& g, const skdv::FieldTable& t, const State& s) {
  GV out;
  for (const auto& spec : t.specs()) {
    if (!spec.conjugate) continue;
    const double w =
        spec.parity == skdv::Parity::Odd ? -1.0 : (spec.kind == skdv::FieldKind::Momentum ? -1.0 : 1.0);
    const Field df = gradient(f, spec, s, false);
    const Field dg = gradient(g, t.at(*spec.conjugate), s, true);
    for (int i = 0; i < Lattice::N; ++i) out += (df[i] * dg[i]) * (w * lattice().h);
  }
  return out;
}

/// Largest absolute coefficient.
inline double norm(const GV& g) {
  double m = 0;
  for (double v : g.c) m = std::max(m, std::abs(v));
  return m;
}

inline double distance(const GV& a, const GV& b) {
  double m = 0;
  for (int i = 0; i < kSize; ++i) m = std::max(m, std::abs(a.c[i] - b.c[i]));
  return m;
}

inline double distance(const Field& a, const Field& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    GV d = a[i];
    d += b[i] * -1.0;
    m = std::max(m, norm(d));
  }
  return m;
}

}  // namespace oracle
