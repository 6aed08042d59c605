#pragma once

// Finite Grassmann algebra on G <= 4 generators. A basis monomial is a
// bitmask of generators taken in increasing order; e_a * e_b vanishes when
// the masks overlap and otherwise carries the sign of the merge permutation.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

namespace skdv::numerics {

inline constexpr int kMaxGenerators = 4;

/// Sign of e_a * e_b = sign * e_{a|b} for disjoint masks.
constexpr int merge_sign(unsigned a, unsigned b) {
  int swaps = 0;
  for (unsigned i = 0; i < 8; ++i)
    if (b & (1u << i)) swaps += std::popcount(a >> (i + 1));
  return (swaps % 2) ? -1 : 1;
}

template <int G>
struct SignTable {
  static constexpr int N = 1 << G;
  std::array<std::array<signed char, N>, N> s{};
  constexpr SignTable() {
    for (int a = 0; a < N; ++a)
      for (int b = 0; b < N; ++b)
        s[a][b] = (a & b) ? 0 : static_cast<signed char>(merge_sign(a, b));
  }
};

template <int G>
inline constexpr SignTable<G> kSigns{};

constexpr bool odd_mask(unsigned m) { return std::popcount(m) % 2 == 1; }

template <int G>
struct Grassmann {
  static_assert(G >= 0 && G <= kMaxGenerators);
  static constexpr int N = 1 << G;
  std::array<double, N> c{};

  static Grassmann scalar(double v) {
    Grassmann g;
    g.c[0] = v;
    return g;
  }
  static Grassmann generator(int i, double v = 1.0) {
    Grassmann g;
    g.c[1u << i] = v;
    return g;
  }

  double body() const { return c[0]; }
  bool is_even() const {
    for (int m = 0; m < N; ++m)
      if (odd_mask(m) && c[m] != 0) return false;
    return true;
  }
  bool is_odd() const {
    for (int m = 0; m < N; ++m)
      if (!odd_mask(m) && c[m] != 0) return false;
    return true;
  }
  double norm() const {
    double s = 0;
    for (double v : c) s += v * v;
    return std::sqrt(s);
  }

  Grassmann& operator+=(const Grassmann& o) {
    for (int m = 0; m < N; ++m) c[m] += o.c[m];
    return *this;
  }
  Grassmann& operator-=(const Grassmann& o) {
    for (int m = 0; m < N; ++m) c[m] -= o.c[m];
    return *this;
  }
  Grassmann& operator*=(double s) {
    for (double& v : c) v *= s;
    return *this;
  }
  friend Grassmann operator+(Grassmann a, const Grassmann& b) { return a += b; }
  friend Grassmann operator-(Grassmann a, const Grassmann& b) { return a -= b; }
  friend Grassmann operator-(Grassmann a) { return a *= -1.0; }
  friend Grassmann operator*(Grassmann a, double s) { return a *= s; }
  friend Grassmann operator*(double s, Grassmann a) { return a *= s; }
  friend Grassmann operator*(const Grassmann& a, const Grassmann& b) {
    Grassmann r;
    for (int x = 0; x < N; ++x) {
      if (a.c[x] == 0) continue;
      for (int y = 0; y < N; ++y) {
        const int s = kSigns<G>.s[x][y];
        if (s != 0) r.c[x | y] += s * a.c[x] * b.c[y];
      }
    }
    return r;
  }
  friend bool operator==(const Grassmann& a, const Grassmann& b) { return a.c == b.c; }
};

/// Structure-of-arrays field: one real array per basis monomial.
template <int G>
struct GrassmannArray {
  static constexpr int N = 1 << G;
  std::array<std::vector<double>, N> comp;

  GrassmannArray() = default;
  explicit GrassmannArray(std::size_t n) {
    for (auto& v : comp) v.assign(n, 0.0);
  }
  static GrassmannArray constant(std::size_t n, double v) {
    GrassmannArray a(n);
    std::fill(a.comp[0].begin(), a.comp[0].end(), v);
    return a;
  }

  std::size_t size() const { return comp[0].size(); }

  Grassmann<G> at(std::size_t i) const {
    Grassmann<G> g;
    for (int m = 0; m < N; ++m) g.c[m] = comp[m][i];
    return g;
  }

  GrassmannArray& operator+=(const GrassmannArray& o) {
    for (int m = 0; m < N; ++m)
      for (std::size_t i = 0; i < size(); ++i) comp[m][i] += o.comp[m][i];
    return *this;
  }
  /// this += s * o
  void axpy(double s, const GrassmannArray& o) {
    for (int m = 0; m < N; ++m)
      for (std::size_t i = 0; i < size(); ++i) comp[m][i] += s * o.comp[m][i];
  }
  GrassmannArray& operator*=(double s) {
    for (auto& v : comp)
      for (double& x : v) x *= s;
    return *this;
  }

  bool finite() const {
    for (const auto& v : comp)
      for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
  }
};

/// Pointwise graded product.
template <int G>
GrassmannArray<G> multiply(const GrassmannArray<G>& a, const GrassmannArray<G>& b) {
  constexpr int N = 1 << G;
  const std::size_t n = a.size();
  GrassmannArray<G> r(n);
  for (int x = 0; x < N; ++x) {
    const auto& ax = a.comp[x];
    bool zero = true;
    for (double v : ax)
      if (v != 0) {
        zero = false;
        break;
      }
    if (zero) continue;
    for (int y = 0; y < N; ++y) {
      const int s = kSigns<G>.s[x][y];
      if (s == 0) continue;
      const auto& by = b.comp[y];
      auto& out = r.comp[x | y];
      for (std::size_t i = 0; i < n; ++i) out[i] += s * ax[i] * by[i];
    }
  }
  return r;
}

}  // namespace skdv::numerics
