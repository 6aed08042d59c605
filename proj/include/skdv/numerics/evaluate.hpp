#pragma once

// Pointwise evaluation of differential polynomials on Grassmann-valued
// periodic grid data.

#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "skdv/core/diffpoly.hpp"
#include "skdv/core/render.hpp"
#include "skdv/numerics/grassmann.hpp"
#include "skdv/numerics/spectral.hpp"

namespace skdv::numerics {

template <int G>
struct FieldGrid {
  double length = 0;
  std::size_t points = 0;
  std::map<std::string, GrassmannArray<G>> fields;

  FieldGrid() = default;
  FieldGrid(double l, std::size_t n) : length(l), points(n) {}

  /// Grid coordinate of node i, domain [-L/2, L/2).
  double x(std::size_t i) const { return -length / 2 + length * static_cast<double>(i) / static_cast<double>(points); }
};

inline constexpr double kMeanTolerance = 1e-12;

template <int G>
class DensityEvaluator {
 public:
  DensityEvaluator(Spectral& sp, const FieldGrid<G>& grid, const std::map<std::string, double>& params)
      : sp_(sp), grid_(grid), params_(params) {}

  GrassmannArray<G> eval(const DiffPoly& p) {
    GrassmannArray<G> out(grid_.points);
    for (const auto& [atoms, c] : p) {
      double scale = static_cast<double>(c);
      std::optional<GrassmannArray<G>> acc;
      for (const auto& a : atoms) {
        if (a.constant) {
          scale *= parameter(a.field);
          continue;
        }
        const GrassmannArray<G>& v = atom_value(a);
        acc = acc ? multiply(*acc, v) : v;
      }
      if (!acc) acc = GrassmannArray<G>::constant(grid_.points, 1.0);
      out.axpy(scale, *acc);
    }
    return out;
  }

  void clear() { cache_.clear(); nonlocal_.clear(); }

 private:
  double parameter(const std::string& name) const {
    auto it = params_.find(name);
    if (it == params_.end()) throw UnknownFieldError(name);
    return it->second;
  }

  const GrassmannArray<G>& atom_value(const Atom& a) {
    switch (a.kind) {
      case AtomKind::Jet: {
        auto key = std::make_pair(a.field, a.order);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        auto f = grid_.fields.find(a.field);
        if (f == grid_.fields.end()) throw UnknownFieldError(a.field);
        GrassmannArray<G> d(grid_.points);
        for (int m = 0; m < (1 << G); ++m) {
          if (a.order == 0) {
            d.comp[m] = f->second.comp[m];
          } else {
            sp_.derivative(f->second.comp[m], a.order, d.comp[m]);
          }
        }
        return cache_.emplace(key, std::move(d)).first->second;
      }
      case AtomKind::Nonlocal: {
        const std::string key = to_string(*a.arg);
        auto it = nonlocal_.find(key);
        if (it != nonlocal_.end()) return it->second;
        GrassmannArray<G> arg = eval(*a.arg);
        GrassmannArray<G> d(grid_.points);
        for (int m = 0; m < (1 << G); ++m) {
          double rms = 0;
          for (double v : arg.comp[m]) rms += v * v;
          rms = std::sqrt(rms / static_cast<double>(grid_.points));
          if (std::abs(sp_.mean(arg.comp[m])) > kMeanTolerance * rms)
            throw NumericalError("nonlocal term ill-defined on this state: Dinv(" + key +
                                 ") has a nonzero mean");
          sp_.antiderivative(arg.comp[m], d.comp[m]);
        }
        return nonlocal_.emplace(key, std::move(d)).first->second;
      }
      default:
        throw UnsupportedError("time-derivative and superfield atoms cannot be evaluated on a grid");
    }
  }

  Spectral& sp_;
  const FieldGrid<G>& grid_;
  const std::map<std::string, double>& params_;
  std::map<std::pair<std::string, int>, GrassmannArray<G>> cache_;
  std::map<std::string, GrassmannArray<G>> nonlocal_;
};

/// One-shot evaluation of `p` on `grid`.
template <int G>
GrassmannArray<G> eval_density(const DiffPoly& p, const FieldGrid<G>& grid,
                               const std::map<std::string, double>& params = {}) {
  Spectral sp(grid.points, grid.length);
  DensityEvaluator<G> ev(sp, grid, params);
  return ev.eval(p);
}

/// int p dx, one value per basis monomial.
template <int G>
Grassmann<G> integrate_density(const DiffPoly& p, const FieldGrid<G>& grid, Spectral& sp,
                               const std::map<std::string, double>& params = {}) {
  DensityEvaluator<G> ev(sp, grid, params);
  GrassmannArray<G> v = ev.eval(p);
  Grassmann<G> out;
  for (int m = 0; m < (1 << G); ++m) out.c[m] = sp.integral(v.comp[m]);
  return out;
}

}  // namespace skdv::numerics
