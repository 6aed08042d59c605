#pragma once

// Fixed-step RK4 integration of registered evolution equations with
// Grassmann-valued fields, plus conserved-quantity monitors.

#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "skdv/models/models.hpp"
#include "skdv/numerics/evaluate.hpp"

namespace skdv::numerics {

struct SimConfig {
  std::string model = "kdv";
  ParamMap params;
  int generators = 0;
  std::size_t grid = 256;
  double length = 40.0;
  double dt = 1e-4;
  double t_final = 1.0;
  double output_interval = 0.1;
  std::string stepper = "rk4";
  std::string ic = "soliton";  // soliton | two_soliton
  double kappa = 1.0;
  double x0 = 0.0;
  double kappa2 = 0.5;
  double x02 = 5.0;
  double fermion_amplitude = 0.1;
  double fermion_width = 1.0;
  bool dealias = true;
};

/// Reads `key = value` lines; '#' starts a comment. Unknown keys are errors.
inline SimConfig parse_sim_config(std::istream& in, SimConfig cfg = {}) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string{};
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", lineno, 1);
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    auto num = [&]() {
      try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
      } catch (const std::exception&) {
        throw ParseError("bad number '" + value + "' for " + key, lineno, static_cast<int>(eq) + 2);
      }
    };
    if (key == "model") cfg.model = value;
    else if (key == "a") {
      try {
        cfg.params["a"] = parse_rational(value);
      } catch (const std::invalid_argument&) {
        throw ParseError("bad rational '" + value + "' for a", lineno, static_cast<int>(eq) + 2);
      }
    }
    else if (key == "generators") cfg.generators = static_cast<int>(num());
    else if (key == "grid" || key == "N") cfg.grid = static_cast<std::size_t>(num());
    else if (key == "length" || key == "L") cfg.length = num();
    else if (key == "dt") cfg.dt = num();
    else if (key == "t_final") cfg.t_final = num();
    else if (key == "output_interval") cfg.output_interval = num();
    else if (key == "stepper") cfg.stepper = value;
    else if (key == "ic") cfg.ic = value;
    else if (key == "kappa") cfg.kappa = num();
    else if (key == "x0") cfg.x0 = num();
    else if (key == "kappa2") cfg.kappa2 = num();
    else if (key == "x02") cfg.x02 = num();
    else if (key == "fermion_amplitude") cfg.fermion_amplitude = num();
    else if (key == "fermion_width") cfg.fermion_width = num();
    else if (key == "dealias") cfg.dealias = (value == "true" || value == "1");
    else throw ParseError("unknown key '" + key + "'", lineno, 1);
  }
  return cfg;
}

/// 2 kappa^2 sech^2(kappa (x - x0)).
inline double soliton(double x, double kappa, double x0) {
  const double s = 1.0 / std::cosh(kappa * (x - x0));
  return 2.0 * kappa * kappa * s * s;
}

/// Soliton samples on the grid; warns when the tails are not negligible at the boundary.
inline std::vector<double> soliton_ic(double kappa, double x0, double length, std::size_t n) {
  if (!(kappa > 0)) throw Error("soliton parameter kappa must be positive");
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i)
    u[i] = soliton(-length / 2 + length * static_cast<double>(i) / static_cast<double>(n), kappa, x0);
  const double tail = std::max(soliton(-length / 2, kappa, x0), soliton(length / 2, kappa, x0));
  if (tail > 1e-10) warn("soliton tails reach " + std::to_string(tail) + " at the domain boundary");
  return u;
}

struct SimReport {
  int generators = 0;
  std::vector<double> times;
  std::map<std::string, std::vector<std::vector<double>>> monitors;  // name -> per-sample components
  std::vector<double> x;
  std::map<std::string, std::vector<std::vector<double>>> final_fields;  // field -> components
  double final_time = 0;
  bool ok = true;
  std::string failure;
  std::vector<std::string> warnings;
};

/// Monitored functionals of a model: mass, momentum (for a field u) and the model Hamiltonian.
inline std::vector<std::pair<std::string, DiffPoly>> monitored_functionals(const ModelDef& m) {
  std::vector<std::pair<std::string, DiffPoly>> out;
  if (m.fields.contains("u")) {
    out.emplace_back("mass", m.fields.var("u"));
    out.emplace_back("momentum", m.fields.var("u") * m.fields.var("u"));
  }
  if (m.hamiltonian) out.emplace_back("hamiltonian", *m.hamiltonian);
  return out;
}

namespace detail {

inline bool potential_form(const ModelDef& m) {
  return m.name == "kdv_potential" || m.name == "skdv_a_potential" || m.name == "skdv2_lagrangian";
}

template <int G>
FieldGrid<G> initial_state(const SimConfig& cfg, const ModelDef& m, Spectral& sp) {
  FieldGrid<G> grid(cfg.length, cfg.grid);
  const std::size_t n = cfg.grid;
  std::vector<double> u = soliton_ic(cfg.kappa, cfg.x0, cfg.length, n);
  if (cfg.ic == "two_soliton") {
    auto u2 = soliton_ic(cfg.kappa2, cfg.x02, cfg.length, n);
    for (std::size_t i = 0; i < n; ++i) u[i] += u2[i];
  } else if (cfg.ic != "soliton") {
    throw Error("unknown initial condition '" + cfg.ic + "'");
  }
  if (potential_form(m)) {
    // Periodic potential: antiderivative of the zero-mean part.
    const double mean = sp.mean(u);
    for (double& v : u) v -= mean;
    std::vector<double> p;
    sp.antiderivative(u, p);
    u = std::move(p);
  }
  for (const auto& spec : m.fields.specs()) {
    if (spec.kind != FieldKind::Dynamical) continue;
    GrassmannArray<G> a(n);
    if (spec.parity == Parity::Even) {
      if (spec.name == "u") a.comp[0] = u;
    } else {
      for (int g = 0; g < G; ++g) {
        const double c = -4.0 + 3.0 * g;
        for (std::size_t i = 0; i < n; ++i) {
          const double z = (grid.x(i) - c) / cfg.fermion_width;
          a.comp[1u << g][i] = cfg.fermion_amplitude * (1.0 + 0.5 * g) * std::exp(-z * z);
        }
      }
    }
    grid.fields.emplace(spec.name, std::move(a));
  }
  // An auxiliary odd field tied to xi_x starts on the constraint surface.
  if (grid.fields.count("psi") && grid.fields.count("xi")) {
    auto& psi = grid.fields.at("psi");
    const auto& xi = grid.fields.at("xi");
    for (int mask = 0; mask < (1 << G); ++mask) sp.derivative(xi.comp[mask], 1, psi.comp[mask]);
  }
  if (cfg.dealias)
    for (auto& [name, a] : grid.fields)
      for (auto& c : a.comp) sp.dealias(c);
  return grid;
}

template <int G>
SimReport run(const SimConfig& cfg, const ModelDef& m) {
  SimReport rep;
  rep.generators = G;
  Spectral sp(cfg.grid, cfg.length);
  std::map<std::string, double> params;
  for (const auto& s : m.fields.specs())
    if (s.kind == FieldKind::Parameter) throw Error("model parameter '" + s.name + "' must be bound for simulation");

  const double bound = cfg.dt * std::pow(static_cast<double>(cfg.grid) * std::numbers::pi / cfg.length, 3);
  if (bound > 2.8) {
    rep.warnings.push_back("dt*(N*pi/L)^3 = " + std::to_string(bound) + " exceeds the RK4 dispersive limit 2.8");
    warn(rep.warnings.back());
  }
  if (cfg.stepper != "rk4") throw Error("unknown stepper '" + cfg.stepper + "'");
  if (!(cfg.dt > 0) || !(cfg.t_final >= 0)) throw Error("dt must be positive and t_final nonnegative");

  FieldGrid<G> state = initial_state<G>(cfg, m, sp);
  const auto monitors = monitored_functionals(m);

  auto rhs = [&](const FieldGrid<G>& s) {
    DensityEvaluator<G> ev(sp, s, params);
    std::map<std::string, GrassmannArray<G>> out;
    for (const auto& [f, r] : m.evolution) {
      GrassmannArray<G> v = ev.eval(r);
      if (cfg.dealias)
        for (auto& c : v.comp) sp.dealias(c);
      out.emplace(f, std::move(v));
    }
    return out;
  };
  auto sample = [&](double t, const FieldGrid<G>& s) {
    rep.times.push_back(t);
    for (const auto& [name, density] : monitors) {
      Grassmann<G> v = integrate_density(density, s, sp, params);
      rep.monitors[name].emplace_back(v.c.begin(), v.c.end());
    }
  };

  const long steps = std::lround(cfg.t_final / cfg.dt);
  const long every = std::max(1L, std::lround(cfg.output_interval / cfg.dt));
  sample(0.0, state);
  double t = 0;
  for (long step = 1; step <= steps; ++step) {
    auto stage = [&](const std::map<std::string, GrassmannArray<G>>& k, double h) {
      FieldGrid<G> s = state;
      for (const auto& [f, v] : k) s.fields.at(f).axpy(h, v);
      return s;
    };
    std::map<std::string, GrassmannArray<G>> k1, k2, k3, k4;
    try {
      k1 = rhs(state);
      k2 = rhs(stage(k1, cfg.dt / 2));
      k3 = rhs(stage(k2, cfg.dt / 2));
      k4 = rhs(stage(k3, cfg.dt));
    } catch (const NumericalError& e) {
      rep.ok = false;
      rep.failure = e.what();
      break;
    }
    FieldGrid<G> next = state;
    bool finite = true;
    for (auto& [f, a] : next.fields) {
      auto it = k1.find(f);
      if (it == k1.end()) continue;
      a.axpy(cfg.dt / 6, it->second);
      a.axpy(cfg.dt / 3, k2.at(f));
      a.axpy(cfg.dt / 3, k3.at(f));
      a.axpy(cfg.dt / 6, k4.at(f));
      finite = finite && a.finite();
    }
    if (!finite) {
      rep.ok = false;
      rep.failure = "non-finite values at t = " + std::to_string(t + cfg.dt);
      break;
    }
    state = std::move(next);
    t = static_cast<double>(step) * cfg.dt;
    if (step % every == 0 || step == steps) sample(t, state);
  }
  rep.final_time = t;
  for (std::size_t i = 0; i < state.points; ++i) rep.x.push_back(state.x(i));
  for (const auto& [f, a] : state.fields)
    rep.final_fields[f] = std::vector<std::vector<double>>(a.comp.begin(), a.comp.end());
  return rep;
}

}  // namespace detail

/// Runs the configured simulation; the generator count is dispatched at run time.
inline SimReport integrate(const SimConfig& cfg) {
  const ModelDef m = get_model(cfg.model, cfg.params);
  switch (cfg.generators) {
    case 0: return detail::run<0>(cfg, m);
    case 1: return detail::run<1>(cfg, m);
    case 2: return detail::run<2>(cfg, m);
    case 3: return detail::run<3>(cfg, m);
    case 4: return detail::run<4>(cfg, m);
    default: throw Error("generators must be between 0 and 4");
  }
}

inline std::string mask_label(unsigned mask) {
  if (mask == 0) return "body";
  std::string s;
  for (int g = 0; g < kMaxGenerators; ++g)
    if (mask & (1u << g)) s += "g" + std::to_string(g + 1);
  return s;
}

/// t, then one column per monitor component.
inline void write_timeseries_csv(std::ostream& os, const SimReport& r) {
  os << "t";
  for (const auto& [name, series] : r.monitors)
    for (unsigned m = 0; m < (1u << r.generators); ++m) os << ',' << name << '_' << mask_label(m);
  os << '\n';
  os.precision(17);
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    os << r.times[i];
    for (const auto& [name, series] : r.monitors)
      for (double v : series[i]) os << ',' << v;
    os << '\n';
  }
}

/// x, then one column per field component.
inline void write_state_csv(std::ostream& os, const SimReport& r) {
  os << "x";
  for (const auto& [f, comps] : r.final_fields)
    for (unsigned m = 0; m < comps.size(); ++m) os << ',' << f << '_' << mask_label(m);
  os << '\n';
  os.precision(17);
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    os << r.x[i];
    for (const auto& [f, comps] : r.final_fields)
      for (const auto& c : comps) os << ',' << c[i];
    os << '\n';
  }
}

/// Relative drift max_t |Q(t) - Q(0)| / |Q(0)| of a monitor, in the coefficient norm.
inline double relative_drift(const SimReport& r, const std::string& monitor) {
  const auto& s = r.monitors.at(monitor);
  auto norm = [](const std::vector<double>& v) {
    double q = 0;
    for (double x : v) q += x * x;
    return std::sqrt(q);
  };
  const double base = norm(s.front());
  double worst = 0;
  for (const auto& v : s) {
    std::vector<double> d(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) d[i] = v[i] - s.front()[i];
    worst = std::max(worst, norm(d));
  }
  return base > 0 ? worst / base : worst;
}

}  // namespace skdv::numerics
