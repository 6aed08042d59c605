// skdv: derivations, the golden suite, superspace expansion and simulations.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "golden.hpp"
#include "skdv/numerics/simulate.hpp"
#include "skdv/skdv.hpp"

namespace {

using json = nlohmann::json;
using namespace skdv;

enum Exit { kOk = 0, kMismatch = 1, kUsage = 2, kNumerical = 3 };

struct UsageError : Error {
  using Error::Error;
};

ParamMap parse_params(const std::vector<std::string>& items) {
  ParamMap out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--param expects key=value, got '" + item + "'");
    try {
      out[item.substr(0, eq)] = parse_rational(item.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

json fields_json(const FieldTable& t) {
  json out = json::array();
  for (const auto& s : t.specs())
    out.push_back({{"name", s.name}, {"parity", to_string(s.parity)}, {"kind", to_string(s.kind)}});
  return out;
}

json poly_map(const std::map<std::string, DiffPoly>& m) {
  json out = json::object();
  for (const auto& [k, v] : m) out[k] = to_string(v);
  return out;
}

json derive_json(const ModelDef& m) {
  json out;
  out["model"] = m.name;
  json params = json::object();
  for (const auto& [k, v] : m.params) params[k] = to_string(v);
  out["params"] = params;
  out["fields"] = fields_json(m.fields);
  json evo = json::object();
  for (const auto& [f, r] : m.evolution) evo[f] = to_string(r);
  out["evolution"] = evo;
  json xt = json::array();
  for (const auto& e : m.xt_equations) xt.push_back(to_string(e));
  out["xt_equations"] = xt;
  if (m.hamiltonian) out["hamiltonian"] = to_string(*m.hamiltonian);
  if (m.superspace_equation) {
    auto [t0, t1] = to_components(*m.superspace_equation);
    out["superspace_equation"] = {{"theta0", to_string(t0)}, {"theta1", to_string(t1)}};
  }
  if (m.superspace_hamiltonian) out["superspace_hamiltonian_berezin"] = to_string(berezin(*m.superspace_hamiltonian));
  if (!m.lagrangian) return out;

  const FirstOrderLagrangian& L = *m.lagrangian;
  out["lagrangian"] = to_string(L.density);
  const DBAReport r = run_dba(L);
  json d;
  d["momenta"] = poly_map(r.momenta);
  json cs = json::array();
  for (const auto& c : r.constraints)
    cs.push_back({{"id", c.id},
                  {"density", to_string(c.density)},
                  {"generation", c.generation},
                  {"parity", to_string(c.parity)},
                  {"status", c.status_text()},
                  {"multiplier", c.multiplier},
                  {"class", c.klass}});
  d["constraints"] = cs;
  d["multipliers"] = poly_map(r.multipliers);
  d["H_L"] = to_string(r.H_L.density);
  d["H_c"] = to_string(r.H_c.density);
  d["H_total"] = to_string(r.H_total.density);
  d["closed"] = r.closed;
  d["generations"] = r.generation;
  d["steps"] = r.steps;
  if (r.closed) {
    json eqs = json::object();
    for (const auto& [f, e] : hamilton_equation_forms(r, r.H_total)) eqs[f] = to_string(e);
    d["hamilton_equations"] = eqs;
  }
  out["dirac_bergmann"] = d;
  return out;
}

void print_text(std::ostream& os, const json& j, const std::string& indent = "") {
  for (const auto& [k, v] : j.items()) {
    if (v.is_object() || (v.is_array() && !v.empty() && v.front().is_object())) {
      os << indent << k << ":\n";
      if (v.is_object()) {
        print_text(os, v, indent + "  ");
      } else {
        for (const auto& e : v) {
          os << indent << "  -\n";
          print_text(os, e, indent + "    ");
        }
      }
    } else if (v.is_array()) {
      os << indent << k << ":\n";
      for (const auto& e : v) os << indent << "  " << (e.is_string() ? e.get<std::string>() : e.dump()) << '\n';
    } else {
      os << indent << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
  }
}

void emit(const json& j, const std::string& format, const std::string& out_path) {
  std::ostringstream ss;
  if (format == "json") {
    ss << j.dump(2) << '\n';
  } else {
    print_text(ss, j);
  }
  if (out_path.empty()) {
    std::cout << ss.str();
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw UsageError("cannot write '" + out_path + "'");
  f << ss.str();
}

int cmd_derive(const std::string& model, const std::vector<std::string>& params, const std::string& format,
               const std::string& out) {
  emit(derive_json(get_model(model, parse_params(params))), format, out);
  return kOk;
}

int cmd_verify_paper(const std::string& format) {
  const auto results = golden::run_suite();
  bool ok = true;
  json j = json::array();
  for (const auto& r : results) {
    ok = ok && r.pass;
    j.push_back({{"check", r.name}, {"pass", r.pass}, {"diff", r.diff}});
  }
  if (format == "json") {
    std::cout << j.dump(2) << '\n';
  } else {
    for (const auto& r : results) {
      std::cout << (r.pass ? "PASS  " : "FAIL  ") << r.name << '\n';
      for (const auto& d : r.diff) std::cout << "      " << d << '\n';
    }
  }
  return ok ? kOk : kMismatch;
}

int cmd_expand_super(const std::string& expr, const std::string& format) {
  const FieldTable t{{"u", Parity::Even}, {"xi", Parity::Odd}};
  auto [t0, t1] = to_components(dsl::parse_super(expr, t));
  if (format == "json") {
    std::cout << json{{"theta0", to_string(t0)}, {"theta1", to_string(t1)}}.dump(2) << '\n';
  } else {
    std::cout << "theta0: " << to_string(t0) << ", theta1: " << to_string(t1) << '\n';
  }
  return kOk;
}

int cmd_simulate(const std::string& config, const std::string& model, const std::vector<std::string>& params,
                 const std::string& format, const std::string& out) {
  numerics::SimConfig cfg;
  if (!config.empty()) {
    std::ifstream in(config);
    if (!in) throw UsageError("cannot read '" + config + "'");
    cfg = numerics::parse_sim_config(in);
  }
  if (!model.empty()) cfg.model = model;
  for (const auto& [k, v] : parse_params(params)) cfg.params[k] = v;

  const numerics::SimReport r = numerics::integrate(cfg);
  const std::string prefix = out.empty() ? "sim" : out;
  {
    std::ofstream ts(prefix + "_timeseries.csv");
    std::ofstream st(prefix + "_state.csv");
    if (!ts || !st) throw UsageError("cannot write outputs with prefix '" + prefix + "'");
    numerics::write_timeseries_csv(ts, r);
    numerics::write_state_csv(st, r);
  }
  json summary{{"model", cfg.model},
               {"generators", r.generators},
               {"final_time", r.final_time},
               {"ok", r.ok},
               {"warnings", r.warnings},
               {"outputs", {prefix + "_timeseries.csv", prefix + "_state.csv"}}};
  json drift = json::object();
  for (const auto& [name, series] : r.monitors) drift[name] = numerics::relative_drift(r, name);
  summary["relative_drift"] = drift;
  if (!r.ok) summary["failure"] = r.failure;
  if (format == "csv") {
    numerics::write_timeseries_csv(std::cout, r);
  } else if (format == "json") {
    std::cout << summary.dump(2) << '\n';
  } else {
    print_text(std::cout, summary);
  }
  return r.ok ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic and numerical toolkit for the supersymmetric KdV system"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text", "csv"}));

  std::string model, expr, out, config;
  std::vector<std::string> params;

  auto* derive = app.add_subcommand("derive", "Run the constraint analysis and write a transcript");
  derive->add_option("--model", model, "Model name")->required()->check(CLI::IsMember(model_names()));
  derive->add_option("--param", params, "Parameter binding k=v (repeatable)");
  derive->add_option("--out", out, "Output file (default stdout)");
  derive->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

  auto* verify = app.add_subcommand("verify-paper", "Run the golden suite");
  verify->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

  auto* expand = app.add_subcommand("expand-super", "Expand a superspace expression into components");
  expand->add_option("--expr", expr, "Superspace expression")->required();
  expand->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

  auto* simulate = app.add_subcommand("simulate", "Integrate a model and write CSV outputs");
  simulate->add_option("--config", config, "key = value configuration file");
  simulate->add_option("--model", model, "Model name (overrides the config)");
  simulate->add_option("--param", params, "Parameter binding k=v (repeatable)");
  simulate->add_option("--out", out, "Output prefix (default 'sim')");
  simulate->add_option("--format", format, "Summary format")->check(CLI::IsMember({"json", "text", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*derive) return cmd_derive(model, params, format, out);
    if (*verify) return cmd_verify_paper(format);
    if (*expand) return cmd_expand_super(expr, format);
    if (*simulate) return cmd_simulate(config, model, params, format, out);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
