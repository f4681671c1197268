#include "cli.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "acceptance.hpp"
#include "json.hpp"
#include "svanish/error.hpp"
#include "svanish/io.hpp"

namespace svanish::cli {

namespace {

using json = nlohmann::ordered_json;

const char* const kSubcommands[] = {"wcoef", "lowfreq", "design", "farfield", "xsection", "cloak-map", "verify"};

const char* describe(const std::string& name) {
  if (name == "wcoef") return "|W_n(t)| sweep over log-spaced t (CSV)";
  if (name == "lowfreq") return "low-frequency coefficient table W_{n,l} (CSV or svanish-coeffs/1)";
  if (name == "design") return "Gauss-Newton design of an S-vanishing structure (svanish-design/1)";
  if (name == "farfield") return "plane-wave scattering amplitude on a (theta, phi) grid (CSV + sidecar)";
  if (name == "xsection") return "scattering cross section over log-spaced frequencies (CSV)";
  if (name == "cloak-map") return "pushed-forward mu and eps tensors on a cubic grid (CSV + sidecar)";
  return "run the acceptance checks";
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi >= lo) || count < 1) throw DomainError("log grid needs 0 < tmin <= tmax and tcount >= 1");
  std::vector<double> t;
  for (int k = 0; k < count; ++k) {
    if (k == 0) {
      t.push_back(lo);
    } else if (k == count - 1) {
      t.push_back(hi);
    } else {
      t.push_back(std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * k / (count - 1)));
    }
  }
  return t;
}

LayeredStructure load_structure(const RunConfig& c) {
  if (c.structure.empty()) return LayeredStructure::vacuum(default_radii(1));
  return structure_from_json(read_text_file(c.structure));
}

void emit(const RunConfig& c, std::ostream& out, const std::string& text) {
  if (c.out.empty()) {
    out << text;
  } else {
    write_text_file(c.out, text);
  }
}

void emit_sidecar(const RunConfig& c, const std::string& text) {
  if (!c.out.empty()) write_text_file(c.out + ".json", text);
}

Vec3 vec(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

int cmd_wcoef(const RunConfig& c, std::ostream& out) {
  const LayeredStructure s = load_structure(c);
  std::ostringstream os;
  os << "t,n,abs_W_TE,abs_W_TM\n";
  for (double t : log_grid(c.tmin, c.tmax, c.tcount)) {
    for (int n = 1; n <= c.order; ++n) {
      os << format_number(t) << ',' << n << ',' << format_number(std::abs(scaled_coefficient(s, n, Polarization::TE, t)))
         << ',' << format_number(std::abs(scaled_coefficient(s, n, Polarization::TM, t))) << '\n';
    }
  }
  emit(c, out, os.str());
  return kOk;
}

int cmd_lowfreq(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const CoefficientTable table = lowfreq_coefficients(load_structure(c), c.order);
  if (c.format == "json") {
    emit(c, out, coefficients_to_json(table));
  } else {
    std::ostringstream os;
    os << "n,l,pol,re,im\n";
    for (const auto& e : table.entries()) {
      os << e.n << ',' << e.l << ',' << to_string(e.polarization) << ',' << format_number(e.value.real()) << ','
         << format_number(e.value.imag()) << '\n';
    }
    emit(c, out, os.str());
  }
  err << "pol  n  l  W_{n,l}\n";
  for (const auto& e : table.entries()) {
    err << std::left << std::setw(5) << to_string(e.polarization) << e.n << "  " << e.l << "  " << std::setprecision(10)
        << e.value.real() << (e.value.imag() < 0 ? " - " : " + ") << std::abs(e.value.imag()) << "i\n";
  }
  return kOk;
}

int cmd_design(const RunConfig& c, std::ostream& out, std::ostream& err) {
  DesignProblem p;
  if (!c.problem.empty()) {
    p = design_problem_from_json(read_text_file(c.problem));
  } else {
    p = make_default_problem(6, c.order);
    p.lower = c.bounds[0];
    p.upper = c.bounds[1];
    p.max_iters = c.max_iters;
    p.residual_tol = c.tol;
    p.seed = c.seed;
    p.restarts = c.restarts;
  }
  const DesignResult r = design(p);
  emit(c, out, design_result_to_json(p, r));
  err << "design: " << (r.converged ? "converged" : "not converged") << " after " << r.iterations
      << " iterations, |b| = " << r.final_residual() << " (" << r.stop_reason << ")\n";
  return r.converged ? kOk : kNumeric;
}

std::vector<double> uniform(double lo, double hi, int count, bool closed) {
  std::vector<double> v;
  for (int k = 0; k < count; ++k) {
    const int div = closed ? std::max(count - 1, 1) : count;
    v.push_back(lo + (hi - lo) * k / div);
  }
  return v;
}

int cmd_farfield(const RunConfig& c, std::ostream& out) {
  const LayeredStructure s = load_structure(c);
  const Direction k_hat(vec(c.incidence));
  const auto samples = scattering_amplitude_grid(s, c.omega, vec(c.polarization), k_hat,
                                                 uniform(0.0, std::numbers::pi, c.theta_count, true),
                                                 uniform(0.0, 2.0 * std::numbers::pi, c.phi_count, false), c.n_max);
  emit(c, out, far_field_csv(samples));
  emit_sidecar(c, far_field_sidecar(s, c.omega, vec(c.polarization), k_hat, samples.empty() ? c.n_max : samples.front().n_max));
  return kOk;
}

int cmd_xsection(const RunConfig& c, std::ostream& out) {
  const LayeredStructure s = load_structure(c);
  const Direction k_hat(vec(c.incidence));
  std::ostringstream os;
  os << "omega,n_max,sigma_quadrature,sigma_modal\n";
  for (double omega : log_grid(c.tmin, c.tmax, c.tcount)) {
    const CrossSection x = scattering_cross_section(s, omega, vec(c.polarization), k_hat, c.n_max);
    os << format_number(omega) << ',' << x.n_max << ',' << format_number(x.quadrature) << ',' << format_number(x.modal)
       << '\n';
  }
  emit(c, out, os.str());
  return kOk;
}

int cmd_cloak_map(const RunConfig& c, std::ostream& out) {
  const LayeredStructure s = load_structure(c);
  std::vector<MaterialTensorField> fields;
  for (const auto& y : cloak_sample_grid(s, c.rho, c.grid, c.half_width)) fields.push_back(push_forward(s, c.rho, y));
  emit(c, out, tensor_csv(fields));
  emit_sidecar(c, tensor_sidecar(s, c.rho));
  return kOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const auto results = acceptance::run_all(c.criteria);
  int failed = 0;
  std::ostringstream os;
  for (const auto& r : results) {
    os << acceptance::format_line(r) << '\n';
    failed += r.passed ? 0 : 1;
  }
  os << (results.size() - static_cast<std::size_t>(failed)) << "/" << results.size() << " criteria passed\n";
  emit(c, out, os.str());
  if (!c.out.empty()) out << os.str();
  return failed == 0 ? kOk : kNumeric;
}

template <class T>
void read_opt(const json& j, const char* key, T& field) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    field = it->template get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(key, e.what());
  }
}

}  // namespace

std::string to_json(const RunConfig& c) {
  json j;
  j["subcommand"] = c.subcommand;
  j["structure"] = c.structure;
  j["problem"] = c.problem;
  j["out"] = c.out;
  j["format"] = c.format;
  j["order"] = c.order;
  j["n_max"] = c.n_max;
  j["tmin"] = c.tmin;
  j["tmax"] = c.tmax;
  j["tcount"] = c.tcount;
  j["omega"] = c.omega;
  j["rho"] = c.rho;
  j["bounds"] = c.bounds;
  j["max_iters"] = c.max_iters;
  j["tol"] = c.tol;
  j["seed"] = c.seed;
  j["restarts"] = c.restarts;
  j["polarization"] = c.polarization;
  j["incidence"] = c.incidence;
  j["theta_count"] = c.theta_count;
  j["phi_count"] = c.phi_count;
  j["grid"] = c.grid;
  j["half_width"] = c.half_width;
  j["criteria"] = c.criteria;
  return j.dump(2) + "\n";
}

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("$", "expected an object");
  RunConfig c;
  read_opt(j, "subcommand", c.subcommand);
  read_opt(j, "structure", c.structure);
  read_opt(j, "problem", c.problem);
  read_opt(j, "out", c.out);
  read_opt(j, "format", c.format);
  read_opt(j, "order", c.order);
  read_opt(j, "n_max", c.n_max);
  read_opt(j, "tmin", c.tmin);
  read_opt(j, "tmax", c.tmax);
  read_opt(j, "tcount", c.tcount);
  read_opt(j, "omega", c.omega);
  read_opt(j, "rho", c.rho);
  read_opt(j, "bounds", c.bounds);
  read_opt(j, "max_iters", c.max_iters);
  read_opt(j, "tol", c.tol);
  read_opt(j, "seed", c.seed);
  read_opt(j, "restarts", c.restarts);
  read_opt(j, "polarization", c.polarization);
  read_opt(j, "incidence", c.incidence);
  read_opt(j, "theta_count", c.theta_count);
  read_opt(j, "phi_count", c.phi_count);
  read_opt(j, "grid", c.grid);
  read_opt(j, "half_width", c.half_width);
  read_opt(j, "criteria", c.criteria);
  if (std::find(std::begin(kSubcommands), std::end(kSubcommands), c.subcommand) == std::end(kSubcommands)) {
    throw SchemaError("subcommand", "unknown subcommand '" + c.subcommand + "'");
  }
  if (c.format != "csv" && c.format != "json") throw SchemaError("format", "expected \"csv\" or \"json\"");
  return c;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.order < 1 || c.order > 4) throw DomainError("--order must lie in 1..4");
    if (c.subcommand == "wcoef") return cmd_wcoef(c, out);
    if (c.subcommand == "lowfreq") return cmd_lowfreq(c, out, err);
    if (c.subcommand == "design") return cmd_design(c, out, err);
    if (c.subcommand == "farfield") return cmd_farfield(c, out);
    if (c.subcommand == "xsection") return cmd_xsection(c, out);
    if (c.subcommand == "cloak-map") return cmd_cloak_map(c, out);
    if (c.subcommand == "verify") return cmd_verify(c, out);
    err << "error: unknown subcommand '" << c.subcommand << "'\n";
    return kUsage;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << '\n';
    return kSchema;
  } catch (const DomainError& e) {
    err << "error: invalid input: " << e.what() << '\n';
    return kSchema;
  } catch (const Error& e) {
    err << "error: numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumeric;
  }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Layered-sphere scattering coefficients, S-vanishing design, far fields and cloak tensors"};
  app.require_subcommand(1);
  RunConfig parsed;
  std::string config_path;
  bool dump_config = false;

  // Each option records how to copy its value onto a config loaded from --config.
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides;
  auto bind = [&](CLI::App* sub, const std::string& name, auto& field, const std::string& help) {
    CLI::Option* opt = sub->add_option(name, field, help)->capture_default_str();
    auto* ptr = &field;
    const auto offset = reinterpret_cast<const char*>(ptr) - reinterpret_cast<const char*>(&parsed);
    overrides.emplace_back(opt, [ptr, offset](RunConfig& target) {
      using T = std::remove_reference_t<decltype(*ptr)>;
      *reinterpret_cast<T*>(reinterpret_cast<char*>(&target) + offset) = *ptr;
    });
    return opt;
  };

  for (const char* name : kSubcommands) {
    CLI::App* sub = app.add_subcommand(name, describe(name));
    sub->add_option("--config", config_path, "RunConfig JSON; explicit flags override it");
    sub->add_flag("--print-config", dump_config, "print the effective RunConfig as JSON and exit");
    bind(sub, "--out", parsed.out, "output path (default: standard output)");
    const std::string n = name;
    if (n != "verify" && n != "design") bind(sub, "--structure", parsed.structure, "svanish-structure/1 file");
    if (n == "wcoef" || n == "lowfreq" || n == "design") bind(sub, "--order", parsed.order, "target order N");
    if (n == "lowfreq") bind(sub, "--format", parsed.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    if (n == "wcoef" || n == "xsection") {
      bind(sub, "--tmin", parsed.tmin, "smallest t (frequency)");
      bind(sub, "--tmax", parsed.tmax, "largest t (frequency)");
      bind(sub, "--tcount", parsed.tcount, "number of log-spaced points");
    }
    if (n == "farfield" || n == "xsection") {
      bind(sub, "--nmax", parsed.n_max, "multipole truncation (0 = automatic)");
      bind(sub, "--polarization", parsed.polarization, "polarization vector c")->expected(3);
      bind(sub, "--incidence", parsed.incidence, "incidence direction k")->expected(3);
    }
    if (n == "farfield") {
      bind(sub, "--omega", parsed.omega, "frequency");
      bind(sub, "--theta-count", parsed.theta_count, "polar grid points on [0, pi]");
      bind(sub, "--phi-count", parsed.phi_count, "azimuthal grid points on [0, 2 pi)");
    }
    if (n == "cloak-map") {
      bind(sub, "--rho", parsed.rho, "blow-up parameter in (0, 1/2)");
      bind(sub, "--grid", parsed.grid, "grid nodes per axis");
      bind(sub, "--half-width", parsed.half_width, "grid half width");
    }
    if (n == "design") {
      bind(sub, "--problem", parsed.problem, "svanish-design/1 problem file");
      bind(sub, "--bounds", parsed.bounds, "parameter bounds")->expected(2);
      bind(sub, "--max-iters", parsed.max_iters, "iteration limit per start");
      bind(sub, "--tol", parsed.tol, "residual tolerance");
      bind(sub, "--seed", parsed.seed, "multistart seed");
      bind(sub, "--restarts", parsed.restarts, "extra random starts");
    }
    if (n == "verify") bind(sub, "--criteria", parsed.criteria, "run only these criteria");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  RunConfig config = parsed;
  config.subcommand = app.get_subcommands().front()->get_name();
  if (!config_path.empty()) {
    try {
      config = config_from_json(read_text_file(config_path));
    } catch (const SchemaError& e) {
      err << "error: " << e.what() << '\n';
      return kSchema;
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return kUsage;
    }
    config.subcommand = app.get_subcommands().front()->get_name();
    for (auto& [opt, apply] : overrides) {
      if (opt->count() > 0) apply(config);
    }
  }
  if (dump_config) {
    out << to_json(config);
    return kOk;
  }
  return run(config, out, err);
}

}  // namespace svanish::cli
