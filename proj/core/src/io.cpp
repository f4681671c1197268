#include "svanish/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "svanish/error.hpp"

namespace svanish {

namespace {

using json = nlohmann::ordered_json;

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SchemaError("$", std::string("not valid JSON: ") + e.what());
  }
}

const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path.empty() ? key : path + "." + key, "missing required field");
  return *it;
}

std::string join(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw SchemaError(path, "expected a finite number");
  return v;
}

double positive(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!(v > 0.0)) throw SchemaError(path, "must be positive");
  return v;
}

long long integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<long long>();
}

std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

bool boolean(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw SchemaError(path, "expected a boolean");
  return j.get<bool>();
}

std::vector<double> positive_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(positive(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

std::vector<double> number_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

Polarization polarization(const json& j, const std::string& path) {
  const std::string s = string(j, path);
  if (s == "TE") return Polarization::TE;
  if (s == "TM") return Polarization::TM;
  throw SchemaError(path, "expected \"TE\" or \"TM\"");
}

TransferOrdering ordering(const json& j, const std::string& path) {
  const std::string s = string(j, path);
  if (s == "outward") return TransferOrdering::outward;
  if (s == "reversed") return TransferOrdering::reversed;
  throw SchemaError(path, "expected \"outward\" or \"reversed\"");
}

json background_json(const Background& b) { return json{{"mu", b.mu}, {"eps", b.eps}}; }

Background background_from(const json& j, const std::string& path) {
  return {positive(member(j, "mu", path), join(path, "mu")), positive(member(j, "eps", path), join(path, "eps"))};
}

json structure_body(const LayeredStructure& s) {
  json j;
  j["schema"] = kStructureSchema;
  j["radii"] = s.radii();
  j["mu"] = s.mu();
  j["eps"] = s.eps();
  j["background"] = background_json(s.background());
  if (s.ordering() != TransferOrdering::outward) j["ordering"] = to_string(s.ordering());
  return j;
}

LayeredStructure structure_from(const json& j, const std::string& path) {
  check_schema_tag(string(member(j, "schema", path), join(path, "schema")), kStructureSchema, join(path, "schema"));
  std::vector<double> radii = positive_array(member(j, "radii", path), join(path, "radii"));
  std::vector<double> mu = positive_array(member(j, "mu", path), join(path, "mu"));
  std::vector<double> eps = positive_array(member(j, "eps", path), join(path, "eps"));
  if (mu.size() != eps.size()) throw SchemaError(join(path, "eps"), "must have the same length as mu");
  if (radii.size() != mu.size() + 1) throw SchemaError(join(path, "radii"), "must have one more entry than mu");
  for (std::size_t k = 1; k < radii.size(); ++k) {
    if (!(radii[k] < radii[k - 1])) {
      throw SchemaError(join(path, "radii") + "[" + std::to_string(k) + "]", "radii must be strictly decreasing");
    }
  }
  Background bg;
  if (j.contains("background")) bg = background_from(j["background"], join(path, "background"));
  LayeredStructure s(std::move(radii), std::move(mu), std::move(eps), bg);
  if (j.contains("ordering")) s = s.with_ordering(ordering(j["ordering"], join(path, "ordering")));
  return s;
}

json coefficient_array(const CoefficientTable& t) {
  json arr = json::array();
  for (const auto& e : t.entries()) {
    arr.push_back(json{{"n", e.n}, {"l", e.l}, {"pol", to_string(e.polarization)}, {"re", e.value.real()}, {"im", e.value.imag()}});
  }
  return arr;
}

std::vector<CoefficientEntry> coefficients_from(const json& arr, const std::string& path, int order) {
  if (!arr.is_array()) throw SchemaError(path, "expected an array");
  std::vector<CoefficientEntry> out;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string p = path + "[" + std::to_string(k) + "]";
    const json& e = arr[k];
    CoefficientEntry c;
    c.n = static_cast<int>(integer(member(e, "n", p), join(p, "n")));
    c.l = static_cast<int>(integer(member(e, "l", p), join(p, "l")));
    if (c.n < 1 || c.n > order || c.l < 0 || c.l > order - c.n) throw SchemaError(p, "index (n, l) outside the table");
    c.polarization = polarization(member(e, "pol", p), join(p, "pol"));
    c.value = cplx(number(member(e, "re", p), join(p, "re")), number(member(e, "im", p), join(p, "im")));
    out.push_back(c);
  }
  if (out.size() != static_cast<std::size_t>(2 * coefficients_per_polarization(order))) {
    throw SchemaError(path, "expected N(N+1) entries");
  }
  return out;
}

json problem_body(const DesignProblem& p) {
  json j;
  j["layers"] = p.layers;
  j["order"] = p.order;
  j["radii"] = p.radii;
  j["mu"] = p.mu;
  j["eps"] = p.eps;
  j["background"] = background_json(p.background);
  j["bounds"] = json::array({p.lower, p.upper});
  j["max_iters"] = p.max_iters;
  j["residual_tol"] = p.residual_tol;
  j["step_damping"] = p.step_damping;
  j["restarts"] = p.restarts;
  j["seed"] = p.seed;
  j["ordering"] = to_string(p.ordering);
  return j;
}

DesignProblem problem_from(const json& j, const std::string& path) {
  DesignProblem p;
  p.layers = static_cast<int>(integer(member(j, "layers", path), join(path, "layers")));
  if (p.layers < 1) throw SchemaError(join(path, "layers"), "must be >= 1");
  p.order = static_cast<int>(integer(member(j, "order", path), join(path, "order")));
  if (p.order < 1 || p.order > 4) throw SchemaError(join(path, "order"), "must lie in 1..4");
  p.radii = j.contains("radii") ? positive_array(j["radii"], join(path, "radii")) : default_radii(p.layers);
  p.mu = positive_array(member(j, "mu", path), join(path, "mu"));
  p.eps = positive_array(member(j, "eps", path), join(path, "eps"));
  if (j.contains("background")) p.background = background_from(j["background"], join(path, "background"));
  if (j.contains("bounds")) {
    const std::vector<double> b = positive_array(j["bounds"], join(path, "bounds"));
    if (b.size() != 2) throw SchemaError(join(path, "bounds"), "expected [lower, upper]");
    p.lower = b[0];
    p.upper = b[1];
  }
  if (j.contains("max_iters")) p.max_iters = static_cast<int>(integer(j["max_iters"], join(path, "max_iters")));
  if (j.contains("residual_tol")) p.residual_tol = positive(j["residual_tol"], join(path, "residual_tol"));
  if (j.contains("step_damping")) p.step_damping = positive(j["step_damping"], join(path, "step_damping"));
  if (j.contains("restarts")) p.restarts = static_cast<int>(integer(j["restarts"], join(path, "restarts")));
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      throw SchemaError(join(path, "seed"), "expected a non-negative integer");
    }
    p.seed = s.get<std::uint64_t>();
  }
  if (j.contains("ordering")) p.ordering = ordering(j["ordering"], join(path, "ordering"));
  try {
    p.validate();
  } catch (const DomainError& e) {
    throw SchemaError(path.empty() ? "$" : path, e.what());
  }
  return p;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void check_schema_tag(std::string_view tag, std::string_view expected, const std::string& field) {
  const auto split = [](std::string_view s) {
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) return std::pair<std::string_view, std::string_view>{s, {}};
    std::string_view version = s.substr(slash + 1);
    return std::pair<std::string_view, std::string_view>{s.substr(0, slash), version.substr(0, version.find('.'))};
  };
  const auto [name, major] = split(tag);
  const auto [want_name, want_major] = split(expected);
  if (name != want_name) {
    throw SchemaError(field, "expected \"" + std::string(expected) + "\", got \"" + std::string(tag) + "\"");
  }
  if (major != want_major) {
    throw SchemaError(field, "unsupported major version in \"" + std::string(tag) + "\"");
  }
}

std::string structure_to_json(const LayeredStructure& s) { return dump(structure_body(s)); }

LayeredStructure structure_from_json(std::string_view text) { return structure_from(parse(text), ""); }

std::string structure_hash(const LayeredStructure& s) {
  const std::string text = structure_body(s).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string coefficients_to_json(const CoefficientTable& table) {
  json j;
  j["schema"] = kCoeffsSchema;
  j["order"] = table.order();
  j["structure"] = structure_body(table.structure());
  j["coefficients"] = coefficient_array(table);
  return dump(j);
}

CoefficientTable coefficients_from_json(std::string_view text) {
  const json j = parse(text);
  check_schema_tag(string(member(j, "schema", ""), "schema"), kCoeffsSchema);
  const int order = static_cast<int>(integer(member(j, "order", ""), "order"));
  if (order < 1) throw SchemaError("order", "must be >= 1");
  LayeredStructure s = structure_from(member(j, "structure", ""), "structure");
  return CoefficientTable(order, coefficients_from(member(j, "coefficients", ""), "coefficients", order), std::move(s));
}

std::string design_problem_to_json(const DesignProblem& problem) {
  json j;
  j["schema"] = kDesignSchema;
  j["kind"] = "problem";
  j["problem"] = problem_body(problem);
  return dump(j);
}

DesignProblem design_problem_from_json(std::string_view text) {
  const json j = parse(text);
  check_schema_tag(string(member(j, "schema", ""), "schema"), kDesignSchema);
  return problem_from(member(j, "problem", ""), "problem");
}

std::string design_result_to_json(const DesignProblem& problem, const DesignResult& result) {
  json j;
  j["schema"] = kDesignSchema;
  j["kind"] = "result";
  j["problem"] = problem_body(problem);
  json r;
  r["converged"] = result.converged;
  r["iterations"] = result.iterations;
  r["stop_reason"] = result.stop_reason;
  r["final_residual"] = result.final_residual();
  r["mu"] = result.mu;
  r["eps"] = result.eps;
  r["residual_norm_history"] = result.residual_norm_history;
  r["max_imaginary_ratio"] = result.max_imaginary_ratio;
  r["starts_used"] = result.starts_used;
  r["seed"] = result.seed;
  r["algorithm"] = json{{"jacobian", "central differences, h = 1e-6 max(1, |p|)"},
                        {"pseudoinverse", "SVD, relative cutoff 1e-12"},
                        {"bounds", "clamp with active-set freeze"},
                        {"safeguard", "step cap 0.25 of the box, up to 20 halvings"},
                        {"residual", "Re W / |W bare PEC|"}};
  r["structure"] = structure_body(result.table.structure());
  r["coefficients"] = coefficient_array(result.table);
  j["result"] = std::move(r);
  return dump(j);
}

DesignResult design_result_from_json(std::string_view text) {
  const json j = parse(text);
  check_schema_tag(string(member(j, "schema", ""), "schema"), kDesignSchema);
  const DesignProblem problem = problem_from(member(j, "problem", ""), "problem");
  const json& r = member(j, "result", "");
  LayeredStructure s = structure_from(member(r, "structure", "result"), "result.structure");
  CoefficientTable table(problem.order,
                         coefficients_from(member(r, "coefficients", "result"), "result.coefficients", problem.order), s);
  DesignResult out{positive_array(member(r, "mu", "result"), "result.mu"),
                   positive_array(member(r, "eps", "result"), "result.eps"),
                   number_array(member(r, "residual_norm_history", "result"), "result.residual_norm_history"),
                   std::move(table),
                   boolean(member(r, "converged", "result"), "result.converged"),
                   static_cast<int>(integer(member(r, "iterations", "result"), "result.iterations")),
                   string(member(r, "stop_reason", "result"), "result.stop_reason"),
                   number(member(r, "max_imaginary_ratio", "result"), "result.max_imaginary_ratio"),
                   static_cast<int>(integer(member(r, "starts_used", "result"), "result.starts_used")),
                   member(r, "seed", "result").get<std::uint64_t>()};
  return out;
}

std::string far_field_csv(const std::vector<FarFieldSample>& samples) {
  std::ostringstream os;
  os << "theta,phi,re_A1,re_A2,re_A3,im_A1,im_A2,im_A3\n";
  for (const auto& s : samples) {
    os << format_number(s.theta) << ',' << format_number(s.phi);
    for (int k = 0; k < 3; ++k) os << ',' << format_number(s.amplitude(k).real());
    for (int k = 0; k < 3; ++k) os << ',' << format_number(s.amplitude(k).imag());
    os << '\n';
  }
  return os.str();
}

std::string far_field_sidecar(const LayeredStructure& s, double omega, const Vec3& c, const Direction& k_hat, int n_max) {
  json j;
  j["omega"] = omega;
  j["c"] = {c.x(), c.y(), c.z()};
  j["k_hat"] = {k_hat.vector().x(), k_hat.vector().y(), k_hat.vector().z()};
  j["n_max"] = n_max;
  j["structure_hash"] = structure_hash(s);
  return dump(j);
}

std::string tensor_csv(const std::vector<MaterialTensorField>& fields) {
  std::ostringstream os;
  os << "x1,x2,x3,mu11,mu12,mu13,mu22,mu23,mu33,eps11,eps12,eps13,eps22,eps23,eps33\n";
  static constexpr int kUpper[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};
  for (const auto& f : fields) {
    os << format_number(f.y.x()) << ',' << format_number(f.y.y()) << ',' << format_number(f.y.z());
    for (const auto& ij : kUpper) os << ',' << format_number(f.mu(ij[0], ij[1]));
    for (const auto& ij : kUpper) os << ',' << format_number(f.eps(ij[0], ij[1]));
    os << '\n';
  }
  return os.str();
}

std::string tensor_sidecar(const LayeredStructure& s, double rho) {
  json j;
  j["rho"] = rho;
  j["structure_hash"] = structure_hash(s);
  return dump(j);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace svanish
