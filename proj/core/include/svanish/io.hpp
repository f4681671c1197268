#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "svanish/cloakmap.hpp"
#include "svanish/designer.hpp"
#include "svanish/farfield.hpp"
#include "svanish/lowfreq.hpp"
#include "svanish/multilayer.hpp"

namespace svanish {

inline constexpr std::string_view kStructureSchema = "svanish-structure/1";
inline constexpr std::string_view kCoeffsSchema = "svanish-coeffs/1";
inline constexpr std::string_view kDesignSchema = "svanish-design/1";

/// Shortest decimal text that reads back to the same double; zero of either sign prints as "0".
std::string format_number(double v);

/// Throws SchemaError unless `tag` names `expected` with the same major version
/// ("name/major" or "name/major.minor").
void check_schema_tag(std::string_view tag, std::string_view expected, const std::string& field = "schema");

// All readers throw SchemaError naming the offending field.

std::string structure_to_json(const LayeredStructure& s);
LayeredStructure structure_from_json(std::string_view text);

/// 64-bit FNV-1a of the canonical structure document, as "fnv1a64:<16 hex digits>".
std::string structure_hash(const LayeredStructure& s);

std::string coefficients_to_json(const CoefficientTable& table);
CoefficientTable coefficients_from_json(std::string_view text);

std::string design_problem_to_json(const DesignProblem& problem);
DesignProblem design_problem_from_json(std::string_view text);

/// Result document: the problem, final parameters, history, coefficient table and final structure.
std::string design_result_to_json(const DesignProblem& problem, const DesignResult& result);
DesignResult design_result_from_json(std::string_view text);

/// theta, phi, re(A1..A3), im(A1..A3).
std::string far_field_csv(const std::vector<FarFieldSample>& samples);
std::string far_field_sidecar(const LayeredStructure& s, double omega, const Vec3& c, const Direction& k_hat, int n_max);

/// x1..x3, mu11 mu12 mu13 mu22 mu23 mu33, eps11 ... eps33.
std::string tensor_csv(const std::vector<MaterialTensorField>& fields);
std::string tensor_sidecar(const LayeredStructure& s, double rho);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace svanish
