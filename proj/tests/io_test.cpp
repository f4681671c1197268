#include "svanish/io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "json.hpp"
#include "svanish/error.hpp"
#include "test_support.hpp"

namespace svanish {
namespace {

using json = nlohmann::json;

void expect_same_structure(const LayeredStructure& a, const LayeredStructure& b) {
  EXPECT_EQ(a.radii(), b.radii());
  EXPECT_EQ(a.mu(), b.mu());
  EXPECT_EQ(a.eps(), b.eps());
  EXPECT_EQ(a.background().mu, b.background().mu);
  EXPECT_EQ(a.background().eps, b.background().eps);
  EXPECT_EQ(a.ordering(), b.ordering());
}

std::string schema_field(const std::string& text) {
  try {
    (void)structure_from_json(text);
  } catch (const SchemaError& e) {
    return e.field();
  }
  return "<accepted>";
}

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1e-3), "0.001");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(format_number(-0.0), "0");
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int k = 0; k < 2000; ++k) {
    const double v = std::pow(10.0, u(rng)) * (k % 2 ? -1.0 : 1.0);
    EXPECT_EQ(std::stod(format_number(v)), v);
  }
}

TEST(SchemaTag, MajorVersionRule) {
  EXPECT_NO_THROW(check_schema_tag("svanish-structure/1", kStructureSchema));
  EXPECT_NO_THROW(check_schema_tag("svanish-structure/1.4", kStructureSchema));
  EXPECT_THROW(check_schema_tag("svanish-structure/2", kStructureSchema), SchemaError);
  EXPECT_THROW(check_schema_tag("svanish-coeffs/1", kStructureSchema), SchemaError);
  EXPECT_THROW(check_schema_tag("svanish-structure", kStructureSchema), SchemaError);
  EXPECT_THROW(check_schema_tag("svanish-structure/x", kStructureSchema), SchemaError);
}

TEST(StructureJson, RoundTrip) {
  for (const LayeredStructure& s : testing::random_structures(92, 6)) expect_same_structure(structure_from_json(structure_to_json(s)), s);
  const LayeredStructure odd = LayeredStructure(default_radii(2), {0.3, 7.1}, {1.0 / 3.0, 2.2}, {1.5, 2.0})
                                   .with_ordering(TransferOrdering::reversed);
  expect_same_structure(structure_from_json(structure_to_json(odd)), odd);
  expect_same_structure(structure_from_json(structure_to_json(LayeredStructure({1.0}, {}, {}))), LayeredStructure({1.0}, {}, {}));
}

TEST(StructureJson, Deterministic) {
  const LayeredStructure s = testing::random_structures(93, 3)[2];
  EXPECT_EQ(structure_to_json(s), structure_to_json(structure_from_json(structure_to_json(s))));
}

TEST(StructureJson, ErrorsNameTheField) {
  const json good = json::parse(structure_to_json(LayeredStructure::vacuum(default_radii(2))));
  EXPECT_EQ(schema_field(good.dump()), "<accepted>");
  EXPECT_EQ(schema_field("{"), "$");
  auto mutate = [&](auto&& f) {
    json j = good;
    f(j);
    return schema_field(j.dump());
  };
  EXPECT_EQ(mutate([](json& j) { j["schema"] = "svanish-structure/2"; }), "schema");
  EXPECT_EQ(mutate([](json& j) { j.erase("mu"); }), "mu");
  EXPECT_EQ(mutate([](json& j) { j["mu"][1] = -1.0; }), "mu[1]");
  EXPECT_EQ(mutate([](json& j) { j["eps"][0] = "x"; }), "eps[0]");
  EXPECT_EQ(mutate([](json& j) { j["eps"] = json::array({1.0}); }), "eps");
  EXPECT_EQ(mutate([](json& j) { j["radii"] = json::array({2.0, 1.0}); }), "radii");
  EXPECT_EQ(mutate([](json& j) { j["radii"][2] = 1.5; }), "radii[2]");
  EXPECT_EQ(mutate([](json& j) { j["background"]["eps"] = 0.0; }), "background.eps");
  EXPECT_EQ(mutate([](json& j) { j["ordering"] = "sideways"; }), "ordering");
}

TEST(StructureHash, StableAndSensitive) {
  const LayeredStructure s = testing::random_structures(94, 2)[1];
  const std::string h = structure_hash(s);
  EXPECT_EQ(h.rfind("fnv1a64:", 0), 0u);
  EXPECT_EQ(h.size(), 8u + 16u);
  EXPECT_EQ(h, structure_hash(structure_from_json(structure_to_json(s))));
  std::vector<double> mu = s.mu();
  mu[0] = std::nextafter(mu[0], 10.0);
  EXPECT_NE(h, structure_hash(LayeredStructure(s.radii(), mu, s.eps())));
}

TEST(CoefficientsJson, RoundTrip) {
  const CoefficientTable t = lowfreq_coefficients(testing::random_structures(95, 3)[2], 3);
  const CoefficientTable back = coefficients_from_json(coefficients_to_json(t));
  EXPECT_EQ(back.order(), 3);
  expect_same_structure(back.structure(), t.structure());
  ASSERT_EQ(back.entries().size(), t.entries().size());
  for (std::size_t k = 0; k < t.entries().size(); ++k) {
    EXPECT_EQ(back.entries()[k].value, t.entries()[k].value);
    EXPECT_EQ(back.entries()[k].n, t.entries()[k].n);
    EXPECT_EQ(back.entries()[k].l, t.entries()[k].l);
    EXPECT_EQ(back.entries()[k].polarization, t.entries()[k].polarization);
  }
  json j = json::parse(coefficients_to_json(t));
  j["coefficients"].erase(0);
  EXPECT_THROW(coefficients_from_json(j.dump()), SchemaError);
  j = json::parse(coefficients_to_json(t));
  j["schema"] = "svanish-coeffs/3";
  EXPECT_THROW(coefficients_from_json(j.dump()), SchemaError);
}

TEST(DesignJson, ProblemRoundTrip) {
  DesignProblem p = make_default_problem(4, 2);
  p.background = {1.2, 0.9};
  p.seed = 123456789012345ull;
  p.restarts = 3;
  p.ordering = TransferOrdering::reversed;
  const DesignProblem q = design_problem_from_json(design_problem_to_json(p));
  EXPECT_EQ(q.layers, p.layers);
  EXPECT_EQ(q.order, p.order);
  EXPECT_EQ(q.radii, p.radii);
  EXPECT_EQ(q.mu, p.mu);
  EXPECT_EQ(q.eps, p.eps);
  EXPECT_EQ(q.background.mu, p.background.mu);
  EXPECT_EQ(q.lower, p.lower);
  EXPECT_EQ(q.upper, p.upper);
  EXPECT_EQ(q.max_iters, p.max_iters);
  EXPECT_EQ(q.residual_tol, p.residual_tol);
  EXPECT_EQ(q.step_damping, p.step_damping);
  EXPECT_EQ(q.restarts, p.restarts);
  EXPECT_EQ(q.seed, p.seed);
  EXPECT_EQ(q.ordering, p.ordering);
  EXPECT_EQ(design_problem_to_json(q), design_problem_to_json(p));
}

TEST(DesignJson, ResultRoundTrip) {
  DesignProblem p = make_default_problem(1, 1);
  p.mu = {2.0};
  p.eps = {2.0};
  const DesignResult r = design(p);
  const std::string text = design_result_to_json(p, r);
  const DesignResult back = design_result_from_json(text);
  EXPECT_EQ(back.mu, r.mu);
  EXPECT_EQ(back.eps, r.eps);
  EXPECT_EQ(back.residual_norm_history, r.residual_norm_history);
  EXPECT_EQ(back.converged, r.converged);
  EXPECT_EQ(back.iterations, r.iterations);
  EXPECT_EQ(back.stop_reason, r.stop_reason);
  EXPECT_EQ(back.starts_used, r.starts_used);
  EXPECT_EQ(back.table.entries().size(), r.table.entries().size());
  EXPECT_EQ(design_result_to_json(p, back), text);
  const json j = json::parse(text);
  EXPECT_EQ(j.at("schema"), kDesignSchema);
}

TEST(Csv, HeadersAndRows) {
  const LayeredStructure s({1.0}, {}, {});
  const auto samples = scattering_amplitude_grid(s, 1.0, Vec3::UnitX(), Direction(Vec3::UnitZ()), {0.0, 1.0}, {0.0, 2.0});
  const std::string csv = far_field_csv(samples);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "theta,phi,re_A1,re_A2,re_A3,im_A1,im_A2,im_A3");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  EXPECT_NE(csv.find("\n0,2,"), std::string::npos);

  const LayeredStructure c = LayeredStructure::vacuum(default_radii(2));
  const std::vector<MaterialTensorField> fields{push_forward(c, 0.1, Eigen::Vector3d(0, 0, 1.2)), push_forward(c, 0.1, Eigen::Vector3d(0, 2.5, 0))};
  const std::string t = tensor_csv(fields);
  EXPECT_EQ(t.substr(0, t.find('\n')), "x1,x2,x3,mu11,mu12,mu13,mu22,mu23,mu33,eps11,eps12,eps13,eps22,eps23,eps33");
  EXPECT_EQ(std::count(t.begin(), t.end(), '\n'), 3);
  const json side = json::parse(tensor_sidecar(c, 0.1));
  EXPECT_EQ(side.at("rho"), 0.1);
  EXPECT_EQ(side.at("structure_hash"), structure_hash(c));
  const json ff = json::parse(far_field_sidecar(s, 1.0, Vec3::UnitX(), Direction(Vec3::UnitZ()), 8));
  EXPECT_EQ(ff.at("n_max"), 8);
  EXPECT_EQ(ff.at("omega"), 1.0);
}

TEST(Files, WriteReadAndMissing) {
  const auto path = std::filesystem::temp_directory_path() / "svanish_io_test.txt";
  write_text_file(path.string(), "abc\n");
  EXPECT_EQ(read_text_file(path.string()), "abc\n");
  std::filesystem::remove(path);
  EXPECT_THROW(read_text_file(path.string()), Error);
}

}  // namespace
}  // namespace svanish
