#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "fixtures.hpp"
#include "plap/generate.hpp"
#include "plap/io.hpp"
#include "plap/solver.hpp"
#include "plap/verify.hpp"

using namespace plap;

namespace {

json dipole_json() {
  return json::parse(R"({
    "vertices": [
      {"id": "b0", "mu": 1.0, "role": "boundary", "perimeter": 1.0, "f": 1.0},
      {"id": "u0", "mu": 1.0, "role": "interior"},
      {"id": "u1", "mu": 1.0, "role": "interior"},
      {"id": "b1", "mu": 1.0, "role": "boundary", "perimeter": 1.0, "f": -1.0}
    ],
    "edges": [
      {"a": "b0", "b": "u0", "length": 1.0},
      {"a": "u0", "b": "u1", "length": 1.0},
      {"a": "u1", "b": "b1", "length": 1.0}
    ]
  })");
}

void expect_parse_error(const json& j) {
  try {
    parse_space_spec(j);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ParseError);
  }
}

}  // namespace

TEST_CASE("parse_space_spec: the dipole fixture round-trips") {
  auto spec = parse_space_spec(dipole_json());
  REQUIRE(spec.ids.size() == 4);
  CHECK(spec.ids[0] == "b0");
  CHECK(spec.roles[1] == Role::Interior);
  CHECK(spec.f[0] == 1.0);
  CHECK(spec.f[1] == 0.0);  // default
  CHECK(std::isnan(spec.perimeter[1]));
  REQUIRE(spec.edges.size() == 3);
  CHECK(spec.edges[2].length == 1.0);

  // serialize -> parse -> serialize is a fixed point
  json first = space_to_json(spec);
  json second = space_to_json(parse_space_spec(first));
  CHECK(first == second);
  CHECK(first.dump() == second.dump());

  // and the rebuilt space matches the fixture-built one numerically
  auto a = build_space(spec);
  auto b = build_space(fixtures::dipole_line());
  REQUIRE(a.n() == b.n());
  for (int i = 0; i < a.n(); ++i)
    for (int j = 0; j < a.n(); ++j) CHECK(a.dist(i, j) == b.dist(i, j));
}

TEST_CASE("parse_space_spec: strict rejection of malformed input") {
  SUBCASE("unknown top-level field") {
    json j = dipole_json();
    j["extra"] = 1;
    expect_parse_error(j);
  }
  SUBCASE("unknown vertex field") {
    json j = dipole_json();
    j["vertices"][0]["weight"] = 2.0;
    expect_parse_error(j);
  }
  SUBCASE("unknown edge field") {
    json j = dipole_json();
    j["edges"][0]["w"] = 2.0;
    expect_parse_error(j);
  }
  SUBCASE("duplicate vertex id") {
    json j = dipole_json();
    j["vertices"][1]["id"] = "b0";
    expect_parse_error(j);
  }
  SUBCASE("edge to unknown vertex") {
    json j = dipole_json();
    j["edges"][0]["a"] = "nope";
    expect_parse_error(j);
  }
  SUBCASE("bad role string") {
    json j = dipole_json();
    j["vertices"][0]["role"] = "outer";
    expect_parse_error(j);
  }
  SUBCASE("missing vertices or edges") {
    expect_parse_error(json::parse(R"({"vertices": []})"));
    expect_parse_error(json::parse(R"({"edges": []})"));
  }
}

TEST_CASE("problem_from_json: defaults, overrides, f fallback") {
  auto space = build_space(parse_space_spec(dipole_json()));

  SUBCASE("empty problem: all defaults, f from the space") {
    auto prob = problem_from_json(json::object(), space);
    CHECK(prob.p == 2.0);
    CHECK(prob.reaction.c == 1.0);
    CHECK(prob.reaction.gamma == 2.0);
    CHECK(std::isinf(prob.q));
    CHECK(prob.f.values(0) == 1.0);
    CHECK(prob.f.values(3) == -1.0);
    CHECK_NOTHROW(validate_problem(space, prob));
  }
  SUBCASE("explicit fields win") {
    auto prob = problem_from_json(
        json::parse(R"({"p": 3.0, "c": 2.0, "gamma": 1.5, "q": 1.0,
                        "f": {"b0": 0.5, "b1": -0.5}})"),
        space);
    CHECK(prob.p == 3.0);
    CHECK(prob.reaction.c == 2.0);
    CHECK(prob.reaction.gamma == 1.5);
    CHECK(prob.q == 1.0);
    CHECK(prob.f.values(0) == 0.5);
    CHECK(prob.f.values(3) == -0.5);
  }
  SUBCASE("unknown field rejected") {
    CHECK_THROWS_AS(problem_from_json(json::parse(R"({"P": 2})"), space),
                    Error);
  }
}

TEST_CASE("file round-trip through load_space / load_problem") {
  std::string space_path = "/tmp/plap_test_space.json";
  std::string prob_path = "/tmp/plap_test_problem.json";
  write_text(space_path, dipole_json().dump(2));
  write_text(prob_path, R"({"p": 2.5})");

  auto space = load_space(space_path);
  CHECK(space.n() == 4);
  auto prob = load_problem(prob_path, space);
  CHECK(prob.p == 2.5);
  CHECK(prob.f.values(0) == 1.0);

  CHECK_THROWS_AS(load_space("/tmp/plap_no_such_file.json"), Error);
  write_text(space_path, "{not json");
  CHECK_THROWS_AS(load_space(space_path), Error);
  std::remove(space_path.c_str());
  std::remove(prob_path.c_str());
}

TEST_CASE("hypothesis_to_json carries every reported constant") {
  HypothesisReport report;
  report.K_D = 3.0;
  report.s = 1.5;
  report.K_H1 = 2.0;
  report.K_H1_closure = 2.5;
  report.K_H2 = 4.0;
  report.K_P = 1.25;
  report.diam = 3.0;
  report.radius_grid = {0.5, 1.0};
  EmbeddingConstants embedding;
  embedding.p_star = 6.0;
  embedding.K_S = 1.1;
  embedding.K_T = 0.9;

  json j = hypothesis_to_json(report, embedding);
  CHECK(j["K_D"] == 3.0);
  CHECK(j["s"] == 1.5);
  CHECK(j["K_H1"] == 2.0);
  CHECK(j["K_H1_closure"] == 2.5);
  CHECK(j["K_H2"] == 4.0);
  CHECK(j["K_P"] == 1.25);
  CHECK(j["radius_grid"].size() == 2);
  CHECK(j["p_star"] == 6.0);
  CHECK(j["K_S"] == 1.1);
  CHECK(j["K_T"] == 0.9);

  embedding.p_star = std::numeric_limits<double>::infinity();
  CHECK(hypothesis_to_json(report, embedding)["p_star"] == "inf");
}

TEST_CASE("minimizer_to_json: ids, roles, and values") {
  auto space = build_space(fixtures::dipole_line());
  auto prob = fixtures::default_problem(space);
  SolverOptions opts;
  opts.seed = 3;
  auto result = minimize(space, prob, opts);

  json j = minimizer_to_json(space, result);
  CHECK(j["value"] == result.value);
  CHECK(j["converged"] == result.converged);
  CHECK(j["u"].size() == 4);  // interior + boundary
  CHECK(j["g"].size() == 2);  // interior only
  CHECK(j["u"]["u0"] == result.u.values(1));
  CHECK(j["g"]["u1"] == result.g.values(2));
  CHECK(!j["u"].contains("missing"));
}

TEST_CASE("degiorgi_csv: header, rows, and the na marker") {
  auto space = build_space(fixtures::dipole_line());
  auto prob = fixtures::default_problem(space);
  Vector vals(4);
  vals << 1.0, 0.5, -0.5, -1.0;
  ScalarField u{FieldDomain::All, vals};
  // alpha = 0 gives an applicable sample; alpha = 2 a vacuous one
  auto samples = de_giorgi_check(space, u, prob,
                                 {{0, 1.0, 2.0, 0.0}, {0, 1.0, 2.0, 2.0}},
                                 true);
  std::string csv = degiorgi_csv(space, samples);

  std::istringstream lines(csv);
  std::string header, row1, row2;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row2);
  CHECK(header ==
        "y,rho,R,alpha,lhs,volume_term,boundary_term_p,boundary_term_1,"
        "K_required_p,K_required_1,pass");
  CHECK(row1.substr(0, 3) == "b0,");
  CHECK(row1.find(",na,") == std::string::npos);
  CHECK(row1.back() == '1');
  CHECK(row2.find(",na,na,") != std::string::npos);
  CHECK(row2.back() == '1');
  std::string rest;
  CHECK(!std::getline(lines, rest));
}

TEST_CASE("serialization is deterministic byte for byte") {
  auto spec = generate_grid(3, 0.25);
  CHECK(space_to_json(spec).dump(2) == space_to_json(spec).dump(2));

  auto space = build_space(spec);
  auto prob = fixtures::default_problem(space);
  SolverOptions opts;
  opts.seed = 17;
  opts.starts = 2;
  auto a = minimizer_to_json(space, minimize(space, prob, opts));
  auto b = minimizer_to_json(space, minimize(space, prob, opts));
  CHECK(a.dump() == b.dump());
}
