// Command-line front end: space generation, hypothesis checks, solving,
// verification, and full experiment runs.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "plap/generate.hpp"
#include "plap/io.hpp"
#include "plap/solver.hpp"
#include "plap/verify.hpp"

namespace fs = std::filesystem;
using plap::json;

namespace {

int thread_override() {
  const char* env = std::getenv("PLAP_THREADS");
  return env ? std::atoi(env) : 0;
}

plap::SpaceSpec generate_from_json(const json& g) {
  std::string kind = g.at("kind").get<std::string>();
  std::string profile = g.value("f_profile", std::string("dipole"));
  double amplitude = g.value("amplitude", 1.0);
  if (kind == "grid")
    return plap::generate_grid(g.at("n").get<int>(), g.at("h").get<double>(),
                               profile, amplitude,
                               g.value("with_corners", false));
  if (kind == "path")
    return plap::generate_path(g.at("n").get<int>(), g.value("h", 1.0),
                               profile, amplitude);
  if (kind == "annulus")
    return plap::generate_annulus(
        g.at("rings").get<int>(), g.at("per_ring").get<int>(),
        g.at("r_in").get<double>(), g.at("r_out").get<double>(), profile,
        amplitude);
  throw plap::Error(plap::ErrorCode::BadParams, "unknown kind: " + kind);
}

json summary_json(const plap::MetricMeasureSpace& space,
                  const plap::HypothesisReport& hypothesis,
                  const plap::EmbeddingConstants& embedding,
                  const plap::MinimizerResult& result,
                  const plap::UniquenessReport& uniqueness,
                  const std::vector<plap::DeGiorgiSample>& boundary_samples,
                  const plap::DgClassReport& dg_plus,
                  const plap::DgClassReport& dg_minus,
                  const plap::BoundednessReport& bounded,
                  const json& failures) {
  double K_max_p = 0.0, K_max_1 = 0.0;
  int pass = 0, na = 0;
  for (const auto& s : boundary_samples) {
    if (s.applicable_p) {
      K_max_p = std::max(K_max_p, s.K_required_p);
    } else {
      na++;
    }
    if (s.applicable_1) K_max_1 = std::max(K_max_1, s.K_required_1);
    if (s.pass) pass++;
  }
  json j;
  j["value"] = result.value;
  j["converged"] = result.converged;
  j["K_max_p"] = K_max_p;
  j["K_max_1"] = K_max_1;
  j["pass_counts"] =
      json{{"pass", pass},
           {"not_applicable", na},
           {"total", static_cast<int>(boundary_samples.size())}};
  j["uniqueness"] = json{{"max_value_gap", uniqueness.max_value_gap},
                         {"max_gradient_gap", uniqueness.max_gradient_gap},
                         {"max_nongradient_gap", uniqueness.max_nongradient_gap},
                         {"max_midpoint_excess", uniqueness.max_midpoint_excess}};
  j["dg_class"] = json{{"K_plus", dg_plus.K},
                       {"K_minus", dg_minus.K},
                       {"pass", dg_plus.pass && dg_minus.pass}};
  j["boundedness"] = json{{"R", bounded.R},
                          {"sup_interior", bounded.sup_interior},
                          {"sup_trace", bounded.sup_trace}};
  j["hypothesis"] = plap::hypothesis_to_json(hypothesis, embedding);
  j["failures"] = failures;
  return j;
}

std::vector<double> default_radius_grid(const plap::MetricMeasureSpace& space) {
  double diam = space.domain_diameter();
  return {diam / 8.0, diam / 4.0, diam / 2.0, diam};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neumann p-Laplacian problems on finite metric measure spaces"};
  app.require_subcommand(1);

  std::string space_path, problem_path, config_path, out_dir = ".";
  std::string paths_file, format = "json";
  std::uint64_t seed = 0;
  bool relax_radii = false;
  double p_value = 2.0;

  auto* gen = app.add_subcommand("generate", "write a space file");
  std::string kind = "grid", f_profile = "dipole", gen_out = "space.json";
  int gen_n = 5, rings = 4, per_ring = 8;
  double gen_h = 0.25, amplitude = 1.0, r_in = 1.0, r_out = 2.0;
  bool with_corners = false;
  gen->add_option("--kind", kind, "grid | path | annulus");
  gen->add_option("--n", gen_n);
  gen->add_option("--spacing", gen_h, "mesh width h");
  gen->add_option("--rings", rings);
  gen->add_option("--per-ring", per_ring);
  gen->add_option("--r-in", r_in);
  gen->add_option("--r-out", r_out);
  gen->add_option("--f-profile", f_profile, "none | dipole");
  gen->add_option("--amplitude", amplitude);
  gen->add_flag("--with-corners", with_corners);
  gen->add_option("--out", gen_out);

  auto* check = app.add_subcommand("check-space", "validate and scan constants");
  check->add_option("--space", space_path)->required();
  check->add_option("--out", out_dir);
  check->add_option("--seed", seed);

  auto* solve = app.add_subcommand("solve", "minimize the energy");
  solve->add_option("--space", space_path)->required();
  solve->add_option("--problem", problem_path);
  solve->add_option("--out", out_dir);
  solve->add_option("--seed", seed);

  auto* verify = app.add_subcommand("verify", "solver + De Giorgi checks");
  verify->add_option("--space", space_path)->required();
  verify->add_option("--problem", problem_path);
  verify->add_option("--out", out_dir);
  verify->add_option("--seed", seed);
  verify->add_flag("--relax-radii", relax_radii);
  verify->add_option("--format", format, "csv | json");

  auto* modulus = app.add_subcommand("modulus", "p-modulus of a path family");
  modulus->add_option("--space", space_path)->required();
  modulus->add_option("--paths", paths_file)->required();
  modulus->add_option("--p", p_value);

  auto* run = app.add_subcommand("run", "full experiment from a config");
  run->add_option("--config", config_path)->required();
  run->add_option("--out", out_dir);
  run->add_option("--seed", seed);
  run->add_flag("--relax-radii", relax_radii);

  CLI11_PARSE(app, argc, argv);
  (void)thread_override();  // parallelism degree; scans are deterministic

  try {
    if (gen->parsed()) {
      plap::SpaceSpec spec;
      if (kind == "grid")
        spec = plap::generate_grid(gen_n, gen_h, f_profile, amplitude,
                                   with_corners);
      else if (kind == "path")
        spec = plap::generate_path(gen_n, gen_h, f_profile, amplitude);
      else if (kind == "annulus")
        spec = plap::generate_annulus(rings, per_ring, r_in, r_out, f_profile,
                                      amplitude);
      else
        throw plap::Error(plap::ErrorCode::BadParams, "unknown kind " + kind);
      plap::build_space(spec);  // validate before writing
      plap::write_text(gen_out, plap::space_to_json(spec).dump(2) + "\n");
      std::cout << "wrote " << gen_out << "\n";
      return 0;
    }

    if (check->parsed()) {
      auto space = plap::load_space(space_path);
      plap::StructuralScanOptions opts;
      opts.seed = seed;
      auto report = plap::structural_constants(space, default_radius_grid(space),
                                               opts);
      plap::EmbeddingScanOptions eopts;
      eopts.seed = seed;
      auto embedding = plap::embedding_constants(space, 2.0, report.s, eopts);
      std::cout << plap::hypothesis_to_json(report, embedding).dump(2) << "\n";
      return 0;
    }

    if (solve->parsed()) {
      auto space = plap::load_space(space_path);
      plap::ProblemSpec problem =
          problem_path.empty()
              ? plap::ProblemSpec{2.0, {1.0, 2.0},
                                  plap::ScalarField{plap::FieldDomain::Boundary,
                                                    space.f},
                                  std::numeric_limits<double>::infinity()}
              : plap::load_problem(problem_path, space);
      plap::validate_problem(space, problem);
      plap::SolverOptions opts;
      opts.seed = seed;
      auto result = plap::minimize(space, problem, opts);
      std::cout << plap::minimizer_to_json(space, result).dump(2) << "\n";
      return 0;
    }

    if (modulus->parsed()) {
      auto space = plap::load_space(space_path);
      json pj = plap::read_json(paths_file);
      plap::PathFamily family;
      for (const auto& path : pj) {
        plap::Path p;
        for (const auto& id : path)
          p.push_back(space.index_of(id.get<std::string>()));
        family.push_back(p);
      }
      std::cout.precision(12);
      std::cout << plap::p_modulus(space, family, p_value) << "\n";
      return 0;
    }

    // verify and run share the pipeline
    plap::MetricMeasureSpace space;
    plap::ProblemSpec problem;
    plap::SolverOptions sopts;
    sopts.seed = seed;
    if (run->parsed()) {
      json config = plap::read_json(config_path);
      if (config.contains("space") && config.at("space").is_string())
        space = plap::load_space(config.at("space").get<std::string>());
      else
        space = plap::build_space(
            generate_from_json(config.at("space").at("generate")));
      problem = config.contains("problem")
                    ? plap::problem_from_json(config.at("problem"), space)
                    : plap::ProblemSpec{2.0, {1.0, 2.0},
                                        plap::ScalarField{
                                            plap::FieldDomain::Boundary,
                                            space.f},
                                        std::numeric_limits<double>::infinity()};
      if (config.contains("solver")) {
        const json& s = config.at("solver");
        sopts.max_iters = s.value("max_iters", sopts.max_iters);
        sopts.tol = s.value("tol", sopts.tol);
        sopts.starts = s.value("starts", sopts.starts);
        sopts.seed = s.value("seed", seed);
      }
      if (config.contains("seed")) sopts.seed = config.at("seed").get<int>();
      relax_radii = relax_radii || config.value("relax_radii", false);
      if (config.contains("output_dir") && out_dir == ".")
        out_dir = config.at("output_dir").get<std::string>();
    } else {
      space = plap::load_space(space_path);
      problem = problem_path.empty()
                    ? plap::ProblemSpec{2.0, {1.0, 2.0},
                                        plap::ScalarField{
                                            plap::FieldDomain::Boundary,
                                            space.f},
                                        std::numeric_limits<double>::infinity()}
                    : plap::load_problem(problem_path, space);
    }
    plap::validate_problem(space, problem);
    fs::create_directories(out_dir);

    plap::StructuralScanOptions scan_opts;
    scan_opts.seed = sopts.seed;
    scan_opts.poincare_p = problem.p;
    auto hypothesis =
        plap::structural_constants(space, default_radius_grid(space), scan_opts);
    plap::EmbeddingScanOptions eopts;
    eopts.seed = sopts.seed;
    eopts.q = problem.q;
    auto embedding =
        plap::embedding_constants(space, problem.p, hypothesis.s, eopts);

    auto result = plap::minimize(space, problem, sopts);
    plap::SolverOptions mopts = sopts;
    mopts.starts = std::max(sopts.starts, 4);
    auto uniqueness = plap::multi_start_analysis(space, problem, mopts);

    auto boundary_samples =
        plap::default_boundary_samples(space, result.u, relax_radii);
    auto degiorgi = plap::de_giorgi_check(space, result.u, problem,
                                          boundary_samples, relax_radii);

    // zero-data minimizer for the interior De Giorgi class
    plap::ProblemSpec zero_problem = problem;
    zero_problem.f.values.setZero();
    auto zero_result = plap::minimize(space, zero_problem, sopts);
    auto interior_samples =
        plap::default_interior_samples(space, zero_result.u, relax_radii);
    plap::ScalarField negated{plap::FieldDomain::All, -zero_result.u.values};
    auto dg_plus = plap::dg_class_check(space, zero_result.u, problem.p,
                                        interior_samples, relax_radii);
    auto dg_minus = plap::dg_class_check(space, negated, problem.p,
                                         interior_samples, relax_radii);

    double diam = space.domain_diameter();
    auto bounded = plap::boundedness_report(space, result.u, diam / 5.0);

    json failures = json::array();
    double lb_floor =
        plap::lower_bounds(space, problem, embedding.K_T).explicit_floor;
    if (result.value < lb_floor - 1e-9)
      failures.push_back("minimum below the explicit lower bound");
    if (!dg_plus.pass || !dg_minus.pass)
      failures.push_back("DG_p membership check failed");
    for (const auto& s : degiorgi)
      if (!s.pass) {
        failures.push_back("De Giorgi sample failed");
        break;
      }

    plap::write_text(out_dir + "/hypothesis.json",
                     plap::hypothesis_to_json(hypothesis, embedding).dump(2) +
                         "\n");
    plap::write_text(out_dir + "/minimizer.json",
                     plap::minimizer_to_json(space, result).dump(2) + "\n");
    plap::write_text(out_dir + "/degiorgi.csv",
                     plap::degiorgi_csv(space, degiorgi));
    std::vector<plap::DeGiorgiSample> dg_samples = dg_plus.samples;
    dg_samples.insert(dg_samples.end(), dg_minus.samples.begin(),
                      dg_minus.samples.end());
    plap::write_text(out_dir + "/dgclass.csv",
                     plap::degiorgi_csv(space, dg_samples));
    plap::write_text(out_dir + "/summary.json",
                     summary_json(space, hypothesis, embedding, result,
                                  uniqueness, degiorgi, dg_plus, dg_minus,
                                  bounded, failures)
                             .dump(2) +
                         "\n");
    std::cout << "wrote artifacts to " << out_dir << "\n";
    return failures.empty() ? 0 : 1;
  } catch (const plap::Error& e) {
    std::cerr << "error [" << plap::error_code_name(e.code()) << "]: "
              << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
