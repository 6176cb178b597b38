#include "plap/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace plap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& context) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok)
      throw Error(ErrorCode::ParseError,
                  "unknown field \"" + key + "\" in " + context);
  }
}

Role parse_role(const std::string& role) {
  if (role == "interior") return Role::Interior;
  if (role == "boundary") return Role::Boundary;
  if (role == "exterior") return Role::Exterior;
  throw Error(ErrorCode::ParseError, "unknown role: " + role);
}

const char* role_name(Role role) {
  switch (role) {
    case Role::Interior: return "interior";
    case Role::Boundary: return "boundary";
    case Role::Exterior: return "exterior";
  }
  return "?";
}

}  // namespace

SpaceSpec parse_space_spec(const json& j) {
  reject_unknown(j, {"vertices", "edges"}, "space file");
  if (!j.contains("vertices") || !j.contains("edges"))
    throw Error(ErrorCode::ParseError, "space file needs vertices and edges");

  SpaceSpec spec;
  std::map<std::string, int> index;
  for (const auto& v : j.at("vertices")) {
    reject_unknown(v, {"id", "mu", "role", "perimeter", "f"}, "vertex");
    std::string id = v.at("id").get<std::string>();
    if (index.count(id))
      throw Error(ErrorCode::ParseError, "duplicate vertex id: " + id);
    index[id] = static_cast<int>(spec.ids.size());
    spec.ids.push_back(id);
    spec.mu.push_back(v.at("mu").get<double>());
    spec.roles.push_back(parse_role(v.at("role").get<std::string>()));
    spec.perimeter.push_back(
        v.contains("perimeter") ? v.at("perimeter").get<double>() : kNaN);
    spec.f.push_back(v.contains("f") ? v.at("f").get<double>() : 0.0);
  }
  for (const auto& e : j.at("edges")) {
    reject_unknown(e, {"a", "b", "length"}, "edge");
    auto a = index.find(e.at("a").get<std::string>());
    auto b = index.find(e.at("b").get<std::string>());
    if (a == index.end() || b == index.end())
      throw Error(ErrorCode::ParseError, "edge references unknown vertex");
    spec.edges.push_back(
        {a->second, b->second, e.at("length").get<double>()});
  }
  return spec;
}

MetricMeasureSpace load_space(const std::string& path) {
  return build_space(parse_space_spec(read_json(path)));
}

json space_to_json(const SpaceSpec& spec) {
  json vertices = json::array();
  for (size_t i = 0; i < spec.ids.size(); ++i) {
    json v;
    v["id"] = spec.ids[i];
    v["mu"] = spec.mu[i];
    v["role"] = role_name(spec.roles[i]);
    if (std::isfinite(spec.perimeter[i])) v["perimeter"] = spec.perimeter[i];
    if (spec.f[i] != 0.0) v["f"] = spec.f[i];
    vertices.push_back(v);
  }
  json edges = json::array();
  for (const auto& e : spec.edges)
    edges.push_back(
        {{"a", spec.ids[e.a]}, {"b", spec.ids[e.b]}, {"length", e.length}});
  return {{"vertices", vertices}, {"edges", edges}};
}

ProblemSpec problem_from_json(const json& j, const MetricMeasureSpace& space) {
  reject_unknown(j, {"p", "c", "gamma", "q", "f"}, "problem file");
  ProblemSpec spec;
  spec.p = j.value("p", 2.0);
  spec.reaction.c = j.value("c", 1.0);
  spec.reaction.gamma = j.value("gamma", 2.0);
  if (j.contains("q") && !j.at("q").is_string())
    spec.q = j.at("q").get<double>();
  spec.f = ScalarField{FieldDomain::Boundary, space.f};
  if (j.contains("f")) {
    spec.f.values = Vector::Zero(space.n());
    for (const auto& [id, value] : j.at("f").items())
      spec.f.values(space.index_of(id)) = value.get<double>();
  }
  return spec;
}

ProblemSpec load_problem(const std::string& path,
                         const MetricMeasureSpace& space) {
  return problem_from_json(read_json(path), space);
}

json hypothesis_to_json(const HypothesisReport& report,
                        const EmbeddingConstants& embedding) {
  json j;
  j["K_D"] = report.K_D;
  j["s"] = report.s;
  j["K_H1"] = report.K_H1;
  j["K_H1_closure"] = report.K_H1_closure;
  j["K_H2"] = report.K_H2;
  j["K_P"] = report.K_P;
  j["diam"] = report.diam;
  j["radius_grid"] = report.radius_grid;
  j["p_star"] = std::isinf(embedding.p_star) ? json("inf")
                                             : json(embedding.p_star);
  j["K_S"] = embedding.K_S;
  j["K_T"] = embedding.K_T;
  return j;
}

json minimizer_to_json(const MetricMeasureSpace& space,
                       const MinimizerResult& result) {
  json u = json::object();
  json g = json::object();
  for (int v = 0; v < space.n(); ++v) {
    if (space.role[v] == Role::Exterior) continue;
    u[space.ids[v]] = result.u.values(v);
    if (space.is_interior(v)) g[space.ids[v]] = result.g.values(v);
  }
  return {{"value", result.value},
          {"iterations", result.iterations},
          {"converged", result.converged},
          {"u", u},
          {"g", g}};
}

std::string degiorgi_csv(const MetricMeasureSpace& space,
                         const std::vector<DeGiorgiSample>& samples) {
  std::ostringstream out;
  out << "y,rho,R,alpha,lhs,volume_term,boundary_term_p,boundary_term_1,"
         "K_required_p,K_required_1,pass\n";
  out.precision(17);
  for (const auto& s : samples) {
    out << space.ids[s.y] << ',' << s.rho << ',' << s.R << ',' << s.alpha
        << ',' << s.lhs << ',' << s.volume_term << ',' << s.boundary_term_p
        << ',' << s.boundary_term_1 << ','
        << (s.applicable_p ? std::to_string(s.K_required_p) : "na") << ','
        << (s.applicable_1 ? std::to_string(s.K_required_1) : "na") << ','
        << (s.pass ? "1" : "0") << '\n';
  }
  return out.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCode::BadParams, "cannot open for writing: " + path);
  out << content;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open: " + path);
  try {
    return json::parse(in);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::ParseError,
                std::string("JSON parse error in ") + path + ": " + e.what());
  }
}

}  // namespace plap
