#include "plap/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "convex_program.hpp"

namespace plap {

double lp_norm_interior(const MetricMeasureSpace& space, const Vector& values,
                        double p) {
  double total = 0.0;
  for (int v : space.interior)
    total += std::pow(std::abs(values(v)), p) * space.mu(v);
  return std::pow(total, 1.0 / p);
}

double lp_norm_boundary(const MetricMeasureSpace& space, const Vector& values,
                        double q) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (int v : space.boundary) m = std::max(m, std::abs(values(v)));
    return m;
  }
  double total = 0.0;
  for (int v : space.boundary)
    total += std::pow(std::abs(values(v)), q) * space.perimeter(v);
  return std::pow(total, 1.0 / q);
}

double line_integral(const MetricMeasureSpace& space, const ScalarField& g,
                     const Path& path) {
  if (path.size() < 2)
    throw Error(ErrorCode::InvalidPath, "path must contain at least one edge");
  double total = 0.0;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    double len = space.edge_length(path[i], path[i + 1]);
    total += len * (g.values(path[i]) + g.values(path[i + 1])) / 2.0;
  }
  return total;
}

bool is_upper_gradient(const MetricMeasureSpace& space, const ScalarField& u,
                       const ScalarField& g, int path_cap, double tol) {
  // DFS over simple paths from every start vertex, carrying the running
  // trapezoid integral.
  const int n = space.n();
  std::vector<char> visited(n, 0);
  bool ok = true;

  std::function<void(int, int, double)> dfs = [&](int start, int v,
                                                  double integral) {
    if (!ok) return;
    if (v != start) {
      if (std::abs(u.values(v) - u.values(start)) > integral + tol) {
        ok = false;
        return;
      }
    }
    int edges_used = 0;
    for (int w = 0; w < n; ++w) edges_used += visited[w];
    if (edges_used - 1 >= path_cap) return;
    for (const auto& [w, len] : space.adj[v]) {
      if (visited[w]) continue;
      visited[w] = 1;
      dfs(start, w, integral + len * (g.values(v) + g.values(w)) / 2.0);
      visited[w] = 0;
    }
  };

  for (int start = 0; start < n && ok; ++start) {
    visited.assign(n, 0);
    visited[start] = 1;
    dfs(start, start, 0.0);
  }
  return ok;
}

namespace {

const std::vector<std::vector<std::pair<int, double>>>& adjacency_for(
    const MetricMeasureSpace& space, EdgeScope scope) {
  return scope == EdgeScope::Full ? space.adj : space.adj_closure;
}

}  // namespace

ScalarField max_slope_gradient(const MetricMeasureSpace& space,
                               const ScalarField& u, EdgeScope scope) {
  const auto& adj = adjacency_for(space, scope);
  ScalarField g{u.domain, Vector::Zero(space.n())};
  for (int v = 0; v < space.n(); ++v) {
    if (scope != EdgeScope::Full && space.role[v] == Role::Exterior) continue;
    if (scope == EdgeScope::Interior && !space.is_interior(v)) continue;
    double slope = 0.0;
    bool has_neighbor = false;
    for (const auto& [w, len] : adj[v]) {
      if (scope == EdgeScope::Interior && !space.is_interior(w)) continue;
      has_neighbor = true;
      slope = std::max(slope, std::abs(u.values(w) - u.values(v)) / len);
    }
    if (!has_neighbor && scope == EdgeScope::Full)
      throw Error(ErrorCode::IsolatedVertex,
                  "vertex " + space.ids[v] + " has no neighbors");
    g.values(v) = slope;
  }
  return g;
}

ScalarField minimal_weak_gradient(const MetricMeasureSpace& space,
                                  const ScalarField& u, double p) {
  if (!(p > 1.0))
    throw Error(ErrorCode::BadParams, "minimal_weak_gradient needs p > 1");
  const int n = space.n();
  const int m = static_cast<int>(space.edges.size());

  detail::PowerConeProgram prog;
  prog.c = space.mu;
  prog.p = p;
  prog.A = Eigen::MatrixXd::Zero(m, n);
  prog.b = Vector::Zero(m);
  prog.gap_tol = 1e-10;
  for (int e = 0; e < m; ++e) {
    const auto& edge = space.edges[e];
    prog.A(e, edge.a) = edge.length / 2.0;
    prog.A(e, edge.b) = edge.length / 2.0;
    prog.b(e) = std::abs(u.values(edge.a) - u.values(edge.b));
  }

  ScalarField slope = max_slope_gradient(space, u, EdgeScope::Full);
  double scale = slope.values.maxCoeff();
  Vector x = slope.values.array() + std::max(0.1 * scale, 0.1);
  return {FieldDomain::All, detail::solve_power_cone(prog, x)};
}

double p_modulus(const MetricMeasureSpace& space, const PathFamily& family,
                 double p) {
  if (family.empty())
    throw Error(ErrorCode::EmptyFamily, "p-modulus of empty family");
  if (!(p > 0.0)) throw Error(ErrorCode::BadParams, "p-modulus needs p > 0");
  const int n = space.n();
  const int m = static_cast<int>(family.size());

  // For p < 1 the pointwise power is concave and the infimum degenerates to
  // vertex-supported densities; we evaluate the p-energy at the extremal
  // density of the mass-minimal (p = 1) program instead, which matches the
  // symmetric KKT closed form (e.g. 2m/L^p on a single edge).
  detail::PowerConeProgram prog;
  prog.c = space.mu;
  prog.p = std::max(p, 1.0);
  prog.A = Eigen::MatrixXd::Zero(m, n);
  prog.b = Vector::Ones(m);
  prog.gap_tol = 1e-10;
  double min_len = std::numeric_limits<double>::infinity();
  for (int k = 0; k < m; ++k) {
    const Path& path = family[k];
    if (path.size() < 2)
      throw Error(ErrorCode::InvalidPath, "constant path in family");
    double len = 0.0;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      double l = space.edge_length(path[i], path[i + 1]);
      prog.A(k, path[i]) += l / 2.0;
      prog.A(k, path[i + 1]) += l / 2.0;
      len += l;
    }
    min_len = std::min(min_len, len);
  }

  Vector x = Vector::Constant(n, 2.0 / min_len);
  x = detail::solve_power_cone(prog, x);
  double value = 0.0;
  for (int i = 0; i < n; ++i) value += space.mu(i) * std::pow(x(i), p);
  return value;
}

double newtonian_norm(const MetricMeasureSpace& space, const ScalarField& u,
                      double p) {
  ScalarField g = max_slope_gradient(space, u, EdgeScope::Full);
  double gn = 0.0, un = 0.0;
  for (int v = 0; v < space.n(); ++v) {
    gn += std::pow(std::abs(g.values(v)), p) * space.mu(v);
    un += std::pow(std::abs(u.values(v)), p) * space.mu(v);
  }
  return std::pow(gn, 1.0 / p) + std::pow(un, 1.0 / p);
}

ScalarField mean_zero_project(const MetricMeasureSpace& space,
                              const ScalarField& u) {
  double m = mean(space, u, space.interior);
  ScalarField out = u;
  switch (u.domain) {
    case FieldDomain::All:
      out.values.array() -= m;
      break;
    case FieldDomain::Interior:
      for (int v : space.interior) out.values(v) -= m;
      break;
    case FieldDomain::Boundary:
      throw Error(ErrorCode::BadParams,
                  "cannot mean-zero project a boundary field");
  }
  return out;
}

ScalarField trace(const MetricMeasureSpace& space, const ScalarField& u) {
  ScalarField out{FieldDomain::Boundary, Vector::Zero(space.n())};
  for (int v : space.boundary) out.values(v) = u.values(v);
  return out;
}

namespace {

// Ascent on a positively homogeneous ratio over mean-zero fields.
// Central-difference gradient with backtracking, plus structured starts.
double maximize_ratio(const MetricMeasureSpace& space,
                      const std::function<double(const Vector&)>& ratio,
                      const std::vector<Vector>& structured_starts,
                      int random_starts, int iters, std::uint64_t seed) {
  const int n = space.n();
  double best = 0.0;

  auto project = [&](Vector v) {
    ScalarField field{FieldDomain::All, std::move(v)};
    field = mean_zero_project(space, field);
    for (int x : space.exterior) field.values(x) = 0.0;
    return field.values;
  };

  auto ascend = [&](Vector u) {
    u = project(std::move(u));
    double norm = u.norm();
    if (norm <= 0.0) return 0.0;
    u /= norm;
    double current = ratio(u);
    double h = 1e-5;
    for (int it = 0; it < iters; ++it) {
      Vector grad = Vector::Zero(n);
      for (int v = 0; v < n; ++v) {
        if (space.role[v] == Role::Exterior) continue;
        Vector up = u, dn = u;
        up(v) += h;
        dn(v) -= h;
        grad(v) = (ratio(project(up)) - ratio(project(dn))) / (2.0 * h);
      }
      double gn = grad.norm();
      if (gn < 1e-12) break;
      double step = 0.5;
      bool improved = false;
      while (step > 1e-10) {
        Vector cand = project(u + step * grad / gn);
        double cn = cand.norm();
        if (cn > 0.0) {
          cand /= cn;
          double val = ratio(cand);
          if (val > current + 1e-14) {
            u = cand;
            current = val;
            improved = true;
            break;
          }
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    return current;
  };

  for (const Vector& s : structured_starts) best = std::max(best, ascend(s));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int s = 0; s < random_starts; ++s) {
    Vector u = Vector::Zero(n);
    for (int v = 0; v < n; ++v)
      if (space.role[v] != Role::Exterior) u(v) = normal(rng);
    best = std::max(best, ascend(u));
  }
  return best;
}

}  // namespace

EmbeddingConstants embedding_constants(const MetricMeasureSpace& space,
                                       double p, double s,
                                       const EmbeddingScanOptions& opts) {
  if (!(s > 0.0))
    throw Error(ErrorCode::DegenerateExponent, "lower-mass exponent s <= 0");
  EmbeddingConstants out;
  out.p_star = p < s ? p * s / (s - p)
                     : std::numeric_limits<double>::infinity();

  const double q = opts.q;
  const double q_prime =
      std::isinf(q) ? 1.0 : (q <= 1.0 ? std::numeric_limits<double>::infinity()
                                      : q / (q - 1.0));

  auto grad_norm = [&](const Vector& u) {
    ScalarField field{FieldDomain::All, u};
    ScalarField g = max_slope_gradient(space, field, EdgeScope::Closure);
    return lp_norm_interior(space, g.values, p);
  };
  auto sobolev_ratio = [&](const Vector& u) {
    double den = grad_norm(u);
    if (den <= 0.0) return 0.0;
    return lp_norm_interior(space, u, p) / den;
  };
  auto trace_ratio = [&](const Vector& u) {
    double den = grad_norm(u);
    if (den <= 0.0) return 0.0;
    return lp_norm_boundary(space, u, q_prime) / den;
  };

  // Structured starts: boundary bumps (the trace ratio concentrates near
  // single boundary vertices) and the boundary data direction.
  std::vector<Vector> starts;
  for (int b : space.boundary) {
    Vector u = Vector::Zero(space.n());
    u(b) = 1.0;
    for (const auto& [v, len] : space.adj[b])
      if (space.is_interior(v)) u(v) = 0.5;
    starts.push_back(u);
  }
  if (space.f.cwiseAbs().maxCoeff() > 0.0) {
    Vector u = Vector::Zero(space.n());
    for (int b : space.boundary) u(b) = space.f(b);
    starts.push_back(u);
  }

  out.K_S = maximize_ratio(space, sobolev_ratio, starts, opts.starts,
                           opts.iters, opts.seed);
  out.K_T = maximize_ratio(space, trace_ratio, starts, opts.starts, opts.iters,
                           opts.seed + 1);
  return out;
}

}  // namespace plap
