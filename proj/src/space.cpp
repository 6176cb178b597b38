#include "plap/space.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

#include "plap/calculus.hpp"

namespace plap {

double MetricMeasureSpace::mu_of(const std::vector<int>& members) const {
  double total = 0.0;
  for (int v : members) total += mu(v);
  return total;
}

double MetricMeasureSpace::domain_diameter() const {
  double d = 0.0;
  std::vector<int> closure = interior;
  closure.insert(closure.end(), boundary.begin(), boundary.end());
  for (int a : closure)
    for (int b : closure) d = std::max(d, dist(a, b));
  return d;
}

double MetricMeasureSpace::edge_length(int a, int b) const {
  for (const auto& [v, len] : adj[a])
    if (v == b) return len;
  throw Error(ErrorCode::InvalidPath,
              "vertices " + ids[a] + " and " + ids[b] + " are not adjacent");
}

int MetricMeasureSpace::index_of(const std::string& id) const {
  for (int i = 0; i < n(); ++i)
    if (ids[i] == id) return i;
  throw Error(ErrorCode::ParseError, "unknown vertex id: " + id);
}

namespace {

Matrix all_pairs_shortest_paths(int n, const std::vector<SpaceEdge>& edges) {
  const double inf = std::numeric_limits<double>::infinity();
  Matrix d = Matrix::Constant(n, n, inf);
  for (int i = 0; i < n; ++i) d(i, i) = 0.0;
  for (const auto& e : edges) {
    d(e.a, e.b) = std::min(d(e.a, e.b), e.length);
    d(e.b, e.a) = d(e.a, e.b);
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d(i, k) + d(k, j) < d(i, j)) d(i, j) = d(i, k) + d(k, j);
  return d;
}

}  // namespace

MetricMeasureSpace build_space(const SpaceSpec& spec) {
  const int n = static_cast<int>(spec.ids.size());
  if (n == 0) throw Error(ErrorCode::EmptyDomain, "space has no vertices");
  if (spec.mu.size() != spec.ids.size() || spec.roles.size() != spec.ids.size())
    throw Error(ErrorCode::InvalidSpace, "vertex arrays have mismatched sizes");

  MetricMeasureSpace space;
  space.ids = spec.ids;
  space.mu = Eigen::Map<const Vector>(spec.mu.data(), n);
  space.role = spec.roles;
  space.edges = spec.edges;
  space.f = Vector::Zero(n);
  if (!spec.f.empty()) {
    if (spec.f.size() != spec.ids.size())
      throw Error(ErrorCode::InvalidSpace, "f array has mismatched size");
    space.f = Eigen::Map<const Vector>(spec.f.data(), n);
  }

  for (int i = 0; i < n; ++i) {
    if (!(space.mu(i) > 0.0))
      throw Error(ErrorCode::NonpositiveWeight,
                  "vertex " + spec.ids[i] + " has nonpositive measure");
    switch (space.role[i]) {
      case Role::Interior: space.interior.push_back(i); break;
      case Role::Boundary: space.boundary.push_back(i); break;
      case Role::Exterior: space.exterior.push_back(i); break;
    }
  }
  if (space.interior.empty())
    throw Error(ErrorCode::EmptyDomain, "no interior vertices");
  if (space.boundary.empty())
    throw Error(ErrorCode::EmptyBoundary, "no boundary vertices");

  space.adj.resize(n);
  space.adj_closure.resize(n);
  for (const auto& e : spec.edges) {
    if (e.a < 0 || e.a >= n || e.b < 0 || e.b >= n || e.a == e.b)
      throw Error(ErrorCode::InvalidSpace, "edge references invalid vertices");
    if (!(e.length > 0.0))
      throw Error(ErrorCode::NonpositiveWeight, "edge with nonpositive length");
    space.adj[e.a].emplace_back(e.b, e.length);
    space.adj[e.b].emplace_back(e.a, e.length);
    if (space.role[e.a] != Role::Exterior && space.role[e.b] != Role::Exterior) {
      space.adj_closure[e.a].emplace_back(e.b, e.length);
      space.adj_closure[e.b].emplace_back(e.a, e.length);
    }
  }

  space.dist = all_pairs_shortest_paths(n, spec.edges);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!std::isfinite(space.dist(i, j)))
        throw Error(ErrorCode::DisconnectedGraph, "graph is not connected");

  // Every boundary vertex must see the interior.
  for (int b : space.boundary) {
    bool touches = false;
    for (const auto& [v, len] : space.adj[b])
      if (space.role[v] == Role::Interior) touches = true;
    if (!touches)
      throw Error(ErrorCode::InvalidSpace,
                  "boundary vertex " + spec.ids[b] +
                      " is not adjacent to the interior");
  }

  // Perimeter weights: file value wins, otherwise edge-cut rule.
  space.perimeter = Vector::Zero(n);
  for (int b : space.boundary) {
    double file_value = spec.perimeter.empty()
                            ? std::numeric_limits<double>::quiet_NaN()
                            : spec.perimeter[b];
    if (std::isfinite(file_value)) {
      space.perimeter(b) = file_value;
    } else {
      double w = 0.0;
      for (const auto& [v, len] : space.adj[b])
        if (space.role[v] == Role::Interior)
          w += std::min(space.mu(b), space.mu(v)) / len;
      space.perimeter(b) = w;
    }
    if (!(space.perimeter(b) > 0.0))
      throw Error(ErrorCode::NonpositiveWeight,
                  "boundary vertex " + spec.ids[b] +
                      " has nonpositive perimeter weight");
  }

  return space;
}

Ball ball(const MetricMeasureSpace& space, int center, double radius) {
  if (radius < 0.0)
    throw Error(ErrorCode::BadRadius, "negative ball radius");
  Ball b;
  b.center = center;
  b.radius = radius;
  for (int v = 0; v < space.n(); ++v)
    if (space.dist(center, v) <= radius) b.members.push_back(v);
  return b;
}

double mean(const MetricMeasureSpace& space, const ScalarField& u,
            const std::vector<int>& subset) {
  if (subset.empty()) throw Error(ErrorCode::EmptySet, "mean over empty set");
  double num = 0.0, den = 0.0;
  for (int v : subset) {
    num += u.values(v) * space.mu(v);
    den += space.mu(v);
  }
  return num / den;
}

double perimeter(const MetricMeasureSpace& space, const std::vector<int>& E,
                 const std::vector<int>& U) {
  std::vector<char> inE(space.n(), 0), inU(space.n(), 0);
  for (int v : E) inE[v] = 1;
  for (int v : U) inU[v] = 1;
  double total = 0.0;
  for (const auto& e : space.edges) {
    if (!inU[e.a] || !inU[e.b]) continue;
    if (inE[e.a] != inE[e.b])
      total += std::min(space.mu(e.a), space.mu(e.b)) / e.length;
  }
  return total;
}

namespace {

// Poincare ratio on a fixed interior ball: avg_B |u - u_B| over
// r * (avg_B g_u^p)^{1/p}, gradient taken in the interior subgraph.
double poincare_ratio(const MetricMeasureSpace& space, const Ball& B,
                      const Vector& u, double p) {
  ScalarField field{FieldDomain::Interior, u};
  ScalarField g = max_slope_gradient(space, field, EdgeScope::Interior);
  double muB = 0.0, num = 0.0, den = 0.0;
  double uB = 0.0;
  for (int v : B.members) {
    muB += space.mu(v);
    uB += u(v) * space.mu(v);
  }
  uB /= muB;
  for (int v : B.members) {
    num += std::abs(u(v) - uB) * space.mu(v);
    den += std::pow(g.values(v), p) * space.mu(v);
  }
  num /= muB;
  den = std::pow(den / muB, 1.0 / p);
  if (den <= 0.0) return 0.0;
  return num / (B.radius * den);
}

}  // namespace

HypothesisReport structural_constants(const MetricMeasureSpace& space,
                                      const std::vector<double>& radius_grid,
                                      const StructuralScanOptions& opts) {
  HypothesisReport report;
  report.diam = space.domain_diameter();
  if (radius_grid.empty())
    throw Error(ErrorCode::DegenerateGrid, "empty radius grid");
  for (double r : radius_grid)
    if (!(r > 0.0))
      throw Error(ErrorCode::DegenerateGrid, "nonpositive grid radius");
  report.radius_grid = radius_grid;
  std::sort(report.radius_grid.begin(), report.radius_grid.end());

  const int n = space.n();

  // Doubling constant over all centers and grid radii.
  for (int y = 0; y < n; ++y) {
    for (double rho : report.radius_grid) {
      report.sample_grid.emplace_back(y, rho);
      double small = space.mu_of(ball(space, y, rho).members);
      double big = space.mu_of(ball(space, y, 2.0 * rho).members);
      report.K_D = std::max(report.K_D, big / small);
    }
  }

  // Lower-mass exponent: worst log-ratio over admissible tuples.
  double s = 0.0;
  for (int x : space.interior) {
    for (double R : report.radius_grid) {
      double muR = space.mu_of(ball(space, x, R).members);
      for (int y = 0; y < n; ++y) {
        if (space.dist(x, y) > R) continue;
        for (double rho : report.radius_grid) {
          if (rho >= R) continue;
          double muRho = space.mu_of(ball(space, y, rho).members);
          s = std::max(s, std::log(muR / muRho) / std::log(R / rho));
        }
      }
    }
  }
  report.s = std::max(s, 1e-12);

  // (H1) measure density, interior centers and the closure scan.
  auto h1_scan = [&](const std::vector<int>& centers) {
    double K = 1.0;
    for (int y : centers) {
      for (double rho : report.radius_grid) {
        if (rho > report.diam) continue;
        Ball B = ball(space, y, rho);
        double muB = space.mu_of(B.members);
        double muBOmega = 0.0;
        for (int v : B.members)
          if (space.is_interior(v)) muBOmega += space.mu(v);
        if (muBOmega <= 0.0) continue;  // degenerate, skipped
        K = std::max(K, muB / muBOmega);
      }
    }
    return K;
  };
  report.K_H1 = h1_scan(space.interior);
  std::vector<int> closure_centers = space.interior;
  closure_centers.insert(closure_centers.end(), space.boundary.begin(),
                         space.boundary.end());
  report.K_H1_closure = h1_scan(closure_centers);

  // (H2) Ahlfors codimension-1 regularity of the perimeter weights.
  for (int y : space.boundary) {
    for (double rho : report.radius_grid) {
      if (rho > report.diam) continue;
      Ball B = ball(space, y, rho);
      double muB = space.mu_of(B.members);
      double PB = 0.0;
      for (int v : B.members)
        if (space.is_boundary(v)) PB += space.perimeter(v);
      if (PB <= 0.0) continue;
      report.K_H2 = std::max(report.K_H2,
                             std::max(rho * PB / muB, muB / (rho * PB)));
    }
  }

  // Empirical Poincare constant with lambda = 1: multi-start ascent on the
  // ratio, per interior ball, fields varying on the interior only.
  for (int x : space.interior) {
    for (double r : report.radius_grid) {
      Ball B = ball(space, x, r);
      bool inside = true;
      for (int v : B.members)
        if (!space.is_interior(v)) inside = false;
      if (!inside || B.members.size() < 2) continue;

      for (int start = 0; start < opts.poincare_starts; ++start) {
        std::mt19937_64 rng(opts.seed * 1000003 + x * 131 + start);
        std::normal_distribution<double> normal(0.0, 1.0);
        Vector u = Vector::Zero(space.n());
        for (int v : space.interior) u(v) = normal(rng);
        double best = poincare_ratio(space, B, u, opts.poincare_p);
        double step = 0.5;
        for (int it = 0; it < opts.poincare_iters; ++it) {
          Vector cand = u;
          for (int v : space.interior) cand(v) += step * normal(rng);
          double val = poincare_ratio(space, B, cand, opts.poincare_p);
          if (val > best) {
            best = val;
            u = cand;
          } else {
            step *= 0.97;
          }
        }
        if (best > 0.0) {
          report.poincare_samples.push_back({x, r, u, best});
          report.K_P = std::max(report.K_P, best);
        }
      }
    }
  }

  return report;
}

}  // namespace plap
