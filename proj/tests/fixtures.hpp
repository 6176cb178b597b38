#pragma once

// Shared fixtures and independent oracles for the test suite. Oracles here
// deliberately avoid the library's own code paths (e.g. Dijkstra vs the
// library's Floyd-Warshall) so agreement is meaningful.

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <vector>

#include "plap/generate.hpp"
#include "plap/energy.hpp"
#include "plap/space.hpp"

namespace fixtures {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline int add(plap::SpaceSpec& s, const std::string& id, double mu,
               plap::Role role, double perimeter = kNaN, double f = 0.0) {
  s.ids.push_back(id);
  s.mu.push_back(mu);
  s.roles.push_back(role);
  s.perimeter.push_back(perimeter);
  s.f.push_back(f);
  return static_cast<int>(s.ids.size()) - 1;
}

/// a (interior) -- b (boundary), unit everything.
inline plap::SpaceSpec two_vertex() {
  plap::SpaceSpec s;
  add(s, "a", 1.0, plap::Role::Interior);
  add(s, "b", 1.0, plap::Role::Boundary, 1.0);
  s.edges.push_back({0, 1, 1.0});
  return s;
}

/// b0 - v0 - v1 - v2 - b1 with unit lengths and measures (5 vertices).
inline plap::SpaceSpec path5() {
  plap::SpaceSpec s;
  add(s, "b0", 1.0, plap::Role::Boundary, 1.0);
  add(s, "v0", 1.0, plap::Role::Interior);
  add(s, "v1", 1.0, plap::Role::Interior);
  add(s, "v2", 1.0, plap::Role::Interior);
  add(s, "b1", 1.0, plap::Role::Boundary, 1.0);
  for (int i = 0; i < 4; ++i) s.edges.push_back({i, i + 1, 1.0});
  return s;
}

/// Two interior vertices joined by a unit edge, one boundary vertex
/// hanging off the first; f on the boundary vertex must be 0 for a
/// balanced problem (a single boundary vertex cannot carry a dipole).
inline plap::SpaceSpec two_interior_line() {
  plap::SpaceSpec s;
  add(s, "u0", 1.0, plap::Role::Interior);
  add(s, "u1", 1.0, plap::Role::Interior);
  add(s, "b", 1.0, plap::Role::Boundary, 1.0);
  s.edges.push_back({0, 1, 1.0});
  s.edges.push_back({0, 2, 1.0});
  return s;
}

/// Two interior vertices with a boundary vertex at each end carrying a
/// +a / -a dipole: b0 - u0 - u1 - b1.
inline plap::SpaceSpec dipole_line(double amplitude = 1.0) {
  plap::SpaceSpec s;
  add(s, "b0", 1.0, plap::Role::Boundary, 1.0, amplitude);
  add(s, "u0", 1.0, plap::Role::Interior);
  add(s, "u1", 1.0, plap::Role::Interior);
  add(s, "b1", 1.0, plap::Role::Boundary, 1.0, -amplitude);
  for (int i = 0; i < 3; ++i) s.edges.push_back({i, i + 1, 1.0});
  return s;
}

/// Independent all-pairs metric oracle: binary-heap Dijkstra per source.
inline std::vector<std::vector<double>> dijkstra_all(
    const plap::SpaceSpec& spec) {
  const int n = static_cast<int>(spec.ids.size());
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& e : spec.edges) {
    adj[e.a].push_back({e.b, e.length});
    adj[e.b].push_back({e.a, e.length});
  }
  std::vector<std::vector<double>> dist(
      n, std::vector<double>(n, std::numeric_limits<double>::infinity()));
  for (int src = 0; src < n; ++src) {
    auto& d = dist[src];
    d[src] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.push({0.0, src});
    while (!heap.empty()) {
      auto [dd, v] = heap.top();
      heap.pop();
      if (dd > d[v] + 1e-15) continue;
      for (auto [w, len] : adj[v]) {
        if (d[v] + len < d[w] - 1e-15) {
          d[w] = d[v] + len;
          heap.push({d[w], w});
        }
      }
    }
  }
  return dist;
}

/// Mean-zero random field on the non-exterior vertices.
inline plap::ScalarField random_mean_zero(const plap::MetricMeasureSpace& space,
                                          std::mt19937_64& rng,
                                          double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  plap::Vector u = plap::Vector::Zero(space.n());
  for (int v = 0; v < space.n(); ++v)
    if (space.role[v] != plap::Role::Exterior) u(v) = normal(rng);
  double num = 0.0, den = 0.0;
  for (int v : space.interior) {
    num += u(v) * space.mu(v);
    den += space.mu(v);
  }
  for (int v = 0; v < space.n(); ++v)
    if (space.role[v] != plap::Role::Exterior) u(v) -= num / den;
  return {plap::FieldDomain::All, u};
}

inline plap::ProblemSpec default_problem(const plap::MetricMeasureSpace& space,
                                         double p = 2.0, double c = 1.0,
                                         double gamma = 2.0) {
  return {p, {c, gamma},
          plap::ScalarField{plap::FieldDomain::Boundary, space.f},
          std::numeric_limits<double>::infinity()};
}

}  // namespace fixtures
