#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "plap/errors.hpp"

namespace plap {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Role { Interior, Boundary, Exterior };

/// Where a scalar field is meaningful. Values are always stored for the
/// full vertex set; entries outside the domain are zero by convention.
enum class FieldDomain { All, Interior, Boundary };

struct ScalarField {
  FieldDomain domain = FieldDomain::All;
  Vector values;
};

struct SpaceEdge {
  int a = 0;
  int b = 0;
  double length = 0.0;
};

/// Input description for build_space(). Perimeter weights may be omitted
/// on boundary vertices, in which case they are derived from the edge-cut
/// rule w(x,y) = min(mu(x),mu(y)) / l(x,y) over incident interior edges.
struct SpaceSpec {
  std::vector<std::string> ids;
  std::vector<double> mu;
  std::vector<Role> roles;
  std::vector<double> perimeter;  // NaN = derive
  std::vector<double> f;          // boundary data carried by the space file
  std::vector<SpaceEdge> edges;
};

/// Finite metric measure space with a distinguished domain decomposition.
/// Immutable after build_space(); all queries are read-only.
struct MetricMeasureSpace {
  std::vector<std::string> ids;
  Vector mu;
  std::vector<Role> role;
  Vector perimeter;  // zero off the boundary
  Vector f;          // zero off the boundary
  std::vector<SpaceEdge> edges;
  Matrix dist;  // all-pairs shortest-path distances

  // adjacency over the full graph, and restricted to interior+boundary
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::vector<std::vector<std::pair<int, double>>> adj_closure;

  std::vector<int> interior;
  std::vector<int> boundary;
  std::vector<int> exterior;

  int n() const { return static_cast<int>(mu.size()); }
  bool is_interior(int v) const { return role[v] == Role::Interior; }
  bool is_boundary(int v) const { return role[v] == Role::Boundary; }

  double mu_of(const std::vector<int>& members) const;
  double mu_interior() const { return mu_of(interior); }

  /// Diameter of the closure of the domain (interior plus boundary).
  double domain_diameter() const;

  /// Edge length between adjacent vertices; throws InvalidPath otherwise.
  double edge_length(int a, int b) const;

  int index_of(const std::string& id) const;
};

struct Ball {
  int center = 0;
  double radius = 0.0;
  std::vector<int> members;  // sorted vertex indices
};

/// One field retained from the empirical Poincare scan, so the reported
/// constant can be re-asserted against the record.
struct PoincareSample {
  int center = 0;
  double radius = 0.0;
  Vector u;  // full-length, varies only on interior vertices
  double ratio = 0.0;
};

struct HypothesisReport {
  double K_D = 1.0;   // doubling constant on the grid
  double s = 0.0;     // lower-mass exponent
  double K_H1 = 1.0;  // measure density, centers in the interior
  double K_H1_closure = 1.0;  // same scan with boundary centers included
  double K_H2 = 1.0;  // Ahlfors codimension-1 constant
  double K_P = 0.0;   // empirical Poincare constant (lambda = 1)
  double diam = 0.0;
  std::vector<double> radius_grid;
  std::vector<std::pair<int, double>> sample_grid;  // (center, radius) pairs
  std::vector<PoincareSample> poincare_samples;
};

struct StructuralScanOptions {
  int poincare_starts = 8;
  int poincare_iters = 200;
  double poincare_p = 2.0;
  std::uint64_t seed = 0;
};

MetricMeasureSpace build_space(const SpaceSpec& spec);

Ball ball(const MetricMeasureSpace& space, int center, double radius);

/// mu-weighted average of u over a vertex set.
double mean(const MetricMeasureSpace& space, const ScalarField& u,
            const std::vector<int>& subset);

/// Discrete perimeter of E relative to U: edge-cut weight
/// min(mu(x),mu(y))/l(x,y) summed over edges leaving E inside U.
double perimeter(const MetricMeasureSpace& space, const std::vector<int>& E,
                 const std::vector<int>& U);

HypothesisReport structural_constants(const MetricMeasureSpace& space,
                                      const std::vector<double>& radius_grid,
                                      const StructuralScanOptions& opts = {});

}  // namespace plap
