#pragma once

#include <vector>

#include "plap/space.hpp"

namespace plap {

using Path = std::vector<int>;
using PathFamily = std::vector<Path>;

/// Which edges feed the max-slope gradient. Closure drops edges touching
/// exterior vertices; Interior keeps interior-interior edges only.
enum class EdgeScope { Full, Closure, Interior };

/// Trapezoid-rule line integral of g along an edge path.
double line_integral(const MetricMeasureSpace& space, const ScalarField& g,
                     const Path& path);

/// Exhaustive check of the upper-gradient inequality over all simple paths
/// with at most path_cap edges.
bool is_upper_gradient(const MetricMeasureSpace& space, const ScalarField& u,
                       const ScalarField& g, int path_cap = 12,
                       double tol = 1e-12);

/// g_u(x) = max over neighbours y of |u(y)-u(x)| / l(x,y).
ScalarField max_slope_gradient(const MetricMeasureSpace& space,
                               const ScalarField& u,
                               EdgeScope scope = EdgeScope::Full);

/// Smallest-L^p(mu) field satisfying the trapezoid edge constraints
/// l(x,y) (g(x)+g(y))/2 >= |u(x)-u(y)|. Strictly convex program, solved
/// to 1e-8 in objective.
ScalarField minimal_weak_gradient(const MetricMeasureSpace& space,
                                  const ScalarField& u, double p);

double p_modulus(const MetricMeasureSpace& space, const PathFamily& family,
                 double p);

/// ||g_u||_{L^p(mu)} + ||u||_{L^p(mu)} over the full vertex set.
double newtonian_norm(const MetricMeasureSpace& space, const ScalarField& u,
                      double p);

/// Subtracts the mu-mean over the interior from every defined entry.
ScalarField mean_zero_project(const MetricMeasureSpace& space,
                              const ScalarField& u);

/// Restriction to boundary vertices.
ScalarField trace(const MetricMeasureSpace& space, const ScalarField& u);

struct EmbeddingConstants {
  double p_star = 0.0;  // +inf encoded as std::numeric_limits infinity
  double K_S = 0.0;
  double K_T = 0.0;
};

struct EmbeddingScanOptions {
  double q = std::numeric_limits<double>::infinity();  // f-exponent; q' dual
  int starts = 64;
  int iters = 200;
  std::uint64_t seed = 0;
};

/// p_star from the lower-mass exponent plus empirical Sobolev / trace
/// constants by multi-start ratio maximization (reported lower bounds).
EmbeddingConstants embedding_constants(const MetricMeasureSpace& space,
                                       double p, double s,
                                       const EmbeddingScanOptions& opts = {});

// Lp norms against mu (interior) and the perimeter measure (boundary).
double lp_norm_interior(const MetricMeasureSpace& space, const Vector& values,
                        double p);
double lp_norm_boundary(const MetricMeasureSpace& space, const Vector& values,
                        double q);

}  // namespace plap
