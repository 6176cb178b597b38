#pragma once

#include <cstdint>

#include "plap/energy.hpp"

namespace plap {

struct SolverOptions {
  int max_iters = 4000;
  double tol = 1e-10;          // relative objective stall tolerance
  double eps_initial = -1.0;   // <0: 0.1 * data range
  double eps_decay = 0.5;      // applied every eps_period iterations
  int eps_period = 200;
  double eps_floor = 1e-6;
  int polish_iters = 600;
  int starts = 4;
  std::uint64_t seed = 0;
  bool zero_start = true;  // include the zero field among the starts
};

struct MinimizerResult {
  ScalarField u;  // mean-zero over the interior
  ScalarField g;  // closure max-slope gradient
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> history;  // best objective so far, per iteration
};

/// Approximate global minimizer of J over mean-zero fields: annealed
/// softmax smoothing of the max-slope energy, descent with backtracking,
/// then nonsmooth polishing. Deterministic given the seed.
MinimizerResult minimize(const MetricMeasureSpace& space,
                         const ProblemSpec& spec,
                         const SolverOptions& opts = {});

/// One descent run from a caller-supplied start (used by the multi-start
/// analysis; minimize() reduces over several of these).
MinimizerResult minimize_from(const MetricMeasureSpace& space,
                              const ProblemSpec& spec,
                              const SolverOptions& opts, const Vector& start);

struct OracleGrid {
  double lo = -1.0;
  double hi = 1.0;
  double step = 0.1;
};

struct OracleResult {
  double value = 0.0;
  ScalarField argmin;
};

/// Exhaustive grid scan over interior values (one eliminated by the
/// mean-zero constraint) and boundary values. Throws TooManyVertices
/// beyond 4 interior degrees of freedom.
OracleResult brute_force_oracle(const MetricMeasureSpace& space,
                                const ProblemSpec& spec,
                                const OracleGrid& grid);

struct UniquenessReport {
  int starts = 0;
  double best_value = 0.0;
  double max_value_gap = 0.0;        // max |J(u_i) - J(u_j)|
  double max_gradient_gap = 0.0;     // max ||g_i - g_j||_inf over the interior
  double max_nongradient_gap = 0.0;  // reaction + boundary part discrepancy
  double max_midpoint_excess = 0.0;  // J(midpoint) - best value
  std::vector<MinimizerResult> runs;
};

UniquenessReport multi_start_analysis(const MetricMeasureSpace& space,
                                      const ProblemSpec& spec,
                                      const SolverOptions& opts);

struct ProbeReport {
  int jensen_probes = 0;
  int jensen_violations = 0;
  double jensen_worst_margin = 0.0;  // max of J(mid) - mix (<=0 when convex)
  int uniform_probes = 0;
  int uniform_violations = 0;
  double uniform_worst_margin = 0.0;
};

/// Random Jensen checks on J plus Clarkson uniform-convexity checks on
/// t -> t^p for p >= 2.
ProbeReport convexity_suite(const MetricMeasureSpace& space,
                            const ProblemSpec& spec, int n,
                            std::uint64_t seed);

}  // namespace plap
