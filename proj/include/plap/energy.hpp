#pragma once

#include "plap/calculus.hpp"
#include "plap/space.hpp"

namespace plap {

struct ReactionParams {
  double c = 1.0;
  double gamma = 2.0;
};

struct ProblemSpec {
  double p = 2.0;
  ReactionParams reaction;
  ScalarField f;  // boundary data; balanced against the perimeter measure
  double q = std::numeric_limits<double>::infinity();
};

enum class EnergyVariant { J, I, JMinus };

/// G(t) = c - |t|^gamma.
double reaction_value(double t, const ReactionParams& params);

/// Throws BadParams if f is unbalanced (sum f P != 0) or gamma is outside
/// (1, p_star). Pass p_star = +inf when unknown.
void validate_problem(const MetricMeasureSpace& space, const ProblemSpec& spec,
                      double p_star = std::numeric_limits<double>::infinity());

/// The energy functional. Gradient term uses the closure max-slope field,
/// summed over the interior; reaction over the interior; boundary term
/// sigma * sum Tu f P with sigma = +1 (J), -1 (JMinus); variant I drops f.
double energy_J(const MetricMeasureSpace& space, const ScalarField& u,
                const ProblemSpec& spec, EnergyVariant variant = EnergyVariant::J);

struct LowerBounds {
  double p = 2.0;
  double trace_coeff = 0.0;  // K_T * ||f||_{L^q(boundary)}
  double c_mu = 0.0;         // c * mu(interior)
  double explicit_floor = 0.0;

  // J(u) >= holder_curve(||g_u||_{L^p}) for the measured trace constant.
  double holder_curve(double t) const {
    return t * (std::pow(t, p - 1.0) - trace_coeff) - c_mu;
  }
};

LowerBounds lower_bounds(const MetricMeasureSpace& space,
                         const ProblemSpec& spec, double K_T);

struct CompetitorBundle {
  ScalarField tau;             // cutoff, 1 on B(y,rho), 0 outside B(y,R)
  std::vector<int> level_set;  // S_{alpha,R}, interior and boundary parts
  std::vector<int> level_set_inner;  // S_{alpha,rho}
  ScalarField w;  // u - tau (u-alpha)_+
  // Pointwise energy bound on S_{alpha,R}:
  //   2^{2p-1} (g_u^p + (u-alpha)_+^p / (R-rho)^p),
  // valid for the discrete max-slope gradient of w (see competitor()).
  ScalarField g_w_bound;
};

/// Truncation competitor around a boundary vertex. Radii must satisfy
/// 0 < rho < R, and R < diam/10 unless relax_radii.
CompetitorBundle competitor(const MetricMeasureSpace& space,
                            const ScalarField& u, const ProblemSpec& spec,
                            int y, double rho, double R, double alpha,
                            bool relax_radii = false);

}  // namespace plap
