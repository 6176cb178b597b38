#include "plap/energy.hpp"

#include <cmath>

namespace plap {

double reaction_value(double t, const ReactionParams& params) {
  return params.c - std::pow(std::abs(t), params.gamma);
}

void validate_problem(const MetricMeasureSpace& space, const ProblemSpec& spec,
                      double p_star) {
  if (!(spec.p > 1.0)) throw Error(ErrorCode::BadParams, "p must exceed 1");
  if (!(spec.reaction.c > 0.0))
    throw Error(ErrorCode::BadParams, "reaction parameter c must be positive");
  if (!(spec.reaction.gamma > 1.0) || !(spec.reaction.gamma < p_star))
    throw Error(ErrorCode::BadParams, "gamma must lie in (1, p_star)");
  double balance = 0.0, scale = 0.0;
  for (int b : space.boundary) {
    balance += spec.f.values(b) * space.perimeter(b);
    scale += std::abs(spec.f.values(b)) * space.perimeter(b);
  }
  if (std::abs(balance) > 1e-12 * std::max(1.0, scale))
    throw Error(ErrorCode::BadParams, "boundary data f is not balanced");
}

double energy_J(const MetricMeasureSpace& space, const ScalarField& u,
                const ProblemSpec& spec, EnergyVariant variant) {
  double m = mean(space, u, space.interior);
  double scale = 1.0 + u.values.cwiseAbs().maxCoeff();
  if (std::abs(m) > 1e-9 * scale)
    throw Error(ErrorCode::NotMeanZero, "field is not mean-zero on the domain");

  ScalarField g = max_slope_gradient(space, u, EdgeScope::Closure);
  double value = 0.0;
  for (int v : space.interior) {
    value += std::pow(g.values(v), spec.p) * space.mu(v);
    value -= reaction_value(u.values(v), spec.reaction) * space.mu(v);
  }
  if (variant != EnergyVariant::I) {
    double sigma = variant == EnergyVariant::JMinus ? -1.0 : 1.0;
    for (int b : space.boundary)
      value += sigma * u.values(b) * spec.f.values(b) * space.perimeter(b);
  }
  return value;
}

LowerBounds lower_bounds(const MetricMeasureSpace& space,
                         const ProblemSpec& spec, double K_T) {
  LowerBounds lb;
  lb.p = spec.p;
  lb.c_mu = spec.reaction.c * space.mu_interior();
  lb.trace_coeff = K_T * lp_norm_boundary(space, spec.f.values, spec.q);
  // Exact minimum of t -> t^p - coeff * t over t >= 0.
  lb.explicit_floor =
      -(spec.p - 1.0) *
          std::pow(lb.trace_coeff / spec.p, spec.p / (spec.p - 1.0)) -
      lb.c_mu;
  return lb;
}

CompetitorBundle competitor(const MetricMeasureSpace& space,
                            const ScalarField& u, const ProblemSpec& spec,
                            int y, double rho, double R, double alpha,
                            bool relax_radii) {
  if (!(rho > 0.0) || !(rho < R))
    throw Error(ErrorCode::BadRadii, "need 0 < rho < R");
  if (!relax_radii && !(R < space.domain_diameter() / 10.0))
    throw Error(ErrorCode::BadRadii, "R must be below diam/10 (or relax)");

  const int n = space.n();
  Ball inner = ball(space, y, rho);

  CompetitorBundle bundle;
  bundle.tau = {FieldDomain::All, Vector::Zero(n)};
  for (int v = 0; v < n; ++v) {
    double d = std::numeric_limits<double>::infinity();
    for (int m : inner.members) d = std::min(d, space.dist(v, m));
    bundle.tau.values(v) = std::max(0.0, 1.0 - d / (R - rho));
  }

  std::vector<char> in_S(n, 0), in_S_inner(n, 0);
  for (int v = 0; v < n; ++v) {
    if (space.role[v] == Role::Exterior) continue;
    if (u.values(v) > alpha && space.dist(y, v) <= R) {
      in_S[v] = 1;
      bundle.level_set.push_back(v);
      if (space.dist(y, v) <= rho) {
        in_S_inner[v] = 1;
        bundle.level_set_inner.push_back(v);
      }
    }
  }

  bundle.w = u;
  for (int v = 0; v < n; ++v) {
    double plus = std::max(0.0, u.values(v) - alpha);
    bundle.w.values(v) = u.values(v) - bundle.tau.values(v) * plus;
  }

  // Pointwise slope bound. For a closure neighbour z of x,
  //   w(x)-w(z) = [u(x)-u(z)] - tau(z)[v(x)-v(z)] - v(x)[tau(x)-tau(z)]
  // with v = (u-alpha)_+, |v(x)-v(z)| <= |u(x)-u(z)| and tau Lipschitz
  // with constant 1/(R-rho), hence g_w(x) <= 2 g_u(x) + v(x)/(R-rho) and
  //   g_w(x)^p <= 2^{2p-1} (g_u(x)^p + v(x)^p/(R-rho)^p).
  // The continuum display drops the gradient term inside S_{alpha,rho}
  // (where w is constant a.e.); on a graph a vertex there still sees
  // slopes across the level-set boundary, so the term must stay.
  ScalarField g_u = max_slope_gradient(space, u, EdgeScope::Closure);
  bundle.g_w_bound = {FieldDomain::All, Vector::Zero(n)};
  const double coeff = std::pow(2.0, 2.0 * spec.p - 1.0);
  for (int v : bundle.level_set) {
    double plus = u.values(v) - alpha;
    bundle.g_w_bound.values(v) =
        coeff * (std::pow(g_u.values(v), spec.p) +
                 std::pow(plus / (R - rho), spec.p));
  }
  return bundle;
}

}  // namespace plap
