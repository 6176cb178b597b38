#include "plap/verify.hpp"

#include <algorithm>
#include <cmath>

namespace plap {

namespace {

ScalarField truncate_above(const ScalarField& u, double alpha) {
  ScalarField out = u;
  out.values = (u.values.array() - alpha).max(0.0);
  return out;
}

DeGiorgiSample evaluate_sample(const MetricMeasureSpace& space,
                               const ScalarField& u, const ProblemSpec& spec,
                               const SampleSpec& sample, bool with_boundary,
                               bool relax_radii) {
  DeGiorgiSample out;
  out.y = sample.y;
  out.rho = sample.rho;
  out.R = sample.R;
  out.alpha = sample.alpha;

  ScalarField truncated = truncate_above(u, sample.alpha);
  ScalarField g = max_slope_gradient(space, truncated, EdgeScope::Closure);

  const double p = spec.p;
  for (int v : space.interior) {
    double d = space.dist(sample.y, v);
    if (d <= sample.rho)
      out.lhs += std::pow(g.values(v), p) * space.mu(v);
    if (d <= sample.R)
      out.volume_term += std::pow(truncated.values(v), p) * space.mu(v);
  }
  if (with_boundary) {
    CompetitorBundle bundle = competitor(space, u, spec, sample.y, sample.rho,
                                         sample.R, sample.alpha, relax_radii);
    for (int b : space.boundary) {
      if (space.dist(sample.y, b) > sample.R) continue;
      double plus = truncated.values(b);
      out.boundary_term_p += std::abs(spec.f.values(b)) * std::pow(plus, p) *
                             space.perimeter(b);
      out.boundary_term_1 += bundle.tau.values(b) * plus *
                             std::abs(spec.f.values(b)) * space.perimeter(b);
    }
  }

  double gap = std::pow(sample.R - sample.rho, p);
  double denom_p = out.volume_term / gap + out.boundary_term_p;
  double denom_1 = out.volume_term / gap + out.boundary_term_1;
  out.applicable_p = denom_p > 0.0;
  out.applicable_1 = denom_1 > 0.0;
  out.K_required_p = out.applicable_p ? out.lhs / denom_p : 0.0;
  out.K_required_1 = out.applicable_1 ? out.lhs / denom_1 : 0.0;
  out.pass = out.applicable_p ? std::isfinite(out.K_required_p)
                              : out.lhs == 0.0;
  return out;
}

}  // namespace

std::vector<DeGiorgiSample> de_giorgi_check(
    const MetricMeasureSpace& space, const ScalarField& u,
    const ProblemSpec& spec, const std::vector<SampleSpec>& samples,
    bool relax_radii) {
  std::vector<DeGiorgiSample> out;
  double diam = space.domain_diameter();
  for (const auto& sample : samples) {
    if (!(sample.rho > 0.0) || !(sample.rho < sample.R))
      throw Error(ErrorCode::BadRadii, "need 0 < rho < R");
    if (!relax_radii && !(sample.R < diam / 10.0))
      throw Error(ErrorCode::BadRadii, "R must be below diam/10 (or relax)");
    if (!space.is_boundary(sample.y))
      throw Error(ErrorCode::BadParams, "sample center must be on the boundary");
    out.push_back(
        evaluate_sample(space, u, spec, sample, true, relax_radii));
  }
  return out;
}

DgClassReport dg_class_check(const MetricMeasureSpace& space,
                             const ScalarField& u, double p,
                             const std::vector<SampleSpec>& samples,
                             bool relax_radii) {
  DgClassReport report;
  double diam = space.domain_diameter();
  ProblemSpec dummy;
  dummy.p = p;
  dummy.f = ScalarField{FieldDomain::Boundary, Vector::Zero(space.n())};
  for (const auto& sample : samples) {
    if (!(sample.rho > 0.0) || !(sample.rho < sample.R))
      throw Error(ErrorCode::BadRadii, "need 0 < rho < R");
    if (!relax_radii && !(sample.R < diam / 10.0))
      throw Error(ErrorCode::BadRadii, "R must be below diam/10 (or relax)");
    Ball B = ball(space, sample.y, sample.R);
    for (int v : B.members)
      if (!space.is_interior(v))
        throw Error(ErrorCode::BallNotInterior,
                    "B(y,R) must lie inside the domain");
    DeGiorgiSample s =
        evaluate_sample(space, u, dummy, sample, false, relax_radii);
    if (s.applicable_p) {
      report.applicable++;
      report.K = std::max(report.K, s.K_required_p);
    } else {
      report.not_applicable++;
    }
    report.samples.push_back(s);
  }
  report.pass = true;
  for (const auto& s : report.samples)
    if (!s.pass) report.pass = false;
  return report;
}

BoundednessReport boundedness_report(const MetricMeasureSpace& space,
                                     const ScalarField& u, double R,
                                     bool relax_radius,
                                     const std::string& mesh_tag) {
  double diam = space.domain_diameter();
  if (!(R > 0.0) || (!relax_radius && !(R < diam / 4.0)))
    throw Error(ErrorCode::BadRadius, "need 0 < R < diam/4 (or relax)");

  BoundednessReport report;
  report.R = R;
  report.mesh_tag = mesh_tag;
  for (int v : space.interior) {
    double d = std::numeric_limits<double>::infinity();
    for (int b : space.boundary) d = std::min(d, space.dist(v, b));
    if (d < R / 2.0) {
      report.omega_R.push_back(v);
      report.sup_interior = std::max(report.sup_interior,
                                     std::abs(u.values(v)));
    }
  }
  for (int b : space.boundary)
    report.sup_trace = std::max(report.sup_trace, std::abs(u.values(b)));
  return report;
}

namespace {

// hole-filling: radii rho_i = rho0 + (1 - lambda^i)(R0 - rho0) with
// lambda in (theta^{1/p}, 1); summing the geometric series gives
//   c_A = (1-lambda)^{-p} / (1 - theta lambda^{-p}),  c_B = 1/(1-theta).
std::pair<double, double> giusti_lambda_constant(double theta, double p) {
  if (theta == 0.0) return {0.5, 1.0};
  if (!(theta < 1.0))
    throw Error(ErrorCode::BadParams, "need theta in [0,1)");
  double a = std::pow(theta, 1.0 / p) + 1e-9, b = 1.0 - 1e-9;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  auto cost = [&](double lambda) {
    double denom = 1.0 - theta * std::pow(lambda, -p);
    if (denom <= 0.0) return std::numeric_limits<double>::infinity();
    return std::pow(1.0 - lambda, -p) / denom;
  };
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = cost(x1), f2 = cost(x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = cost(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = cost(x2);
    }
  }
  double lambda = f1 < f2 ? x1 : x2;
  double best = std::max(std::min(f1, f2), 1.0 / (1.0 - theta));
  return {lambda, best};
}

}  // namespace

double giusti_constant(double theta, double p) {
  return giusti_lambda_constant(theta, p).second;
}

double giusti_lambda(double theta, double p) {
  return giusti_lambda_constant(theta, p).first;
}

GiustiResult giusti_iteration_check(const std::vector<double>& radii,
                                    const std::vector<double>& phi,
                                    double theta, double A, double B,
                                    double p) {
  if (radii.size() != phi.size() || radii.size() < 2)
    throw Error(ErrorCode::BadParams, "need matching radius/phi samples");
  for (double v : phi)
    if (v < 0.0) throw Error(ErrorCode::BadParams, "phi must be nonnegative");

  GiustiResult out;
  out.hypothesis_holds = true;
  const double tol = 1e-12;
  for (size_t i = 0; i < radii.size(); ++i) {
    for (size_t j = i + 1; j < radii.size(); ++j) {
      double rho = radii[i], R = radii[j];
      if (!(rho < R)) continue;
      double bound = theta * phi[j] + A / std::pow(R - rho, p) + B;
      if (phi[i] > bound * (1.0 + 1e-12) + tol) out.hypothesis_holds = false;
    }
  }
  if (!out.hypothesis_holds)
    throw Error(ErrorCode::HypothesisFails,
                "recursion hypothesis fails on the samples");

  out.constant = giusti_constant(theta, p);
  double rho0 = radii.front(), R0 = radii.back();
  double bound = out.constant * (A / std::pow(R0 - rho0, p) + B);
  out.holds = phi.front() <= bound * (1.0 + 1e-12) + tol;
  return out;
}

namespace {

std::vector<double> quantiles(double lo, double hi,
                              const std::vector<double>& qs) {
  std::vector<double> out;
  for (double q : qs) out.push_back(lo + q * (hi - lo));
  return out;
}

}  // namespace

std::vector<SampleSpec> default_boundary_samples(
    const MetricMeasureSpace& space, const ScalarField& u, bool relax_radii) {
  double diam = space.domain_diameter();
  double cap = relax_radii ? diam : diam / 10.0;
  std::vector<double> radii = quantiles(0.0, cap, {0.2, 0.35, 0.5});
  double umin = std::numeric_limits<double>::infinity(), umax = -umin;
  for (int v : space.interior) {
    umin = std::min(umin, u.values(v));
    umax = std::max(umax, u.values(v));
  }
  std::vector<double> levels =
      quantiles(umin, umax, {0.1, 0.3, 0.5, 0.7, 0.9});

  std::vector<SampleSpec> out;
  for (int y : space.boundary)
    for (size_t r = 0; r + 1 < radii.size(); ++r)
      for (double alpha : levels)
        out.push_back({y, radii[r], radii[r + 1], alpha});
  return out;
}

std::vector<SampleSpec> default_interior_samples(
    const MetricMeasureSpace& space, const ScalarField& u, bool relax_radii) {
  double diam = space.domain_diameter();
  double cap = relax_radii ? diam : diam / 10.0;
  std::vector<double> radii = quantiles(0.0, cap, {0.2, 0.35, 0.5});
  double umin = std::numeric_limits<double>::infinity(), umax = -umin;
  for (int v : space.interior) {
    umin = std::min(umin, u.values(v));
    umax = std::max(umax, u.values(v));
  }
  std::vector<double> levels =
      quantiles(umin, umax, {0.1, 0.3, 0.5, 0.7, 0.9});

  std::vector<SampleSpec> out;
  for (int y : space.interior) {
    for (size_t r = 0; r + 1 < radii.size(); ++r) {
      Ball B = ball(space, y, radii[r + 1]);
      bool inside = true;
      for (int v : B.members)
        if (!space.is_interior(v)) inside = false;
      if (!inside) continue;
      for (double alpha : levels)
        out.push_back({y, radii[r], radii[r + 1], alpha});
    }
  }
  return out;
}

}  // namespace plap
