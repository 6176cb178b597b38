#pragma once

#include "plap/energy.hpp"

namespace plap {

struct DeGiorgiSample {
  int y = 0;
  double rho = 0.0;
  double R = 0.0;
  double alpha = 0.0;
  double lhs = 0.0;
  double volume_term = 0.0;
  double boundary_term_p = 0.0;  // |f| (u-alpha)_+^p dP, statement form
  double boundary_term_1 = 0.0;  // tau (u-alpha)_+ |f| dP, proof form
  double K_required_p = 0.0;
  double K_required_1 = 0.0;
  bool applicable_p = false;  // denominator positive
  bool applicable_1 = false;
  bool pass = false;  // finite K, or lhs == 0 when not applicable
};

struct SampleSpec {
  int y = 0;
  double rho = 0.0;
  double R = 0.0;
  double alpha = 0.0;
};

std::vector<DeGiorgiSample> de_giorgi_check(const MetricMeasureSpace& space,
                                            const ScalarField& u,
                                            const ProblemSpec& spec,
                                            const std::vector<SampleSpec>& samples,
                                            bool relax_radii = false);

struct DgClassReport {
  double K = 0.0;  // max lhs / rhs_core over applicable samples
  int applicable = 0;
  int not_applicable = 0;
  bool pass = false;
  std::vector<DeGiorgiSample> samples;
};

/// Interior Caccioppoli check on balls fully inside the domain; run on
/// both u and -u by the caller.
DgClassReport dg_class_check(const MetricMeasureSpace& space,
                             const ScalarField& u, double p,
                             const std::vector<SampleSpec>& samples,
                             bool relax_radii = false);

struct BoundednessReport {
  double R = 0.0;
  double sup_interior = 0.0;  // max |u| over Omega_R
  double sup_trace = 0.0;     // max |Tu| over the boundary
  std::vector<int> omega_R;   // {y interior : d(y, boundary) < R/2}
  std::string mesh_tag;
};

BoundednessReport boundedness_report(const MetricMeasureSpace& space,
                                     const ScalarField& u, double R,
                                     bool relax_radius = false,
                                     const std::string& mesh_tag = "");

struct GiustiResult {
  bool hypothesis_holds = false;
  bool holds = false;
  double constant = 0.0;  // derived c(theta, p)
};

/// Hole-filling iteration check: phi sampled at radii (ascending), with
/// phi(rho) <= theta phi(R) + A/(R-rho)^p + B assumed on all pairs.
GiustiResult giusti_iteration_check(const std::vector<double>& radii,
                                    const std::vector<double>& phi,
                                    double theta, double A, double B,
                                    double p);

/// The derived iteration constant alone (exposed for oracle tests).
double giusti_constant(double theta, double p);

/// The radius-ladder ratio used in the derivation of giusti_constant.
double giusti_lambda(double theta, double p);

/// Default verification sample grid: radii at quantiles of diam/10,
/// levels at quantiles of the field range.
std::vector<SampleSpec> default_boundary_samples(const MetricMeasureSpace& space,
                                                 const ScalarField& u,
                                                 bool relax_radii = false);
std::vector<SampleSpec> default_interior_samples(const MetricMeasureSpace& space,
                                                 const ScalarField& u,
                                                 bool relax_radii = false);

}  // namespace plap
