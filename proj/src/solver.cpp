#include "plap/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace plap {

namespace {

struct SmoothedEnergy {
  const MetricMeasureSpace& space;
  const ProblemSpec& spec;
  double eps;

  // eps-softmax relaxation of the max-slope energy: each |.| becomes
  // sqrt(t^2 + eps^2) and each vertex max a log-sum-exp. Upper bound of J.
  double value(const Vector& u) const {
    double total = 0.0;
    for (int x : space.interior) {
      total += space.mu(x) * std::pow(soft_gradient(u, x), spec.p);
      total -= reaction_value(u(x), spec.reaction) * space.mu(x);
    }
    for (int b : space.boundary)
      total += u(b) * spec.f.values(b) * space.perimeter(b);
    return total;
  }

  Vector gradient(const Vector& u) const {
    Vector grad = Vector::Zero(space.n());
    for (int x : space.interior) {
      const auto& nbrs = space.adj_closure[x];
      double amax = 0.0;
      for (const auto& [y, len] : nbrs) {
        double d = (u(y) - u(x)) / len;
        amax = std::max(amax, std::sqrt(d * d + eps * eps));
      }
      double Z = 0.0;
      for (const auto& [y, len] : nbrs) {
        double d = (u(y) - u(x)) / len;
        Z += std::exp((std::sqrt(d * d + eps * eps) - amax) / eps);
      }
      double g = amax + eps * std::log(Z);
      double outer = space.mu(x) * spec.p * std::pow(g, spec.p - 1.0);
      for (const auto& [y, len] : nbrs) {
        double d = (u(y) - u(x)) / len;
        double a = std::sqrt(d * d + eps * eps);
        double weight = std::exp((a - amax) / eps) / Z;
        double da = d / (a * len);  // d a / d u_y; minus for u_x
        grad(y) += outer * weight * da;
        grad(x) -= outer * weight * da;
      }
      double t = u(x);
      grad(x) += space.mu(x) * spec.reaction.gamma *
                 std::pow(std::abs(t), spec.reaction.gamma - 1.0) *
                 (t > 0 ? 1.0 : (t < 0 ? -1.0 : 0.0));
    }
    for (int b : space.boundary)
      grad(b) += spec.f.values(b) * space.perimeter(b);
    return grad;
  }

  // Dense Hessian of the smoothed energy over all coordinates (exterior
  // rows/columns stay zero). Per interior vertex: the softened max G is a
  // log-sum-exp of a_e = sqrt(d_e^2 + eps^2); chain rule through
  // mu * G^p plus the diagonal reaction curvature.
  Eigen::MatrixXd hessian(const Vector& u) const {
    const int n = static_cast<int>(u.size());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    for (int x : space.interior) {
      const auto& nbrs = space.adj_closure[x];
      const int m = static_cast<int>(nbrs.size());
      double amax = 0.0;
      std::vector<double> a(m), d(m), len(m);
      std::vector<int> yv(m);
      for (int e = 0; e < m; ++e) {
        yv[e] = nbrs[e].first;
        len[e] = nbrs[e].second;
        d[e] = (u(yv[e]) - u(x)) / len[e];
        a[e] = std::sqrt(d[e] * d[e] + eps * eps);
        amax = std::max(amax, a[e]);
      }
      double Z = 0.0;
      std::vector<double> w(m);
      for (int e = 0; e < m; ++e) {
        w[e] = std::exp((a[e] - amax) / eps);
        Z += w[e];
      }
      for (int e = 0; e < m; ++e) w[e] /= Z;
      double G = amax + eps * std::log(Z);

      // local coordinates: index 0 = x, 1..m = neighbors
      Eigen::VectorXd gG = Eigen::VectorXd::Zero(m + 1);
      Eigen::MatrixXd hG = Eigen::MatrixXd::Zero(m + 1, m + 1);
      Eigen::MatrixXd S(m + 1, m);  // columns: grad of a_e in local coords
      S.setZero();
      for (int e = 0; e < m; ++e) {
        double slope = d[e] / (a[e] * len[e]);
        S(0, e) = -slope;
        S(e + 1, e) = slope;
        gG += w[e] * S.col(e);
      }
      for (int e = 0; e < m; ++e) {
        // curvature of a_e: eps^2 / a^3 along the difference direction
        double curv = eps * eps / (a[e] * a[e] * a[e] * len[e] * len[e]);
        Eigen::VectorXd r = Eigen::VectorXd::Zero(m + 1);
        r(0) = -1.0;
        r(e + 1) = 1.0;
        hG += w[e] * curv * r * r.transpose();
        hG += (w[e] / eps) * S.col(e) * S.col(e).transpose();
      }
      hG -= (1.0 / eps) * gG * gG.transpose();

      double c1 = space.mu(x) * spec.p * (spec.p - 1.0) *
                  std::pow(G, spec.p - 2.0);
      double c2 = space.mu(x) * spec.p * std::pow(G, spec.p - 1.0);
      Eigen::MatrixXd local = c1 * gG * gG.transpose() + c2 * hG;

      std::vector<int> map(m + 1);
      map[0] = x;
      for (int e = 0; e < m; ++e) map[e + 1] = yv[e];
      for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= m; ++j) H(map[i], map[j]) += local(i, j);

      double g = spec.reaction.gamma;
      double t = std::max(std::abs(u(x)), 1e-12);
      H(x, x) += space.mu(x) * g * (g - 1.0) * std::pow(t, g - 2.0);
    }
    return H;
  }

 private:
  double soft_gradient(const Vector& u, int x) const {
    const auto& nbrs = space.adj_closure[x];
    double amax = 0.0;
    for (const auto& [y, len] : nbrs) {
      double d = (u(y) - u(x)) / len;
      amax = std::max(amax, std::sqrt(d * d + eps * eps));
    }
    double Z = 0.0;
    for (const auto& [y, len] : nbrs) {
      double d = (u(y) - u(x)) / len;
      Z += std::exp((std::sqrt(d * d + eps * eps) - amax) / eps);
    }
    return amax + eps * std::log(Z);
  }
};

double data_range(const ProblemSpec& spec) {
  double r = spec.f.values.cwiseAbs().maxCoeff();
  return std::max(r, 1e-3);
}

}  // namespace

MinimizerResult minimize_from(const MetricMeasureSpace& space,
                              const ProblemSpec& spec,
                              const SolverOptions& opts, const Vector& start) {
  const int n = space.n();

  auto project = [&](Vector v) {
    for (int x : space.exterior) v(x) = 0.0;
    double num = 0.0, den = 0.0;
    for (int x : space.interior) {
      num += v(x) * space.mu(x);
      den += space.mu(x);
    }
    double m = num / den;
    for (int x = 0; x < n; ++x)
      if (space.role[x] != Role::Exterior) v(x) -= m;
    return v;
  };

  auto true_energy = [&](const Vector& v) {
    return energy_J(space, ScalarField{FieldDomain::All, v}, spec);
  };

  Vector u = project(start);
  double eps =
      opts.eps_initial > 0.0 ? opts.eps_initial : 0.1 * data_range(spec);
  eps = std::max(eps, opts.eps_floor);

  MinimizerResult result;
  Vector best_u = u;
  double best_value = true_energy(u);
  result.history.push_back(best_value);

  SmoothedEnergy smoothed{space, spec, eps};
  double fu = smoothed.value(u);
  Vector grad = smoothed.gradient(u);
  Vector prev_u, prev_grad;
  bool have_prev = false;

  int stall = 0;
  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    // anneal the smoothing temperature
    if (iter > 0 && iter % opts.eps_period == 0 && eps > opts.eps_floor) {
      eps = std::max(eps * opts.eps_decay, opts.eps_floor);
      smoothed.eps = eps;
      fu = smoothed.value(u);
      grad = smoothed.gradient(u);
      have_prev = false;
    }

    // Barzilai-Borwein trial step, fall back to a conservative default.
    double step = 1.0;
    if (have_prev) {
      Vector su = u - prev_u;
      Vector yg = grad - prev_grad;
      double sy = su.dot(yg);
      if (sy > 1e-30) step = su.squaredNorm() / sy;
      step = std::clamp(step, 1e-12, 1e6);
    } else {
      double gn = grad.norm();
      step = gn > 0 ? std::min(1.0, 0.1 * data_range(spec) / gn) : 1.0;
    }

    double gnorm2 = grad.squaredNorm();
    if (gnorm2 < 1e-28) {
      if (eps <= opts.eps_floor) break;
      stall++;
    }

    bool accepted = false;
    Vector cand;
    double fc = 0.0;
    for (int ls = 0; ls < 40; ++ls) {
      cand = project(u - step * grad);
      fc = smoothed.value(cand);
      if (fc <= fu - 1e-4 * step * gnorm2 || fc < fu) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }

    double prev_best = best_value;
    if (accepted) {
      prev_u = u;
      prev_grad = grad;
      have_prev = true;
      u = cand;
      fu = fc;
      grad = smoothed.gradient(u);
      double tv = true_energy(u);
      if (tv < best_value) {
        best_value = tv;
        best_u = u;
      }
    }
    result.history.push_back(best_value);

    double denom = std::max(1.0, std::abs(best_value));
    if ((prev_best - best_value) / denom < opts.tol)
      stall++;
    else
      stall = 0;
    if (stall >= 50 && eps <= opts.eps_floor) break;
    if (stall >= 200 && !accepted) {
      // force the anneal forward when progress is gone at this temperature
      if (eps <= opts.eps_floor) break;
      eps = std::max(eps * opts.eps_decay, opts.eps_floor);
      smoothed.eps = eps;
      fu = smoothed.value(u);
      grad = smoothed.gradient(u);
      have_prev = false;
      stall = 0;
    }
  }

  // Refinement: solve the smoothed problem at a fixed small temperature to
  // tight projected-gradient tolerance, so every start lands on the same
  // point. The tangent space fixes exterior values and keeps the interior
  // mu-mean at zero.
  double wsum = 0.0;
  for (int x : space.interior) wsum += space.mu(x) * space.mu(x);
  auto project_dir = [&](Vector g) {
    for (int x : space.exterior) g(x) = 0.0;
    double dot = 0.0;
    for (int x : space.interior) dot += g(x) * space.mu(x);
    double lambda = dot / wsum;
    for (int x : space.interior) g(x) -= lambda * space.mu(x);
    return g;
  };

  u = best_u;
  SmoothedEnergy refine{space, spec, 1e-9};
  double fr = refine.value(u);
  Vector rg = project_dir(refine.gradient(u));
  const double gtol = 1e-11 * std::max(1.0, data_range(spec));
  std::vector<int> free_set;
  for (int v = 0; v < n; ++v)
    if (space.role[v] != Role::Exterior) free_set.push_back(v);
  const int nf = static_cast<int>(free_set.size());
  double damping = 0.0;
  for (int it = 0; it < opts.polish_iters; ++it) {
    if (rg.norm() <= gtol) break;

    // KKT system over the free coordinates: Newton step constrained to
    // keep the interior mu-mean at zero.
    Eigen::MatrixXd H = refine.hessian(u);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nf + 1, nf + 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf + 1);
    for (int i = 0; i < nf; ++i) {
      for (int j = 0; j < nf; ++j) K(i, j) = H(free_set[i], free_set[j]);
      K(i, i) += damping;
      rhs(i) = -rg(free_set[i]);
      if (space.is_interior(free_set[i])) {
        K(i, nf) = space.mu(free_set[i]);
        K(nf, i) = space.mu(free_set[i]);
      }
    }
    Eigen::VectorXd sol = K.ldlt().solve(rhs);
    Vector dir = Vector::Zero(n);
    for (int i = 0; i < nf; ++i) dir(free_set[i]) = sol(i);
    if (!dir.allFinite() || rg.dot(dir) >= 0.0) {
      dir = -rg;  // Hessian unusable: fall back to steepest descent
      damping = damping == 0.0 ? 1e-8 : damping * 10.0;
    }

    bool accepted = false;
    double step = 1.0;
    Vector cand;
    double fc = 0.0;
    for (int ls = 0; ls < 60; ++ls) {
      cand = project(u + step * dir);
      fc = refine.value(cand);
      if (fc < fr) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (damping > 1e6) break;
      damping = damping == 0.0 ? 1e-8 : damping * 100.0;
      continue;
    }
    if (step == 1.0 && damping > 0.0) damping *= 0.1;
    if (damping < 1e-12) damping = 0.0;
    u = cand;
    fr = fc;
    rg = project_dir(refine.gradient(u));
    double tv = true_energy(u);
    if (tv < best_value) best_value = tv;
    result.history.push_back(best_value);
  }

  // Prefer the refined point (common across starts) when it matches the best
  // true value to solver accuracy; otherwise keep the best iterate seen.
  if (true_energy(u) <= best_value + 1e-9) best_u = u;

  result.u = ScalarField{FieldDomain::All, best_u};
  result.g = max_slope_gradient(space, result.u, EdgeScope::Closure);
  result.value = true_energy(best_u);
  result.iterations = static_cast<int>(result.history.size()) - 1;
  result.converged = iter < opts.max_iters;
  return result;
}

MinimizerResult minimize(const MetricMeasureSpace& space,
                         const ProblemSpec& spec, const SolverOptions& opts) {
  const int n = space.n();
  bool have = false;
  MinimizerResult best;
  for (int s = 0; s < std::max(1, opts.starts); ++s) {
    Vector start = Vector::Zero(n);
    if (!(s == 0 && opts.zero_start)) {
      std::mt19937_64 rng(opts.seed * 1000003ull + s);
      std::normal_distribution<double> normal(0.0, 0.5 * data_range(spec));
      for (int v = 0; v < n; ++v)
        if (space.role[v] != Role::Exterior) start(v) = normal(rng);
    }
    MinimizerResult run = minimize_from(space, spec, opts, start);
    if (!have || run.value < best.value - 1e-12 ||
        (std::abs(run.value - best.value) <= 1e-12 &&
         run.u.values.norm() < best.u.values.norm())) {
      best = std::move(run);
      have = true;
    }
  }
  return best;
}

OracleResult brute_force_oracle(const MetricMeasureSpace& space,
                                const ProblemSpec& spec,
                                const OracleGrid& grid) {
  const int ni = static_cast<int>(space.interior.size());
  const int nb = static_cast<int>(space.boundary.size());
  const int interior_dof = ni - 1;
  if (interior_dof > 4)
    throw Error(ErrorCode::TooManyVertices,
                "oracle limited to 4 interior degrees of freedom");
  if (!(grid.step > 0.0) || !(grid.hi >= grid.lo))
    throw Error(ErrorCode::BadParams, "bad oracle grid");

  const int dims = interior_dof + nb;
  const int k = static_cast<int>(std::floor((grid.hi - grid.lo) / grid.step +
                                            1e-12)) +
                1;
  double combos = std::pow(static_cast<double>(k), dims);
  if (combos > 5e8)
    throw Error(ErrorCode::TooManyVertices, "oracle grid too large");

  // mean-zero elimination through the last interior vertex
  const int elim = space.interior.back();
  double mu_elim = space.mu(elim);

  Vector u = Vector::Zero(space.n());
  std::vector<int> idx(dims, 0);
  OracleResult result;
  result.value = std::numeric_limits<double>::infinity();

  auto assign = [&]() {
    double weighted = 0.0;
    for (int d = 0; d < interior_dof; ++d) {
      int v = space.interior[d];
      u(v) = grid.lo + idx[d] * grid.step;
      weighted += u(v) * space.mu(v);
    }
    u(elim) = -weighted / mu_elim;
    for (int d = 0; d < nb; ++d)
      u(space.boundary[d]) = grid.lo + idx[interior_dof + d] * grid.step;
  };

  bool done = dims == 0;
  if (dims == 0) {
    assign();
    result.value = energy_J(space, ScalarField{FieldDomain::All, u}, spec);
    result.argmin = ScalarField{FieldDomain::All, u};
    return result;
  }
  while (!done) {
    assign();
    double value = energy_J(space, ScalarField{FieldDomain::All, u}, spec);
    if (value < result.value) {
      result.value = value;
      result.argmin = ScalarField{FieldDomain::All, u};
    }
    int d = 0;
    while (d < dims) {
      if (++idx[d] < k) break;
      idx[d] = 0;
      ++d;
    }
    done = d == dims;
  }
  return result;
}

UniquenessReport multi_start_analysis(const MetricMeasureSpace& space,
                                      const ProblemSpec& spec,
                                      const SolverOptions& opts) {
  if (opts.starts < 2)
    throw Error(ErrorCode::BadParams, "multi-start analysis needs >= 2 starts");
  UniquenessReport report;
  report.starts = opts.starts;

  for (int s = 0; s < opts.starts; ++s) {
    std::mt19937_64 rng(opts.seed * 777767ull + s + 1);
    std::normal_distribution<double> normal(0.0, 0.5 * data_range(spec));
    Vector start = Vector::Zero(space.n());
    for (int v = 0; v < space.n(); ++v)
      if (space.role[v] != Role::Exterior) start(v) = normal(rng);
    report.runs.push_back(minimize_from(space, spec, opts, start));
  }

  auto nongradient_part = [&](const ScalarField& u) {
    double value = 0.0;
    for (int v : space.interior)
      value -= reaction_value(u.values(v), spec.reaction) * space.mu(v);
    for (int b : space.boundary)
      value += u.values(b) * spec.f.values(b) * space.perimeter(b);
    return value;
  };

  report.best_value = report.runs.front().value;
  for (const auto& run : report.runs)
    report.best_value = std::min(report.best_value, run.value);

  for (size_t i = 0; i < report.runs.size(); ++i) {
    for (size_t j = i + 1; j < report.runs.size(); ++j) {
      const auto& a = report.runs[i];
      const auto& b = report.runs[j];
      report.max_value_gap =
          std::max(report.max_value_gap, std::abs(a.value - b.value));
      double ggap = 0.0;
      for (int v : space.interior)
        ggap = std::max(ggap,
                        std::abs(a.g.values(v) - b.g.values(v)));
      report.max_gradient_gap = std::max(report.max_gradient_gap, ggap);
      report.max_nongradient_gap =
          std::max(report.max_nongradient_gap,
                   std::abs(nongradient_part(a.u) - nongradient_part(b.u)));

      ScalarField mid{FieldDomain::All,
                      (a.u.values + b.u.values) / 2.0};
      mid = mean_zero_project(space, mid);
      double mid_value = energy_J(space, mid, spec);
      report.max_midpoint_excess = std::max(report.max_midpoint_excess,
                                            mid_value - report.best_value);
    }
  }
  return report;
}

ProbeReport convexity_suite(const MetricMeasureSpace& space,
                            const ProblemSpec& spec, int n,
                            std::uint64_t seed) {
  ProbeReport report;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  auto random_field = [&]() {
    Vector u = Vector::Zero(space.n());
    for (int v = 0; v < space.n(); ++v)
      if (space.role[v] != Role::Exterior) u(v) = normal(rng);
    return mean_zero_project(space, ScalarField{FieldDomain::All, u});
  };

  report.jensen_worst_margin = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    ScalarField u = random_field();
    ScalarField v = random_field();
    double t = unif(rng);
    ScalarField mid{FieldDomain::All,
                    t * u.values + (1.0 - t) * v.values};
    double lhs = energy_J(space, mid, spec);
    double rhs = t * energy_J(space, u, spec) +
                 (1.0 - t) * energy_J(space, v, spec);
    report.jensen_probes++;
    report.jensen_worst_margin =
        std::max(report.jensen_worst_margin, lhs - rhs);
    if (lhs > rhs + 1e-9) report.jensen_violations++;
  }

  // Clarkson uniform convexity of t -> t^p, probed at p >= 2.
  double p = std::max(spec.p, 2.0);
  report.uniform_worst_margin = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double a = 2.0 * unif(rng);
    double b = 2.0 * unif(rng);
    double delta = std::abs(a - b);
    double lhs = std::pow((a + b) / 2.0, p);
    double rhs = (std::pow(a, p) + std::pow(b, p)) / 2.0 -
                 std::pow(delta / 2.0, p);
    report.uniform_probes++;
    report.uniform_worst_margin =
        std::max(report.uniform_worst_margin, lhs - rhs);
    if (lhs > rhs + 1e-12) report.uniform_violations++;
  }
  return report;
}

}  // namespace plap
