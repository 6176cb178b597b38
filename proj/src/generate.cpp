#include "plap/generate.hpp"

#include <cmath>
#include <map>

namespace plap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int add_vertex(SpaceSpec& spec, const std::string& id, double mu, Role role,
               double perimeter = kNaN, double f = 0.0) {
  spec.ids.push_back(id);
  spec.mu.push_back(mu);
  spec.roles.push_back(role);
  spec.perimeter.push_back(perimeter);
  spec.f.push_back(f);
  return static_cast<int>(spec.ids.size()) - 1;
}

}  // namespace

SpaceSpec generate_grid(int n, double h, const std::string& f_profile,
                        double amplitude, bool with_corners) {
  if (n < 1 || !(h > 0.0))
    throw Error(ErrorCode::BadParams, "grid needs n >= 1 and h > 0");
  SpaceSpec spec;
  std::map<std::pair<int, int>, int> index;

  auto key = [](int i, int j) { return std::make_pair(i, j); };
  auto id_of = [](int i, int j) {
    return "v" + std::to_string(i) + "_" + std::to_string(j);
  };

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      index[key(i, j)] =
          add_vertex(spec, id_of(i, j), h * h, Role::Interior);

  auto boundary_f = [&](int side) {
    if (f_profile == "none") return 0.0;
    if (f_profile == "dipole")
      return side == 0 ? amplitude : (side == 1 ? -amplitude : 0.0);
    throw Error(ErrorCode::BadParams, "unknown f profile: " + f_profile);
  };

  // boundary ring: side 0 = left, 1 = right, 2 = bottom, 3 = top
  for (int j = 0; j < n; ++j) {
    index[key(-1, j)] = add_vertex(spec, id_of(-1, j), h * h, Role::Boundary,
                                   h, boundary_f(0));
    index[key(n, j)] = add_vertex(spec, id_of(n, j), h * h, Role::Boundary, h,
                                  boundary_f(1));
  }
  for (int i = 0; i < n; ++i) {
    index[key(i, -1)] = add_vertex(spec, id_of(i, -1), h * h, Role::Boundary,
                                   h, boundary_f(2));
    index[key(i, n)] = add_vertex(spec, id_of(i, n), h * h, Role::Boundary, h,
                                  boundary_f(3));
  }
  if (with_corners) {
    for (int ci : {-1, n})
      for (int cj : {-1, n})
        index[key(ci, cj)] = add_vertex(spec, id_of(ci, cj), h * h,
                                        Role::Boundary, h, 0.0);
  }

  auto connect = [&](int ai, int aj, int bi, int bj, double len) {
    auto a = index.find(key(ai, aj));
    auto b = index.find(key(bi, bj));
    if (a == index.end() || b == index.end()) return;
    spec.edges.push_back({a->second, b->second, len});
  };

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      connect(i, j, i + 1, j, h);
      connect(i, j, i, j + 1, h);
      connect(i, j, i - 1, j, h);  // reaches the left boundary at i=0
      connect(i, j, i, j - 1, h);
    }
  }
  // dedupe interior-interior edges added twice
  std::map<std::pair<int, int>, double> unique_edges;
  for (const auto& e : spec.edges) {
    auto k = std::minmax(e.a, e.b);
    unique_edges[{k.first, k.second}] = e.length;
  }
  spec.edges.clear();
  for (const auto& [k, len] : unique_edges)
    spec.edges.push_back({k.first, k.second, len});

  if (with_corners) {
    double diag = h * std::sqrt(2.0);
    connect(-1, -1, 0, 0, diag);
    connect(-1, n, 0, n - 1, diag);
    connect(n, -1, n - 1, 0, diag);
    connect(n, n, n - 1, n - 1, diag);
  }
  return spec;
}

SpaceSpec generate_path(int n, double h, const std::string& f_profile,
                        double amplitude) {
  if (n < 1 || !(h > 0.0))
    throw Error(ErrorCode::BadParams, "path needs n >= 1 and h > 0");
  SpaceSpec spec;
  double f = f_profile == "dipole" ? amplitude : 0.0;
  add_vertex(spec, "b0", h, Role::Boundary, 1.0, f);
  for (int i = 0; i < n; ++i)
    add_vertex(spec, "v" + std::to_string(i), h, Role::Interior);
  add_vertex(spec, "b1", h, Role::Boundary, 1.0, -f);
  for (int i = 0; i + 1 < n + 2; ++i) spec.edges.push_back({i, i + 1, h});
  return spec;
}

SpaceSpec generate_annulus(int rings, int per_ring, double r_in, double r_out,
                           const std::string& f_profile, double amplitude) {
  if (rings < 3 || per_ring < 3 || !(r_in > 0.0) || !(r_out > r_in))
    throw Error(ErrorCode::BadParams,
                "annulus needs rings >= 3, per_ring >= 3, 0 < r_in < r_out");
  SpaceSpec spec;
  double dr = (r_out - r_in) / (rings - 1);
  double famp = f_profile == "dipole" ? amplitude : 0.0;

  std::vector<std::vector<int>> ring_idx(rings);
  for (int r = 0; r < rings; ++r) {
    double radius = r_in + r * dr;
    double arc = 2.0 * M_PI * radius / per_ring;
    bool is_boundary = r == 0 || r == rings - 1;
    for (int k = 0; k < per_ring; ++k) {
      std::string id = "r" + std::to_string(r) + "_" + std::to_string(k);
      double mu = arc * dr;
      if (is_boundary)
        ring_idx[r].push_back(add_vertex(spec, id, mu, Role::Boundary, arc,
                                         r == 0 ? 0.0 : famp));
      else
        ring_idx[r].push_back(add_vertex(spec, id, mu, Role::Interior));
    }
  }
  // balance: inner ring carries -a * (outer perimeter / inner perimeter)
  if (famp != 0.0) {
    double outer_P = 0.0, inner_P = 0.0;
    for (int k = 0; k < per_ring; ++k) {
      outer_P += 2.0 * M_PI * r_out / per_ring;
      inner_P += 2.0 * M_PI * r_in / per_ring;
    }
    double inner_f = -famp * outer_P / inner_P;
    for (int k = 0; k < per_ring; ++k) spec.f[ring_idx[0][k]] = inner_f;
  }

  for (int r = 0; r < rings; ++r) {
    double radius = r_in + r * dr;
    double arc = 2.0 * M_PI * radius / per_ring;
    bool tangential = r != 0 && r != rings - 1;  // no boundary-boundary edges
    for (int k = 0; k < per_ring; ++k) {
      if (tangential)
        spec.edges.push_back(
            {ring_idx[r][k], ring_idx[r][(k + 1) % per_ring], arc});
      if (r + 1 < rings)
        spec.edges.push_back({ring_idx[r][k], ring_idx[r + 1][k], dr});
    }
  }
  return spec;
}

}  // namespace plap
