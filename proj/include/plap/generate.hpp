#pragma once

#include <string>

#include "plap/space.hpp"

namespace plap {

/// n x n interior lattice with spacing h, boundary ring one step outside
/// (corners excluded unless with_corners), mu = h^2, perimeter = h.
/// f profiles: "none", "dipole" (+a on the left edge, -a on the right).
SpaceSpec generate_grid(int n, double h, const std::string& f_profile = "dipole",
                        double amplitude = 1.0, bool with_corners = false);

/// Path of n interior vertices with spacing h and a boundary vertex at
/// each end; mu = h, perimeter = 1, dipole f = (+a, -a).
SpaceSpec generate_path(int n, double h,
                        const std::string& f_profile = "dipole",
                        double amplitude = 1.0);

/// Concentric rings between r_in and r_out; innermost and outermost rings
/// are boundary, the rest interior. Cell measures approximate annular
/// areas. Dipole f: +a outer, balanced -a inner.
SpaceSpec generate_annulus(int rings, int per_ring, double r_in, double r_out,
                           const std::string& f_profile = "dipole",
                           double amplitude = 1.0);

}  // namespace plap
