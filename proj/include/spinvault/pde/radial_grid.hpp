#pragma once

#include <complex>
#include <functional>

#include <Eigen/Core>

#include "spinvault/core/params.hpp"

/// Spherically symmetric method-of-lines discretization.
namespace spinvault::pde {

inline constexpr int kMinGridPoints = 32;

/// Profiles are stored in the transformed variable u = r f at the interior
/// nodes r_1 .. r_{n-1}. u(0) = 0 always; u(R) follows from the wall
/// condition of the species.
using Profile = Eigen::VectorXcd;

/// Uniform nodes r_i = i h, i = 0 .. n, with h = R / n and r_n = R.
struct RadialGrid {
  double radius = 0.0;
  int n_points = 0;
  double h = 0.0;
  bool transformed = true;

  /// Throws GridTooCoarse below kMinGridPoints and InvalidParameter for a
  /// non-positive radius.
  static RadialGrid make(double radius, int n_points);

  double node(int i) const noexcept { return i * h; }
  Eigen::Index unknowns() const noexcept { return n_points - 1; }
};

/// u(R): zero for a destructive wall; for a non-destructive wall the
/// condition df/dr = 0 becomes du/dr = u / R, closed with the one-sided
/// second-order stencil (3 u_n - 4 u_{n-1} + u_{n-2}) / 2h = u_n / R.
std::complex<double> boundary_value(const Profile& u, const RadialGrid& grid,
                                    WallBoundary wall);

/// r * laplacian(f) = u'' by second-order central differences.
void laplacian_radial(const Profile& u, const RadialGrid& grid,
                      WallBoundary wall, Profile& out);
Profile laplacian_radial(const Profile& u, const RadialGrid& grid,
                         WallBoundary wall);

/// u_i = r_i f(r_i).
Profile sample_profile(const RadialGrid& grid,
                       const std::function<std::complex<double>(double)>& f);

/// Profile of the uniform mode f(r) = amplitude.
Profile uniform_profile(const RadialGrid& grid,
                        std::complex<double> amplitude = 1.0);

/// <a|b> = 4 pi int conj(f_a) f_b r^2 dr by the trapezoid rule over all
/// nodes, wall values included.
std::complex<double> inner_product(const Profile& a, WallBoundary wall_a,
                                   const Profile& b, WallBoundary wall_b,
                                   const RadialGrid& grid);

/// int |f|^2 dV.
double population(const Profile& u, WallBoundary wall, const RadialGrid& grid);

/// Exact int |amplitude|^2 dV = (4 pi / 3) R^3 |amplitude|^2 of the uniform
/// mode. Used as the reference norm: a uniform profile meets a destructive
/// wall with a jump, and normalizing by the discrete sum would carry that
/// jump's O(h) error into every ratio.
double uniform_mode_norm(const RadialGrid& grid,
                         std::complex<double> amplitude = 1.0);

}  // namespace spinvault::pde
