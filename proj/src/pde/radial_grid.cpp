#include "spinvault/pde/radial_grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spinvault/core/error.hpp"

namespace spinvault::pde {

RadialGrid RadialGrid::make(double radius, int n_points) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw Error(Errc::InvalidParameter, "cell radius must be positive");
  if (n_points < kMinGridPoints)
    throw Error(Errc::GridTooCoarse,
                "radial grid needs at least " + std::to_string(kMinGridPoints) +
                    " points, got " + std::to_string(n_points));
  return {radius, n_points, radius / n_points, true};
}

std::complex<double> boundary_value(const Profile& u, const RadialGrid& grid,
                                    WallBoundary wall) {
  if (wall == WallBoundary::Destructive) return 0.0;
  const Eigen::Index m = u.size();
  const auto u1 = u[m - 1];
  const auto u2 = m >= 2 ? u[m - 2] : std::complex<double>{};
  return (4.0 * u1 - u2) / (3.0 - 2.0 * grid.h / grid.radius);
}

void laplacian_radial(const Profile& u, const RadialGrid& grid,
                      WallBoundary wall, Profile& out) {
  const Eigen::Index m = grid.unknowns();
  if (u.size() != m)
    throw Error(Errc::InvalidParameter, "profile size does not match grid");
  out.resize(m);
  const double inv_h2 = 1.0 / (grid.h * grid.h);
  const auto wall_value = boundary_value(u, grid, wall);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto left = i == 0 ? std::complex<double>{} : u[i - 1];
    const auto right = i == m - 1 ? wall_value : u[i + 1];
    out[i] = (left - 2.0 * u[i] + right) * inv_h2;
  }
}

Profile laplacian_radial(const Profile& u, const RadialGrid& grid,
                         WallBoundary wall) {
  Profile out;
  laplacian_radial(u, grid, wall, out);
  return out;
}

Profile sample_profile(const RadialGrid& grid,
                       const std::function<std::complex<double>(double)>& f) {
  Profile u(grid.unknowns());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double r = grid.node(static_cast<int>(i) + 1);
    u[i] = r * f(r);
  }
  return u;
}

Profile uniform_profile(const RadialGrid& grid, std::complex<double> amplitude) {
  return sample_profile(grid, [amplitude](double) { return amplitude; });
}

std::complex<double> inner_product(const Profile& a, WallBoundary wall_a,
                                   const Profile& b, WallBoundary wall_b,
                                   const RadialGrid& grid) {
  if (a.size() != grid.unknowns() || b.size() != grid.unknowns())
    throw Error(Errc::InvalidParameter, "profile size does not match grid");
  std::complex<double> acc = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  acc += 0.5 * std::conj(boundary_value(a, grid, wall_a)) *
         boundary_value(b, grid, wall_b);
  return 4.0 * std::numbers::pi * grid.h * acc;
}

double population(const Profile& u, WallBoundary wall, const RadialGrid& grid) {
  return inner_product(u, wall, u, wall, grid).real();
}

double uniform_mode_norm(const RadialGrid& grid, std::complex<double> amplitude) {
  return 4.0 / 3.0 * std::numbers::pi * std::pow(grid.radius, 3) *
         std::norm(amplitude);
}

}  // namespace spinvault::pde
