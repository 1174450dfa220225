#include "spinvault/pde/spin_solver.hpp"

#include <cmath>

#include "spinvault/core/error.hpp"

namespace spinvault::pde {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

void check_stage(const SpinStage& stage, const SpinState& state,
                 const RadialGrid& grid) {
  if (!(stage.duration >= 0.0) || !std::isfinite(stage.duration))
    throw Error(Errc::InvalidParameter, "stage duration must be finite and >= 0");
  if (state.S.size() != grid.unknowns() || state.K.size() != grid.unknowns())
    throw Error(Errc::InvalidParameter, "spin state does not match grid");
  if (!state.S.allFinite() || !state.K.allFinite())
    throw Error(Errc::InvalidParameter, "spin state has non-finite entries");
}

}  // namespace

SpinState SpinState::uniform_alkali(const RadialGrid& grid,
                                    std::complex<double> amplitude) {
  return {uniform_profile(grid, amplitude),
          Profile::Zero(grid.unknowns()), 0.0};
}

PopulationSample populations(const SpinState& state, const CellGeometry& cell,
                             const RadialGrid& grid) {
  return {state.time, population(state.S, cell.boundary_alkali, grid),
          population(state.K, cell.boundary_noble, grid)};
}

EvolveResult evolve(const SpinState& initial, const EnsembleParams& ensemble,
                    const CellGeometry& cell, const RadialGrid& grid,
                    const SpinStage& stage, const EvolveOptions& options) {
  check_stage(stage, initial, grid);
  const Eigen::Index m = grid.unknowns();

  const std::complex<double> decay_s = ensemble.gamma_s + kI * stage.delta_s;
  const std::complex<double> decay_k = ensemble.gamma_k + kI * stage.delta_k;
  const std::complex<double> iJ = kI * ensemble.J;
  const double Da = ensemble.D_a, Db = ensemble.D_b;
  const WallBoundary wall_a = cell.boundary_alkali;
  const WallBoundary wall_b = cell.boundary_noble;

  Profile lap_s(m), lap_k(m), s_tmp(m), k_tmp(m);
  auto rhs = [&](double, const Eigen::VectorXcd& y, Eigen::VectorXcd& dy) {
    dy.resize(2 * m);
    s_tmp = y.head(m);
    k_tmp = y.tail(m);
    laplacian_radial(s_tmp, grid, wall_a, lap_s);
    laplacian_radial(k_tmp, grid, wall_b, lap_k);
    dy.head(m) = -decay_s * s_tmp + Da * lap_s - iJ * k_tmp;
    dy.tail(m) = -decay_k * k_tmp + Db * lap_k - iJ * s_tmp;
  };

  Eigen::VectorXcd y(2 * m);
  y.head(m) = initial.S;
  y.tail(m) = initial.K;

  // atol is taken relative to the initial peak amplitude, so the step
  // sequence and hence the result are exactly linear in the initial state.
  ode::Tolerances tol = options.tolerances;
  const double peak = y.cwiseAbs().maxCoeff();
  if (peak > 0.0) tol.atol *= peak;
  ode::StepControl control;
  control.min_step = options.min_step;
  ode::DormandPrince<Eigen::VectorXcd> solver(tol, control);

  EvolveResult result;
  const double t0 = initial.time;
  const double t1 = t0 + stage.duration;
  auto snapshot = [&](double t) {
    SpinState s{y.head(m), y.tail(m), t};
    result.series.push_back(populations(s, cell, grid));
  };

  const int samples = options.samples;
  if (samples >= 2) {
    snapshot(t0);
    for (int k = 1; k < samples; ++k) {
      const double ta = t0 + stage.duration * (k - 1) / (samples - 1);
      const double tb = k == samples - 1
                            ? t1
                            : t0 + stage.duration * k / (samples - 1);
      solver.integrate(rhs, y, ta, tb);
      solver.set_initial_step(solver.suggested_step());
      snapshot(tb);
    }
  } else {
    solver.integrate(rhs, y, t0, t1);
    if (samples == 1) snapshot(t1);
  }

  result.state = {y.head(m), y.tail(m), t1};
  result.stats = solver.stats();
  return result;
}

}  // namespace spinvault::pde
