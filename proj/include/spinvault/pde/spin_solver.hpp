#pragma once

#include <vector>

#include "spinvault/core/params.hpp"
#include "spinvault/ode/dormand_prince.hpp"
#include "spinvault/pde/radial_grid.hpp"

namespace spinvault::pde {

/// Alkali (S) and noble-gas (K) collective spin profiles in u = r f form.
struct SpinState {
  Profile S;
  Profile K;
  double time = 0.0;

  static SpinState uniform_alkali(const RadialGrid& grid,
                                  std::complex<double> amplitude = 1.0);
};

/// One interval of spin dynamics with fixed detunings.
struct SpinStage {
  double duration = 0.0;
  double delta_s = 0.0;
  double delta_k = 0.0;
};

struct EvolveOptions {
  // atol applies relative to the largest initial amplitude |u_i|.
  ode::Tolerances tolerances{1e-6, 1e-10};
  double min_step = 1e-15;  // StiffnessBailout below this (s)
  int samples = 0;          // population samples incl. both ends; 0 = none
};

struct PopulationSample {
  double t = 0.0;
  double alkali = 0.0;  // int |S|^2 dV
  double noble = 0.0;   // int |K|^2 dV
};

struct EvolveResult {
  SpinState state;
  std::vector<PopulationSample> series;
  ode::Stats stats;
};

/// Integrates
///   dS/dt = -(gamma_s + i delta_s - D_a lap) S - i J K
///   dK/dt = -(gamma_k + i delta_k - D_b lap) K - i J S
/// over the stage by the method of lines, walls taken from `cell`.
EvolveResult evolve(const SpinState& initial, const EnsembleParams& ensemble,
                    const CellGeometry& cell, const RadialGrid& grid,
                    const SpinStage& stage, const EvolveOptions& options = {});

PopulationSample populations(const SpinState& state, const CellGeometry& cell,
                             const RadialGrid& grid);

}  // namespace spinvault::pde
