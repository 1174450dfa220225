#pragma once

#include <complex>
#include <vector>

#include "spinvault/core/params.hpp"

namespace spinvault::pulse {

enum class Direction { OpticalToSpin, SpinToOptical };

/// Integration of the transfer stage
///   dP/dt = -(gamma_p + i d) P + i (Omega(t) / 2) S
///   dS/dt = -gamma_s S + i (Omega*(t) / 2) P
/// where Omega is the full Rabi frequency of the control pulse. Rates are
/// used unscaled (see the "optical-transfer" convention).
struct TransferOptions {
  double rtol = 1e-8;
  double atol = 1e-12;
};

struct TransferResult {
  double optical_population = 0.0;  // |P(T)|^2
  double spin_population = 0.0;     // |S(T)|^2

  /// Population in the target mode of the given direction.
  double target(Direction d) const noexcept {
    return d == Direction::OpticalToSpin ? spin_population
                                         : optical_population;
  }
};

struct TwoLevelTrajectory {
  double detuning = 0.0;
  std::vector<double> time;
  std::vector<std::complex<double>> optical;
  std::vector<std::complex<double>> spin;
};

TransferResult transfer_once(const PulseSpec& spec, double detuning,
                             double gamma_p, double gamma_s,
                             Direction direction = Direction::OpticalToSpin,
                             const TransferOptions& options = {});

/// Same integration, sampled at `samples` equally spaced times including
/// both ends.
TwoLevelTrajectory simulate_transfer(const PulseSpec& spec, double detuning,
                                     double gamma_p, double gamma_s,
                                     Direction direction, int samples,
                                     const TransferOptions& options = {});

/// Detuning j of n: midpoints of n equal bins across [-Gamma/2, Gamma/2].
double detuning_sample(double bandwidth, int n, int j) noexcept;

/// Mean transfer efficiency over uniformly sampled comb detunings, without
/// optical or spin decay. With `roundtrip` each detuning contributes the
/// square of its one-way efficiency (transfer in and back out).
double transfer_efficiency_numeric(const PulseSpec& spec, double bandwidth,
                                   int n_detunings, bool roundtrip,
                                   const TransferOptions& options = {});

/// Pulse of the given shape and duration whose peak Rabi frequency gives
/// Omega^2 T / Gamma = x. A square pulse keeps its resonant-pi area
/// Omega T = pi at the same duration, independent of x.
PulseSpec pulse_for_ratio(PulseKind kind, double x, double duration,
                          double bandwidth);

}  // namespace spinvault::pulse
