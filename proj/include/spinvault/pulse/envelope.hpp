#pragma once

#include <complex>

#include "spinvault/core/params.hpp"

namespace spinvault::pulse {

/// Resonant square pi-pulse of the given duration (peak_rabi * T = pi).
PulseSpec square_pi(double duration);

/// Chirped hyperbolic secant with the default window (beta = 8 / T) and
/// the given full sweep.
PulseSpec chirped_sech(double duration, double peak_rabi,
                       double chirp_bandwidth);

inline constexpr double kDefaultHshEdgeFraction = 0.04;

/// Hyperbolic-square-hyperbolic pulse: sech rise, linearly chirped plateau
/// sweeping `chirp_bandwidth`, sech fall. The rise and fall carry a tanh
/// chirp continuing the plateau sweep rate.
PulseSpec hsh(double duration, double peak_rabi, double chirp_bandwidth,
              double edge_fraction = kDefaultHshEdgeFraction);

struct EnvelopeSample {
  double amplitude = 0.0;        // |Omega(t)|
  double phase = 0.0;            // accumulated chirp phase
  double instantaneous_detuning = 0.0;  // d(phase)/dt

  std::complex<double> rabi() const { return std::polar(amplitude, phase); }
};

/// Full envelope information at t in [0, T]. Throws OutOfWindow otherwise.
EnvelopeSample sample(const PulseSpec& spec, double t);

/// Complex Rabi frequency Omega(t) = |Omega(t)| exp(i phase(t)).
inline std::complex<double> envelope(const PulseSpec& spec, double t) {
  return sample(spec, t).rabi();
}

}  // namespace spinvault::pulse
