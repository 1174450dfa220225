#include "spinvault/pulse/envelope.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spinvault/core/error.hpp"

namespace spinvault::pulse {

namespace {

// Edge steepness: the sech rise starts at sech(4) ~ 0.037 of the peak.
constexpr double kEdgeSpan = 4.0;

double sech(double x) { return 1.0 / std::cosh(x); }

// log(cosh(x)) without overflow.
double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

}  // namespace

PulseSpec square_pi(double duration) {
  PulseSpec s;
  s.kind = PulseKind::SquarePi;
  s.duration = duration;
  s.peak_rabi = std::numbers::pi / duration;
  s.hsh_edge_fraction = kDefaultHshEdgeFraction;
  return s;
}

PulseSpec chirped_sech(double duration, double peak_rabi,
                       double chirp_bandwidth) {
  PulseSpec s;
  s.kind = PulseKind::ChirpedSech;
  s.duration = duration;
  s.peak_rabi = peak_rabi;
  s.chirp_bandwidth = chirp_bandwidth;
  s.hsh_edge_fraction = kDefaultHshEdgeFraction;
  return s;
}

PulseSpec hsh(double duration, double peak_rabi, double chirp_bandwidth,
              double edge_fraction) {
  PulseSpec s;
  s.kind = PulseKind::HSH;
  s.duration = duration;
  s.peak_rabi = peak_rabi;
  s.chirp_bandwidth = chirp_bandwidth;
  s.hsh_edge_fraction = edge_fraction;
  return s;
}

EnvelopeSample sample(const PulseSpec& spec, double t) {
  const double T = spec.duration;
  if (!(t >= 0.0 && t <= T))
    throw Error(Errc::OutOfWindow, "t = " + std::to_string(t) +
                                       " outside pulse window [0, " +
                                       std::to_string(T) + "]");
  const double omega = spec.peak_rabi;
  const double sweep = spec.chirp_bandwidth;

  switch (spec.kind) {
    case PulseKind::SquarePi:
      return {omega, 0.0, 0.0};

    case PulseKind::ChirpedSech: {
      const double beta = spec.effective_sech_beta();
      const double x = beta * (t - 0.5 * T);
      const double mu_beta = 0.5 * sweep;
      return {omega * sech(x), mu_beta / beta * log_cosh(x),
              mu_beta * std::tanh(x)};
    }

    case PulseKind::HSH: {
      const double edge = spec.hsh_edge_fraction * T;
      const double plateau = T - 2.0 * edge;
      const double rate = sweep / plateau;
      const double beta = kEdgeSpan / edge;
      const double tail = rate / (beta * beta);
      if (t < edge) {
        const double x = beta * (t - edge);
        return {omega * sech(x), -0.5 * sweep * (t - edge) + tail * log_cosh(x),
                -0.5 * sweep + rate / beta * std::tanh(x)};
      }
      if (t <= edge + plateau) {
        const double s = t - edge;
        return {omega, -0.5 * sweep * s + 0.5 * rate * s * s,
                -0.5 * sweep + rate * s};
      }
      // Plateau phase returns to zero at its end since rate * plateau = sweep.
      const double s = t - edge - plateau;
      const double x = beta * s;
      return {omega * sech(x), 0.5 * sweep * s + tail * log_cosh(x),
              0.5 * sweep + rate / beta * std::tanh(x)};
    }
  }
  throw Error(Errc::InvalidParameter, "unknown pulse kind");
}

}  // namespace spinvault::pulse
