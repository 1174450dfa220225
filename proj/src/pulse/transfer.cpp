#include "spinvault/pulse/transfer.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Core>

#include "spinvault/core/error.hpp"
#include "spinvault/core/parallel.hpp"
#include "spinvault/ode/dormand_prince.hpp"
#include "spinvault/pulse/envelope.hpp"

namespace spinvault::pulse {

namespace {

using State = Eigen::Vector2cd;
constexpr std::complex<double> I{0.0, 1.0};

// Time is rescaled to tau = t / T so every pulse integrates over [0, 1].
struct TransferRhs {
  const PulseSpec& spec;
  double detuning;
  double gamma_p;
  double gamma_s;

  void operator()(double tau, const State& y, State& dy) const {
    const double T = spec.duration;
    const double t = std::min(tau * T, T);
    const std::complex<double> half_rabi = 0.5 * envelope(spec, t);
    dy[0] = T * (-(gamma_p + I * detuning) * y[0] + I * half_rabi * y[1]);
    dy[1] = T * (-gamma_s * y[1] + I * std::conj(half_rabi) * y[0]);
  }
};

State initial_state(Direction direction) {
  return direction == Direction::OpticalToSpin ? State(1.0, 0.0)
                                               : State(0.0, 1.0);
}

void check_spec(const PulseSpec& spec) {
  if (!(spec.duration > 0.0) || !(spec.peak_rabi >= 0.0) ||
      !(spec.chirp_bandwidth >= 0.0))
    throw Error(Errc::InvalidParameter,
                "pulse needs T > 0, Omega >= 0, chirp >= 0");
  if (spec.kind == PulseKind::HSH &&
      !(spec.hsh_edge_fraction > 0.0 && spec.hsh_edge_fraction < 0.5))
    throw Error(Errc::InvalidParameter, "HSH edge fraction outside (0, 0.5)");
}

}  // namespace

TransferResult transfer_once(const PulseSpec& spec, double detuning,
                             double gamma_p, double gamma_s,
                             Direction direction,
                             const TransferOptions& options) {
  check_spec(spec);
  State y = initial_state(direction);
  ode::DormandPrince<State> solver({options.rtol, options.atol});
  solver.integrate(TransferRhs{spec, detuning, gamma_p, gamma_s}, y, 0.0, 1.0);
  return {std::norm(y[0]), std::norm(y[1])};
}

TwoLevelTrajectory simulate_transfer(const PulseSpec& spec, double detuning,
                                     double gamma_p, double gamma_s,
                                     Direction direction, int samples,
                                     const TransferOptions& options) {
  check_spec(spec);
  if (samples < 2)
    throw Error(Errc::InvalidParameter, "trajectory needs >= 2 samples");
  TwoLevelTrajectory out;
  out.detuning = detuning;
  State y = initial_state(direction);
  auto record = [&](double tau) {
    out.time.push_back(tau * spec.duration);
    out.optical.push_back(y[0]);
    out.spin.push_back(y[1]);
  };
  record(0.0);
  ode::DormandPrince<State> solver({options.rtol, options.atol});
  const TransferRhs rhs{spec, detuning, gamma_p, gamma_s};
  for (int k = 1; k < samples; ++k) {
    const double a = static_cast<double>(k - 1) / (samples - 1);
    const double b = static_cast<double>(k) / (samples - 1);
    if (k > 1) solver.set_initial_step(solver.suggested_step());
    solver.integrate(rhs, y, a, b);
    record(b);
  }
  return out;
}

double detuning_sample(double bandwidth, int n, int j) noexcept {
  return bandwidth * ((j + 0.5) / n - 0.5);
}

double transfer_efficiency_numeric(const PulseSpec& spec, double bandwidth,
                                   int n_detunings, bool roundtrip,
                                   const TransferOptions& options) {
  if (n_detunings < 1)
    throw Error(Errc::InvalidParameter, "need at least one detuning");
  if (!(bandwidth > 0.0))
    throw Error(Errc::InvalidParameter, "bandwidth must be > 0");
  std::vector<double> per(static_cast<std::size_t>(n_detunings));
  parallel_for(per.size(), [&](std::size_t j) {
    const double d = detuning_sample(bandwidth, n_detunings, static_cast<int>(j));
    const double eta = transfer_once(spec, d, 0.0, 0.0,
                                     Direction::OpticalToSpin, options)
                           .spin_population;
    per[j] = roundtrip ? eta * eta : eta;
  });
  double sum = 0.0;
  for (double v : per) sum += v;
  return sum / n_detunings;
}

PulseSpec pulse_for_ratio(PulseKind kind, double x, double duration,
                          double bandwidth) {
  if (!(x >= 0.0) || !(duration > 0.0) || !(bandwidth > 0.0))
    throw Error(Errc::InvalidParameter,
                "pulse_for_ratio needs x >= 0, T > 0, Gamma > 0");
  const double rabi = std::sqrt(x * bandwidth / duration);
  switch (kind) {
    case PulseKind::SquarePi:
      return square_pi(duration);
    case PulseKind::ChirpedSech:
      return chirped_sech(duration, rabi, bandwidth);
    case PulseKind::HSH:
      return hsh(duration, rabi, bandwidth);
  }
  throw Error(Errc::InvalidParameter, "unknown pulse kind");
}

}  // namespace spinvault::pulse
