#include <doctest.h>

#include <cmath>
#include <complex>

#include "spinvault/afc/analytics.hpp"
#include "spinvault/core/error.hpp"
#include "spinvault/pulse/envelope.hpp"
#include "spinvault/pulse/transfer.hpp"

using namespace spinvault;
using namespace spinvault::pulse;
using cd = std::complex<double>;

namespace {

constexpr double kGamma = 27e9;

// Fixed-step RK4 reference with its own chirped-sech envelope.
struct Rk4Result {
  double optical;
  double spin;
};

Rk4Result rk4_sech(double T, double W, double chirp, double detuning, int steps) {
  const double beta = 8.0 / T;
  auto rabi = [&](double t) {
    const double x = beta * (t - T / 2);
    const double phase = chirp / (2 * beta) * std::log(std::cosh(x));
    return W / std::cosh(x) * std::exp(cd(0, phase));
  };
  auto f = [&](double t, cd P, cd S, cd& dP, cd& dS) {
    const cd h = 0.5 * rabi(t);
    dP = -cd(0, detuning) * P + cd(0, 1) * h * S;
    dS = cd(0, 1) * std::conj(h) * P;
  };
  cd P = 1.0, S = 0.0;
  const double dt = T / steps;
  for (int i = 0; i < steps; ++i) {
    const double t = i * dt;
    cd p1, s1, p2, s2, p3, s3, p4, s4;
    f(t, P, S, p1, s1);
    f(t + dt / 2, P + dt / 2 * p1, S + dt / 2 * s1, p2, s2);
    f(t + dt / 2, P + dt / 2 * p2, S + dt / 2 * s2, p3, s3);
    f(t + dt, P + dt * p3, S + dt * s3, p4, s4);
    P += dt / 6 * (p1 + 2.0 * p2 + 2.0 * p3 + p4);
    S += dt / 6 * (s1 + 2.0 * s2 + 2.0 * s3 + s4);
  }
  return {std::norm(P), std::norm(S)};
}

}  // namespace

TEST_CASE("envelope shapes") {
  const double T = 1e-6;
  const auto sq = square_pi(T);
  CHECK(sq.peak_rabi * T == doctest::Approx(M_PI));
  for (double t : {0.0, 0.3 * T, T}) CHECK(std::abs(envelope(sq, t)) == doctest::Approx(sq.peak_rabi));

  const auto se = chirped_sech(T, 5e7, 1e9);
  CHECK(std::abs(envelope(se, T / 2)) == doctest::Approx(5e7));
  CHECK(std::abs(envelope(se, 0.0)) == doctest::Approx(5e7 / std::cosh(4.0)));
  CHECK(sample(se, T / 2).instantaneous_detuning == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(sample(se, T).instantaneous_detuning == doctest::Approx(0.5e9 * std::tanh(4.0)));

  const auto h = hsh(T, 5e7, 1e9, 0.25);
  for (double t = 0.25 * T; t <= 0.75 * T; t += 0.05 * T)
    CHECK(std::abs(envelope(h, t)) == doctest::Approx(5e7));
  CHECK(std::abs(envelope(h, 0.0)) < 5e7);
  CHECK(sample(h, 0.25 * T).instantaneous_detuning == doctest::Approx(-0.5e9));
  CHECK(sample(h, 0.75 * T).instantaneous_detuning == doctest::Approx(0.5e9));
  CHECK(hsh(T, 1.0, 1.0).hsh_edge_fraction == kDefaultHshEdgeFraction);

  CHECK_THROWS_AS(sample(sq, -1e-9), Error);
  CHECK_THROWS_AS(sample(sq, 1.1 * T), Error);
}

TEST_CASE("envelope phase derivative is the instantaneous detuning") {
  const double T = 1e-6;
  for (const auto& spec : {chirped_sech(T, 5e7, 1e9), hsh(T, 5e7, 1e9, 0.1)}) {
    for (double t : {0.05 * T, 0.3 * T, 0.5 * T, 0.93 * T}) {
      const double dt = 1e-6 * T;
      const double numeric =
          (sample(spec, t + dt).phase - sample(spec, t - dt).phase) / (2 * dt);
      CHECK(std::abs(numeric - sample(spec, t).instantaneous_detuning) <
            1e-5 * spec.chirp_bandwidth);
    }
  }
}

TEST_CASE("resonant square pi pulse inverts") {
  const auto r = transfer_once(square_pi(1e-7), 0.0, 0.0, 0.0);
  CHECK(r.spin_population == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.optical_population < 1e-6);
}

TEST_CASE("zero Rabi frequency is free decay") {
  auto spec = square_pi(1e-7);
  spec.peak_rabi = 0.0;
  const double gp = 3e6;
  const auto r = transfer_once(spec, 1e8, gp, 0.0);
  CHECK(r.spin_population == 0.0);
  CHECK(r.optical_population == doctest::Approx(std::exp(-2 * gp * 1e-7)).epsilon(1e-7));
}

TEST_CASE("norm is conserved without decay") {
  const double T = 400.0 / kGamma;
  for (auto kind : {PulseKind::SquarePi, PulseKind::ChirpedSech, PulseKind::HSH}) {
    const auto spec = pulse_for_ratio(kind, 3.0, T, kGamma);
    const auto tr = simulate_transfer(spec, 0.13 * kGamma, 0.0, 0.0,
                                      Direction::OpticalToSpin, 50);
    for (std::size_t i = 0; i < tr.time.size(); ++i)
      CHECK(std::norm(tr.optical[i]) + std::norm(tr.spin[i]) ==
            doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("chirped sech agrees with a dense fixed-step reference") {
  const double T = 400.0 / kGamma;
  const auto spec = pulse_for_ratio(PulseKind::ChirpedSech, 8.0, T, kGamma);
  const double d = kGamma / 4;
  const auto r = transfer_once(spec, d, 0.0, 0.0);
  const auto ref = rk4_sech(T, spec.peak_rabi, kGamma, d, 200000);
  CHECK(r.spin_population == doctest::Approx(ref.spin).epsilon(1e-6));
  CHECK(r.optical_population == doctest::Approx(ref.optical).epsilon(1e-5));
  // Landau-Zener at the crossing: exponent (pi/2) Omega^2 / rate = pi x / 8.
  const double lz = 1.0 - std::exp(-M_PI * 8.0 / 8.0);
  CHECK(std::abs(r.spin_population - lz) < 0.03);
}

TEST_CASE("unchirped transfer is symmetric in detuning") {
  const auto spec = square_pi(100.0 / kGamma);
  for (double d : {0.01, 0.1, 0.37}) {
    const auto a = transfer_once(spec, d * kGamma, 0.0, 0.0);
    const auto b = transfer_once(spec, -d * kGamma, 0.0, 0.0);
    CHECK(std::abs(a.spin_population - b.spin_population) < 1e-8);
  }
}

TEST_CASE("reverse transfer equals forward for time-symmetric pulses") {
  const double T = 400.0 / kGamma;
  for (auto kind : {PulseKind::SquarePi, PulseKind::ChirpedSech, PulseKind::HSH}) {
    const auto spec = pulse_for_ratio(kind, 4.0, T, kGamma);
    const double g = 1e6;
    const auto fwd = transfer_once(spec, 0.0, g, g, Direction::OpticalToSpin);
    const auto rev = transfer_once(spec, 0.0, g, g, Direction::SpinToOptical);
    CHECK(std::abs(fwd.target(Direction::OpticalToSpin) -
                   rev.target(Direction::SpinToOptical)) < 1e-6);
  }
}

TEST_CASE("numeric band average reduces to a single detuning") {
  const auto spec = square_pi(1e-8);
  const double one = transfer_efficiency_numeric(spec, 1.0, 1, false);
  CHECK(one == doctest::Approx(transfer_once(spec, 0.0, 0.0, 0.0).spin_population));
  CHECK(detuning_sample(10.0, 1, 0) == 0.0);
  CHECK(detuning_sample(10.0, 4, 0) == doctest::Approx(-3.75));
  CHECK_THROWS_AS(transfer_efficiency_numeric(spec, 1.0, 0, false), Error);
}

TEST_CASE("numeric efficiency is converged in the tolerance") {
  const double T = 4000.0 / kGamma;
  const auto spec = pulse_for_ratio(PulseKind::HSH, 3.0, T, kGamma);
  const double a = transfer_efficiency_numeric(spec, kGamma, 16, true, {1e-8, 1e-12});
  const double b = transfer_efficiency_numeric(spec, kGamma, 16, true, {5e-9, 5e-13});
  CHECK(std::abs(a - b) < 1e-4);
}

TEST_CASE("numeric efficiency is independent of the worker count") {
  const double T = 400.0 / kGamma;
  const auto spec = pulse_for_ratio(PulseKind::HSH, 3.0, T, kGamma);
  setenv("SPINVAULT_THREADS", "1", 1);
  const double one = transfer_efficiency_numeric(spec, kGamma, 16, true);
  setenv("SPINVAULT_THREADS", "4", 1);
  const double four = transfer_efficiency_numeric(spec, kGamma, 16, true);
  unsetenv("SPINVAULT_THREADS");
  CHECK(one == four);
}

TEST_CASE("HSH round trip saturates monotonically toward one") {
  const double T = 4000.0 / kGamma;
  double prev = 0.0;
  for (double x : {0.5, 1.0, 2.0, 4.0}) {
    const auto spec = pulse_for_ratio(PulseKind::HSH, x, T, kGamma);
    const double v = transfer_efficiency_numeric(spec, kGamma, 32, true);
    CHECK(v > prev);
    CHECK(v < 1.0);
    prev = v;
  }
  CHECK(prev > 0.95);
}

TEST_CASE("pulse_for_ratio sets Omega^2 T / Gamma") {
  const double T = 1e-7;
  const auto spec = pulse_for_ratio(PulseKind::HSH, 3.0, T, kGamma);
  CHECK(spec.peak_rabi * spec.peak_rabi * T / kGamma == doctest::Approx(3.0));
  CHECK(spec.chirp_bandwidth == kGamma);
  const auto sq = pulse_for_ratio(PulseKind::SquarePi, 3.0, T, kGamma);
  CHECK(sq.peak_rabi * T == doctest::Approx(M_PI));
  CHECK_THROWS_AS(pulse_for_ratio(PulseKind::HSH, -1.0, T, kGamma), Error);
}

TEST_CASE("invalid specs are rejected") {
  auto spec = hsh(1e-7, 1e8, 1e9, 0.25);
  spec.hsh_edge_fraction = 0.6;
  CHECK_THROWS_AS(transfer_once(spec, 0.0, 0.0, 0.0), Error);
  spec = square_pi(1e-7);
  spec.duration = 0.0;
  CHECK_THROWS_AS(transfer_once(spec, 0.0, 0.0, 0.0), Error);
}
