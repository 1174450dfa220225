#pragma once

#include "spinvault/core/frequency.hpp"
#include "spinvault/core/params.hpp"

/// Closed-form AFC memory analytics in the fast-cavity limit.
namespace spinvault::afc {

// --- cavity --------------------------------------------------------------

/// Field reflection amplitude (kappa - Z) / (kappa + Z). Zero at impedance
/// matching. Throws NonPositiveKappa for kappa <= 0.
double cavity_reflection(double kappa, double absorption_rate);

/// Z = N_a (g0 p)^2 / Gamma.
double absorption_rate(double atom_number, double coupling_product,
                       double bandwidth);

/// C = N_a G^2 / (kappa Gamma). With G the single-atom coupling g0 p this
/// equals Z / kappa, so C = 1 exactly when the reflection vanishes. Passing
/// the collective G = sqrt(p_a n_a) g0 p scales C by p_a n_a.
double cooperativity(double atom_number, double coupling, double kappa,
                     double bandwidth);

/// G = sqrt(p_a n_a) g0 p.
double collective_coupling(double polarization, double density,
                           double coupling_product);

// --- comb ----------------------------------------------------------------

/// sinc^2(pi / F) with the unnormalized sinc. Throws FinesseTooSmall for F < 1.
double dephasing_factor(double finesse);

/// floor(2 Gamma / (5 Delta)).
int multimode_capacity(double bandwidth, double separation);

/// Comb rephasing time: 1 / Delta (angular separation) or 2 pi / Delta.
double comb_rephasing_time(double separation, EchoConvention convention);

struct EchoTiming {
  double delay = 0.0;       // 2 T + 2 T' + rephasing
  double rephasing = 0.0;
  EchoConvention convention = EchoConvention::AngularSeparation;
};

EchoTiming echo_delay(double pulse_duration, double exchange_duration,
                      double separation,
                      EchoConvention convention =
                          EchoConvention::AngularSeparation);

// --- transfer ------------------------------------------------------------

/// Shape coefficient a in 1 - exp(-a T Omega^2 / Gamma). Only defined for
/// the chirped shapes.
double transfer_coefficient(PulseKind kind, TransferExponent convention);

/// One-way optical-to-spin transfer efficiency.
///
/// Chirped shapes use 1 - exp(-a T Omega^2 / Gamma). A square pulse has no
/// adiabatic form; its value is the Rabi response
/// Omega^2 / (Omega^2 + d^2) sin^2(sqrt(Omega^2 + d^2) T / 2) averaged over
/// detunings d uniform in [-Gamma/2, Gamma/2].
double transfer_efficiency_analytic(
    PulseKind kind, double duration, double peak_rabi, double bandwidth,
    TransferExponent convention = TransferExponent::Literal);

// --- spin exchange -------------------------------------------------------

/// T' = (pi J - gamma_s) / (2 J^2). Throws OverdampedExchange when
/// gamma_s >= pi J.
double exchange_duration(double J, double gamma_s);

enum class ExchangeLegs { OneWay, RoundTrip };

/// exp(-pi gamma_s / (2 J)) one way, its square for the round trip.
double exchange_efficiency_analytic(double gamma_s, double J,
                                    ExchangeLegs legs);

// --- totals --------------------------------------------------------------

struct EfficiencyBreakdown {
  double transfer_in = 0.0;
  double transfer_out = 0.0;
  double exchange_roundtrip = 0.0;
  double dephasing = 0.0;
  double total = 0.0;

  static EfficiencyBreakdown compose(double transfer_in, double transfer_out,
                                     double exchange_roundtrip,
                                     double dephasing) noexcept {
    return {transfer_in, transfer_out, exchange_roundtrip, dephasing,
            transfer_in * transfer_out * exchange_roundtrip * dephasing};
  }
};

/// eta_m = [1 - exp(-pi^2 T Omega^2 / Gamma)]^2 exp(-pi gamma_s / J)
///         sinc^2(pi / F), every factor broken out.
EfficiencyBreakdown memory_efficiency_total(const PulseSpec& pulse,
                                            const CombParams& comb,
                                            const EnsembleParams& ensemble);

double time_bandwidth_product(double storage_time, double bandwidth);

/// Exact 1 - (1 - P)^N.
double multiplexed_success(double probability, long long modes);

}  // namespace spinvault::afc
