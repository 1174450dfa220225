#pragma once

#include <string_view>

#include "spinvault/core/frequency.hpp"

namespace spinvault {

/// Atomic frequency comb geometry. All widths are ordinary Hz.
struct CombParams {
  double peak_width = 0.0;       // gamma, FWHM of one tooth
  double peak_separation = 0.0;  // Delta
  double bandwidth = 0.0;        // Gamma, overall comb width
  double finesse = 0.0;          // F = Delta / gamma

  static CombParams from_separation(double separation, double finesse,
                                    double bandwidth) noexcept {
    return {separation / finesse, separation, bandwidth, finesse};
  }
};

/// Alkali (a) and noble-gas (b) ensembles. Densities in cm^-3, rates in Hz,
/// diffusion in cm^2 Hz.
struct EnsembleParams {
  double n_a = 0.0;
  double n_b = 0.0;
  double p_a = 0.0;
  double p_b = 0.0;
  double gamma_p = 0.0;  // optical dipole linewidth (ordinary Hz)
  double gamma_s = 0.0;  // alkali spin decoherence
  double gamma_k = 0.0;  // noble-gas spin decoherence
  double D_a = 0.0;
  double D_b = 0.0;
  double J = 0.0;        // coherent spin-exchange rate
  double G = 0.0;        // collective atom-field coupling
  double delta_bar = 0.0;
  double delta_s = 0.0;
  double delta_k = 0.0;  // noble-gas detuning applied during dark storage
  double N_a = 0.0;
  double N_b = 0.0;
};

/// Cavity with one partially transmitting mirror. The atom-cavity coupling
/// and the transition dipole only ever appear as the product g0 * dipole,
/// which is what `coupling_product` stores.
struct CavityParams {
  double decay_rate = 0.0;        // kappa
  double coupling_product = 0.0;  // g0 * dipole
};

enum class WallBoundary { Destructive, NonDestructive };

std::string_view to_string(WallBoundary b) noexcept;
WallBoundary wall_boundary_from_string(std::string_view s);

struct CellGeometry {
  double radius = 0.0;  // cm
  WallBoundary boundary_alkali = WallBoundary::Destructive;
  WallBoundary boundary_noble = WallBoundary::NonDestructive;
};

enum class PulseKind { SquarePi, ChirpedSech, HSH };

std::string_view to_string(PulseKind k) noexcept;
PulseKind pulse_kind_from_string(std::string_view s);

/// Control pulse for the optical-to-spin transfer. `peak_rabi` is the full
/// Rabi frequency: a resonant square pulse with peak_rabi * duration = pi
/// inverts the optical coherence into the spin wave.
struct PulseSpec {
  PulseKind kind = PulseKind::HSH;
  double peak_rabi = 0.0;        // Omega_0 (Hz)
  double duration = 0.0;         // T (s)
  double chirp_bandwidth = 0.0;  // full frequency sweep (Hz)
  double sech_beta = 0.0;        // sech steepness (Hz); <= 0 selects 8 / T
  double hsh_edge_fraction = 0.0;

  double effective_sech_beta() const noexcept {
    return sech_beta > 0.0 ? sech_beta : 8.0 / duration;
  }
};

/// Exponent convention for the closed-form transfer efficiency
/// 1 - exp(-a T Omega^2 / Gamma).
enum class TransferExponent {
  Literal,          // ChirpedSech a = pi, HSH a = pi / 2
  TotalEfficiency,  // HSH a = pi^2, the exponent of the total-efficiency form
};

std::string_view to_string(TransferExponent e) noexcept;
TransferExponent transfer_exponent_from_string(std::string_view s);

enum class TransferSource { Analytic, Numeric };

std::string_view to_string(TransferSource s) noexcept;
TransferSource transfer_source_from_string(std::string_view s);

/// Stage timings and numerics for the full storage protocol.
struct ProtocolParams {
  double storage_sim_duration = 0.0;  // simulated dark-storage window (s)
  double storage_time = 0.0;          // physical storage time tau (s)
  int grid_points = 200;
  double rtol = 1e-6;
  double atol = 1e-10;
  TransferSource transfer_source = TransferSource::Analytic;
  int transfer_detunings = 64;
  int series_samples = 400;
  EchoConvention echo_convention = EchoConvention::AngularSeparation;
  TransferExponent transfer_exponent = TransferExponent::TotalEfficiency;
};

struct RepeaterParams {
  double total_distance = 0.0;  // km
  int link_count = 4;
  double pair_probability = 0.0;
  int mode_count = 0;    // temporal modes N; <= 0 selects the comb capacity
  int memory_count = 1;  // independent memories per node
  double eta_m = 0.0;
  double eta_d = 0.0;
  double eta_c = 0.0;
  double attenuation_length = 0.0;  // km
  double fiber_speed = 0.0;         // m/s
  double source_rate = 0.0;         // Hz, direct-transmission comparator
};

}  // namespace spinvault
