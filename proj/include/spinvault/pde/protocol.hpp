#pragma once

#include <string_view>
#include <vector>

#include "spinvault/afc/analytics.hpp"
#include "spinvault/core/scenario.hpp"
#include "spinvault/pde/spin_solver.hpp"

namespace spinvault::pde {

enum class StageKind {
  TransferIn,
  ExchangeIn,
  Storage,
  ExchangeOut,
  TransferOut,
  Echo,
};

std::string_view to_string(StageKind k) noexcept;

struct TimelineStage {
  StageKind kind = StageKind::TransferIn;
  double duration = 0.0;
  double delta_s = 0.0;
  double delta_k = 0.0;

  /// Exchange and storage stages run the spin PDE; the optical stages are
  /// nanoseconds long and enter as efficiency factors.
  bool spin_dynamics() const noexcept {
    return kind == StageKind::ExchangeIn || kind == StageKind::Storage ||
           kind == StageKind::ExchangeOut;
  }
};

/// `requested` rounded to the nearest whole number (at least one) of
/// detuned precession periods 2 pi / sqrt(delta_k^2 + 4 J^2). Switching the
/// detuning on and off abruptly then leaves no residual alkali amplitude
/// at the start of the readout exchange.
double storage_stage_duration(double requested, const EnsembleParams& e);

/// Storage sequence P -> S -> K, dark storage, then the reverse and the
/// comb echo.
struct ProtocolTimeline {
  std::vector<TimelineStage> stages;

  static ProtocolTimeline from_scenario(const Scenario& s);
  double total_duration() const noexcept;
};

/// Throws InvalidParameter unless every duration is positive, the exchange
/// stages are resonant and the storage detuning exceeds 10 J.
void validate(const ProtocolTimeline& timeline, const EnsembleParams& ensemble);

struct ProtocolSample {
  double t = 0.0;
  double alkali = 0.0;  // relative to one input excitation
  double noble = 0.0;
  StageKind stage = StageKind::TransferIn;
};

struct ProtocolResult {
  std::vector<ProtocolSample> series;
  afc::EfficiencyBreakdown numeric;
  double exchange_in = 0.0;  // noble population after the first exchange
  double projection = 0.0;   // readout overlap over the simulated window
  double storage_extrapolation = 1.0;  // exp(-2 gamma_k (tau - simulated))
  ode::Stats stats;
};

/// Runs every stage on the scenario's grid. The total is
/// dephasing x transfer_in x transfer_out x projection, where projection is
/// |<S0|S_final>|^2 / <S0|S0>^2 against the uniform initial mode, extended to
/// the physical storage time by the noble-gas decay.
ProtocolResult run_protocol(const ProtocolTimeline& timeline,
                            const Scenario& scenario);
ProtocolResult run_protocol(const Scenario& scenario);

enum class SweepVariable { JOverGammaS, DiffusionAlkali };

std::string_view to_string(SweepVariable v) noexcept;
SweepVariable sweep_variable_from_string(std::string_view s);

struct ExchangeSweepPoint {
  double value = 0.0;
  double eta_numeric = 0.0;
  double eta_analytic = 0.0;
};

/// One exchange stage from a uniform alkali mode: int |K(T')|^2 dV over the
/// uniform mode norm.
double exchange_efficiency_numeric(const EnsembleParams& ensemble,
                                   const CellGeometry& cell,
                                   const RadialGrid& grid,
                                   const EvolveOptions& options = {});

/// Exchange efficiency across J / gamma_s (gamma_s held, J varied) or D_a.
/// Points are evaluated in parallel and returned in input order. Throws
/// EmptyGrid for an empty sweep.
std::vector<ExchangeSweepPoint> spin_exchange_efficiency_numeric(
    const EnsembleParams& ensemble, const CellGeometry& cell,
    const RadialGrid& grid, SweepVariable variable,
    const std::vector<double>& values, const EvolveOptions& options = {});

}  // namespace spinvault::pde
