#include "spinvault/pde/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spinvault/core/error.hpp"
#include "spinvault/core/parallel.hpp"
#include "spinvault/pulse/transfer.hpp"

namespace spinvault::pde {

std::string_view to_string(StageKind k) noexcept {
  switch (k) {
    case StageKind::TransferIn: return "transfer-in";
    case StageKind::ExchangeIn: return "exchange-in";
    case StageKind::Storage: return "storage";
    case StageKind::ExchangeOut: return "exchange-out";
    case StageKind::TransferOut: return "transfer-out";
    case StageKind::Echo: return "echo";
  }
  return "?";
}

std::string_view to_string(SweepVariable v) noexcept {
  return v == SweepVariable::JOverGammaS ? "J_over_gamma_s" : "Da";
}

SweepVariable sweep_variable_from_string(std::string_view s) {
  if (s == "J_over_gamma_s") return SweepVariable::JOverGammaS;
  if (s == "Da") return SweepVariable::DiffusionAlkali;
  throw Error(Errc::InvalidParameter,
              "unknown sweep variable '" + std::string(s) + "'");
}

double storage_stage_duration(double requested, const EnsembleParams& e) {
  const double period =
      2.0 * std::numbers::pi /
      std::sqrt(e.delta_k * e.delta_k + 4.0 * e.J * e.J);
  return period * std::max(1.0, std::round(requested / period));
}

ProtocolTimeline ProtocolTimeline::from_scenario(const Scenario& s) {
  const auto& e = s.ensemble;
  const double exchange = afc::exchange_duration(e.J, e.gamma_s);
  const double echo = afc::comb_rephasing_time(s.comb.peak_separation,
                                               s.protocol.echo_convention);
  ProtocolTimeline t;
  t.stages = {
      {StageKind::TransferIn, s.pulse.duration, 0.0, 0.0},
      {StageKind::ExchangeIn, exchange, 0.0, 0.0},
      {StageKind::Storage,
       storage_stage_duration(s.protocol.storage_sim_duration, e), e.delta_s,
       e.delta_k},
      {StageKind::ExchangeOut, exchange, 0.0, 0.0},
      {StageKind::TransferOut, s.pulse.duration, 0.0, 0.0},
      {StageKind::Echo, echo, 0.0, 0.0},
  };
  return t;
}

double ProtocolTimeline::total_duration() const noexcept {
  double total = 0.0;
  for (const auto& st : stages) total += st.duration;
  return total;
}

void validate(const ProtocolTimeline& timeline, const EnsembleParams& ensemble) {
  if (timeline.stages.empty())
    throw Error(Errc::InvalidParameter, "protocol timeline is empty");
  for (const auto& st : timeline.stages) {
    const std::string name(to_string(st.kind));
    if (!(st.duration > 0.0) || !std::isfinite(st.duration))
      throw Error(Errc::InvalidParameter, name + " duration must be positive");
    const bool exchange = st.kind == StageKind::ExchangeIn ||
                          st.kind == StageKind::ExchangeOut;
    if (exchange && (st.delta_s != 0.0 || st.delta_k != 0.0))
      throw Error(Errc::InvalidParameter, name + " must be resonant");
    if (st.kind == StageKind::Storage &&
        !(std::abs(st.delta_k) >= 10.0 * ensemble.J))
      throw Error(Errc::InvalidParameter,
                  "storage detuning must be >= 10 J to decouple the spins");
  }
}

namespace {

struct TransferFactors {
  double in = 0.0;
  double out = 0.0;
};

TransferFactors transfer_factors(const Scenario& s) {
  const auto& p = s.pulse;
  if (s.protocol.transfer_source == TransferSource::Numeric) {
    const double eta = pulse::transfer_efficiency_numeric(
        p, s.comb.bandwidth, s.protocol.transfer_detunings, false);
    return {eta, eta};
  }
  const double eta = afc::transfer_efficiency_analytic(
      p.kind, p.duration, p.peak_rabi, s.comb.bandwidth,
      s.protocol.transfer_exponent);
  return {eta, eta};
}

void accumulate(ode::Stats& into, const ode::Stats& s) {
  into.accepted += s.accepted;
  into.rejected += s.rejected;
  into.rhs_calls += s.rhs_calls;
  into.last_step = s.last_step;
}

}  // namespace

ProtocolResult run_protocol(const ProtocolTimeline& timeline,
                            const Scenario& scenario) {
  spinvault::validate(scenario);
  validate(timeline, scenario.ensemble);
  const auto& pr = scenario.protocol;
  const auto grid = RadialGrid::make(scenario.cell.radius, pr.grid_points);
  const auto transfer = transfer_factors(scenario);

  EvolveOptions options;
  options.tolerances = {pr.rtol, pr.atol};

  double spin_time = 0.0;
  for (const auto& st : timeline.stages)
    if (st.spin_dynamics()) spin_time += st.duration;

  const SpinState initial = SpinState::uniform_alkali(grid);
  const double norm = uniform_mode_norm(grid);
  SpinState state = initial;

  ProtocolResult result;
  double t = 0.0;
  double alkali = 0.0;  // running relative populations for optical stages
  double noble = 0.0;
  bool exchanged = false;
  auto push = [&](double at, double a, double k, StageKind kind) {
    result.series.push_back({at, a, k, kind});
  };

  for (const auto& st : timeline.stages) {
    if (!st.spin_dynamics()) {
      push(t, alkali, noble, st.kind);
      if (st.kind == StageKind::TransferIn) alkali = transfer.in;
      if (st.kind == StageKind::TransferOut) alkali = 0.0;
      t += st.duration;
      push(t, alkali, noble, st.kind);
      continue;
    }
    options.samples = std::max(
        2, static_cast<int>(std::lround(pr.series_samples * st.duration /
                                        spin_time)));
    state.time = t;
    auto r = evolve(state, scenario.ensemble, scenario.cell, grid,
                    {st.duration, st.delta_s, st.delta_k}, options);
    for (const auto& s : r.series)
      push(s.t, transfer.in * s.alkali / norm, transfer.in * s.noble / norm,
           st.kind);
    accumulate(result.stats, r.stats);
    state = std::move(r.state);
    t = state.time;
    const auto pops = populations(state, scenario.cell, grid);
    alkali = transfer.in * pops.alkali / norm;
    noble = transfer.in * pops.noble / norm;
    if (st.kind == StageKind::ExchangeIn && !exchanged) {
      result.exchange_in = pops.noble / norm;
      exchanged = true;
    }
  }

  const auto overlap = inner_product(initial.S, scenario.cell.boundary_alkali,
                                     state.S, scenario.cell.boundary_alkali,
                                     grid);
  result.projection = std::norm(overlap) / (norm * norm);
  double simulated_storage = 0.0;
  for (const auto& st : timeline.stages)
    if (st.kind == StageKind::Storage) simulated_storage += st.duration;
  result.storage_extrapolation =
      std::exp(-2.0 * scenario.ensemble.gamma_k *
               std::max(0.0, pr.storage_time - simulated_storage));
  result.numeric = afc::EfficiencyBreakdown::compose(
      transfer.in, transfer.out,
      result.projection * result.storage_extrapolation,
      afc::dephasing_factor(scenario.comb.finesse));
  return result;
}

ProtocolResult run_protocol(const Scenario& scenario) {
  return run_protocol(ProtocolTimeline::from_scenario(scenario), scenario);
}

double exchange_efficiency_numeric(const EnsembleParams& ensemble,
                                   const CellGeometry& cell,
                                   const RadialGrid& grid,
                                   const EvolveOptions& options) {
  const double duration = afc::exchange_duration(ensemble.J, ensemble.gamma_s);
  EvolveOptions o = options;
  o.samples = 0;
  const auto r = evolve(SpinState::uniform_alkali(grid), ensemble, cell, grid,
                        {duration, 0.0, 0.0}, o);
  return population(r.state.K, cell.boundary_noble, grid) /
         uniform_mode_norm(grid);
}

std::vector<ExchangeSweepPoint> spin_exchange_efficiency_numeric(
    const EnsembleParams& ensemble, const CellGeometry& cell,
    const RadialGrid& grid, SweepVariable variable,
    const std::vector<double>& values, const EvolveOptions& options) {
  if (values.empty())
    throw Error(Errc::EmptyGrid, "exchange sweep needs at least one value");
  std::vector<ExchangeSweepPoint> out(values.size());
  parallel_for(values.size(), [&](std::size_t i) {
    EnsembleParams e = ensemble;
    if (variable == SweepVariable::JOverGammaS)
      e.J = values[i] * e.gamma_s;
    else
      e.D_a = values[i];
    out[i] = {values[i], exchange_efficiency_numeric(e, cell, grid, options),
              afc::exchange_efficiency_analytic(e.gamma_s, e.J,
                                                afc::ExchangeLegs::OneWay)};
  });
  return out;
}

}  // namespace spinvault::pde
