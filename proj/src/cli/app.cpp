#include "spinvault/cli/app.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "spinvault/afc/analytics.hpp"
#include "spinvault/cli/csv.hpp"
#include "spinvault/cli/sweep.hpp"
#include "spinvault/core/scenario.hpp"
#include "spinvault/pde/protocol.hpp"
#include "spinvault/pulse/transfer.hpp"
#include "spinvault/repeater/model.hpp"

#ifndef SPINVAULT_VERSION
#define SPINVAULT_VERSION "0.0.0"
#endif

namespace spinvault::cli {

namespace {

struct Common {
  std::string scenario;
  std::string out;
  std::vector<std::string> overrides;
  std::string format;
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_format) {
  c.format = default_format;
  cmd->add_option("--scenario", c.scenario, "Scenario JSON file (default: canonical)");
  cmd->add_option("--out", c.out, "Output file (default: stdout)");
  cmd->add_option("--set", c.overrides, "Override a field, key=value (repeatable)")
      ->take_all();
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

Scenario resolve_scenario(const Common& c) {
  Scenario s = c.scenario.empty() ? canonical_scenario()
                                  : load_scenario(c.scenario);
  for (const auto& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw Error(Errc::InvalidParameter, "--set expects key=value, got '" + kv + "'");
    set_field(s, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return validate(s);
}

struct Output {
  Table table;
  nlohmann::json record;
  bool is_table = true;
};

void emit(const Output& o, const std::string& format, std::ostream& out) {
  if (!o.is_table) {
    out << o.record.dump(2) << '\n';
  } else if (format == "json") {
    out << table_to_json(o.table).dump(2) << '\n';
  } else {
    write_csv(o.table, out);
  }
}

// --- subcommands ---------------------------------------------------------

Output run_afc(const Scenario& s) {
  using namespace afc;
  const auto& c = s.comb;
  const auto& e = s.ensemble;
  const auto& p = s.pulse;
  const auto total = memory_efficiency_total(p, c, e);
  const double exchange = exchange_duration(e.J, e.gamma_s);
  const double Z = absorption_rate(e.N_a, s.cavity.coupling_product, c.bandwidth);
  const auto echo = echo_delay(p.duration, exchange, c.peak_separation,
                               s.protocol.echo_convention);
  const double storage = 1.0 / e.gamma_k;

  nlohmann::json r;
  r["eta_m"] = total.total;
  r["breakdown"] = {{"transfer_in", total.transfer_in},
                    {"transfer_out", total.transfer_out},
                    {"exchange_roundtrip", total.exchange_roundtrip},
                    {"dephasing", total.dephasing}};
  r["dephasing_factor"] = dephasing_factor(c.finesse);
  r["multimode_capacity"] = multimode_capacity(c.bandwidth, c.peak_separation);
  r["transfer_efficiency"] = {
      {"literal", transfer_efficiency_analytic(p.kind, p.duration, p.peak_rabi,
                                               c.bandwidth,
                                               TransferExponent::Literal)},
      {"total_efficiency",
       transfer_efficiency_analytic(p.kind, p.duration, p.peak_rabi,
                                    c.bandwidth,
                                    TransferExponent::TotalEfficiency)}};
  r["exchange"] = {
      {"duration_s", exchange},
      {"efficiency_one_way",
       exchange_efficiency_analytic(e.gamma_s, e.J, ExchangeLegs::OneWay)},
      {"efficiency_round_trip",
       exchange_efficiency_analytic(e.gamma_s, e.J, ExchangeLegs::RoundTrip)}};
  r["cavity"] = {
      {"absorption_rate", Z},
      {"reflection", cavity_reflection(s.cavity.decay_rate, Z)},
      {"cooperativity", cooperativity(e.N_a, s.cavity.coupling_product,
                                      s.cavity.decay_rate, c.bandwidth)}};
  r["echo"] = {{"delay_s", echo.delay},
               {"rephasing_s", echo.rephasing},
               {"convention", std::string(to_string(echo.convention))}};
  r["storage_time_s"] = storage;
  r["time_bandwidth_product"] = time_bandwidth_product(storage, c.bandwidth);
  return {{}, r, false};
}

struct PulseArgs {
  std::string shape = "all";
  std::string ratio = "0.5:10:20";
  int samples = 64;
  double duration_gamma = 4000.0;
  std::string exponent = "literal";
};

Output run_pulse(const Scenario& s, const PulseArgs& a) {
  std::vector<PulseKind> kinds;
  if (a.shape == "all")
    kinds = {PulseKind::SquarePi, PulseKind::ChirpedSech, PulseKind::HSH};
  else
    kinds = {pulse_kind_from_string(a.shape)};
  if (!(a.duration_gamma > 0.0))
    throw Error(Errc::InvalidParameter, "--duration-gamma must be positive");
  if (a.samples < 1)
    throw Error(Errc::InvalidParameter, "--samples must be >= 1");
  const auto ratios = parse_values(a.ratio);
  const auto exponent = transfer_exponent_from_string(a.exponent);
  const double gamma = s.comb.bandwidth;
  const double T = a.duration_gamma / gamma;

  Output o;
  o.table.columns = {"shape", "omega2T_over_gamma", "efficiency_numeric",
                     "efficiency_analytic"};
  for (auto kind : kinds) {
    for (double x : ratios) {
      auto spec = pulse::pulse_for_ratio(kind, x, T, gamma);
      if (kind == PulseKind::HSH) spec.hsh_edge_fraction = s.pulse.hsh_edge_fraction;
      const double numeric =
          pulse::transfer_efficiency_numeric(spec, gamma, a.samples, true);
      const double one_way = afc::transfer_efficiency_analytic(
          kind, spec.duration, spec.peak_rabi, gamma, exponent);
      o.table.add_row({std::string(to_string(kind)), x, numeric,
                       one_way * one_way});
    }
  }
  return o;
}

Output run_pde(const Scenario& s, const std::string& sweep) {
  Output o;
  if (sweep.empty()) {
    const auto r = pde::run_protocol(s);
    o.table.columns = {"t_s", "alkali_population", "noble_population"};
    for (const auto& p : r.series) o.table.add_row({p.t, p.alkali, p.noble});
    o.record = {{"total", r.numeric.total},
                {"transfer_in", r.numeric.transfer_in},
                {"transfer_out", r.numeric.transfer_out},
                {"exchange_roundtrip", r.numeric.exchange_roundtrip},
                {"dephasing", r.numeric.dephasing},
                {"exchange_in", r.exchange_in},
                {"projection", r.projection},
                {"storage_extrapolation", r.storage_extrapolation},
                {"analytic_total",
                 afc::memory_efficiency_total(s.pulse, s.comb, s.ensemble).total}};
    return o;
  }
  const auto eq = sweep.find('=');
  if (eq == std::string::npos)
    throw Error(Errc::InvalidParameter, "--sweep expects variable=min:max:steps");
  const auto variable = pde::sweep_variable_from_string(sweep.substr(0, eq));
  const auto values = parse_values(sweep.substr(eq + 1));
  pde::EvolveOptions options;
  options.tolerances = {s.protocol.rtol, s.protocol.atol};
  const auto points = pde::spin_exchange_efficiency_numeric(
      s.ensemble, s.cell,
      pde::RadialGrid::make(s.cell.radius, s.protocol.grid_points), variable,
      values, options);
  o.table.columns = {"sweep_value", "eta_numeric", "eta_analytic"};
  for (const auto& p : points)
    o.table.add_row({p.value, p.eta_numeric, p.eta_analytic});
  return o;
}

struct RepeaterArgs {
  std::string range = "200:3000:57";
  std::string links = "4,8";
  double direct_source_rate = 0.0;  // > 0 adds the direct comparator
  bool include_detector = false;
  double distance = 0.0;
  double storage_time = 0.0;  // <= 0: 1 / gamma_k
};

double comparator_rate(const repeater::RepeaterConfig& c, const RepeaterArgs& a) {
  return a.direct_source_rate > 0.0 ? a.direct_source_rate : c.source_rate;
}

Output run_repeater(const Scenario& s, const RepeaterArgs& a) {
  const auto cfg = repeater::RepeaterConfig::from_scenario(s);
  const auto distances = parse_values(a.range);
  const auto links = parse_int_list(a.links);
  Output o;
  o.table.columns = {"distance_km", "rate_hz", "protocol", "links"};
  for (int n : links) {
    const auto curve = repeater::repeater_curve(cfg, n, distances);
    for (std::size_t i = 0; i < distances.size(); ++i)
      o.table.add_row({curve.distances[i], curve.rates[i], curve.protocol,
                       static_cast<long long>(n)});
  }
  if (a.direct_source_rate > 0.0) {
    auto c = cfg;
    c.source_rate = a.direct_source_rate;
    const auto curve = repeater::direct_curve(c, distances, a.include_detector);
    for (std::size_t i = 0; i < distances.size(); ++i)
      o.table.add_row({curve.distances[i], curve.rates[i], curve.protocol, 0LL});
  }
  return o;
}

Output run_repeater_verb(const Scenario& s, const std::string& verb,
                         const RepeaterArgs& a) {
  const auto cfg = repeater::RepeaterConfig::from_scenario(s);
  const auto links = parse_int_list(a.links);
  nlohmann::json r;
  r["verb"] = verb;
  r["candidates"] = links;
  r["pair_probability"] = cfg.pair_probability;
  if (verb == "crossover") {
    const double rate = comparator_rate(cfg, a);
    const double L = repeater::crossover_distance(cfg, rate, links);
    r["direct_source_rate_hz"] = rate;
    r["crossover_km"] = L;
    r["links"] = repeater::optimal_links(L, cfg, links);
  } else if (verb == "optimal-links") {
    const double L = a.distance > 0.0 ? a.distance : cfg.total_distance;
    const int n = repeater::optimal_links(L, cfg, links);
    r["distance_km"] = L;
    r["links"] = n;
    r["rate_hz"] = repeater::repeater_rate(cfg.with(L, n));
  } else {
    const double storage =
        a.storage_time > 0.0 ? a.storage_time : 1.0 / s.ensemble.gamma_k;
    const double L = repeater::max_distance(cfg, storage, links);
    r["storage_time_s"] = storage;
    r["max_distance_km"] = L;
    r["links"] = repeater::optimal_links(L, cfg, links);
  }
  return {{}, r, false};
}

}  // namespace

nlohmann::json RunManifest::to_json() const {
  return {{"tool", "spinvault"},
          {"version", SPINVAULT_VERSION},
          {"schema_version", kSchemaVersion},
          {"scenario", scenario_path.empty() ? "<canonical>" : scenario_path},
          {"subcommand", subcommand},
          {"overrides", overrides},
          {"arguments", arguments},
          {"outputs", outputs},
          {"format", format},
          {"deterministic", true}};
}

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::ComputeFailed:
    case Errc::IntegratorFailure:
    case Errc::StiffnessBailout:
    case Errc::NoCrossover:
    case Errc::NeverReachable:
    case Errc::OverdampedExchange:
    case Errc::OutOfWindow:
    case Errc::NonPositiveKappa:
    case Errc::FinesseTooSmall:
      return kExitCompute;
    default:
      return kExitInput;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hot-vapor AFC quantum memory and repeater-rate simulator",
               "spinvault"};
  app.set_version_flag("--version", SPINVAULT_VERSION);
  app.require_subcommand(1);

  RunManifest manifest;

  auto* afc_cmd = app.add_subcommand("afc", "Closed-form memory analytics (JSON)");
  Common afc_c;
  add_common(afc_cmd, afc_c, "json");

  auto* pulse_cmd = app.add_subcommand("pulse", "Round-trip pulse transfer efficiency");
  Common pulse_c;
  add_common(pulse_cmd, pulse_c, "csv");
  PulseArgs pa;
  pulse_cmd->add_option("--shape", pa.shape, "square | sech | hsh | all")
      ->check(CLI::IsMember({"square", "sech", "hsh", "all"}));
  pulse_cmd->add_option("--omega2T-over-gamma", pa.ratio,
                        "Omega^2 T / Gamma values, min:max:steps or a list");
  pulse_cmd->add_option("--samples", pa.samples, "Detunings across the comb");
  pulse_cmd->add_option("--duration-gamma", pa.duration_gamma,
                        "Pulse duration in units of 1 / Gamma");
  pulse_cmd->add_option("--exponent", pa.exponent,
                        "Analytic exponent: literal | total-efficiency");

  auto* pde_cmd = app.add_subcommand("pde", "Spin-exchange protocol simulation");
  Common pde_c;
  add_common(pde_cmd, pde_c, "csv");
  std::string pde_sweep;
  pde_cmd->add_option("--sweep", pde_sweep,
                      "J_over_gamma_s=min:max:steps or Da=min:max:steps");

  auto* rep_cmd = app.add_subcommand("repeater", "Repeater rate model");
  Common rep_c;
  add_common(rep_cmd, rep_c, "csv");
  RepeaterArgs ra;
  rep_cmd->add_option("--distance-range", ra.range, "min:max:steps in km");
  rep_cmd->add_option("--links", ra.links, "Link counts, e.g. 4,8");
  rep_cmd->add_option("--direct-source-rate", ra.direct_source_rate,
                      "Add a direct-transmission curve at this source rate (Hz)");
  rep_cmd->add_flag("--include-detector", ra.include_detector,
                    "Apply the detector efficiency to the direct curve");
  std::string verb;
  for (const char* name : {"crossover", "optimal-links", "max-distance"}) {
    auto* v = rep_cmd->add_subcommand(name, "Single JSON record");
    v->callback([&verb, name] { verb = name; });
    v->add_option("--links", ra.links, "Candidate link counts");
    v->add_option("--direct-source-rate", ra.direct_source_rate,
                  "Direct source rate (Hz)");
    v->add_option("--distance", ra.distance, "Distance in km");
    v->add_option("--storage-time", ra.storage_time, "Storage time in s");
    v->add_option("--scenario", rep_c.scenario, "Scenario JSON file");
    v->add_option("--out", rep_c.out, "Output file");
    v->add_option("--set", rep_c.overrides, "Override a field")->take_all();
  }

  auto* sweep_cmd = app.add_subcommand("sweep", "Cartesian parameter sweep");
  Common sweep_c;
  add_common(sweep_cmd, sweep_c, "csv");
  std::vector<std::string> grid_specs, quantities;
  sweep_cmd->add_option("--grid", grid_specs, "field=min:max:steps or field=v1,v2")
      ->required();
  sweep_cmd->add_option("--quantity", quantities,
                        "Quantity to evaluate (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  const Common* active = nullptr;
  for (auto [cmd, c] : {std::pair{afc_cmd, &afc_c}, {pulse_cmd, &pulse_c},
                        {pde_cmd, &pde_c}, {rep_cmd, &rep_c},
                        {sweep_cmd, &sweep_c}})
    if (cmd->parsed()) {
      active = c;
      manifest.subcommand = cmd->get_name();
    }
  if (!verb.empty()) manifest.subcommand += " " + verb;

  try {
    Scenario s;
    try {
      s = resolve_scenario(*active);
    } catch (const Error& e) {
      err << "spinvault: " << e.what() << '\n';
      return kExitInput;
    }

    Output result;
    if (afc_cmd->parsed()) {
      result = run_afc(s);
    } else if (pulse_cmd->parsed()) {
      manifest.arguments = {{"shape", pa.shape},
                            {"omega2T_over_gamma", pa.ratio},
                            {"samples", std::to_string(pa.samples)},
                            {"duration_gamma", format_number(pa.duration_gamma)},
                            {"exponent", pa.exponent}};
      result = run_pulse(s, pa);
    } else if (pde_cmd->parsed()) {
      manifest.arguments = {{"sweep", pde_sweep}};
      result = run_pde(s, pde_sweep);
      if (pde_sweep.empty() && active->format == "json") {
        result.is_table = false;
      }
    } else if (rep_cmd->parsed()) {
      manifest.arguments = {
          {"distance_range", ra.range},
          {"links", ra.links},
          {"direct_source_rate", format_number(ra.direct_source_rate)},
          {"include_detector", ra.include_detector ? "true" : "false"},
          {"distance", format_number(ra.distance)},
          {"storage_time", format_number(ra.storage_time)}};
      result = verb.empty() ? run_repeater(s, ra) : run_repeater_verb(s, verb, ra);
    } else {
      std::vector<GridAxis> axes;
      for (const auto& g : grid_specs) axes.push_back(parse_grid_axis(g));
      if (quantities.empty()) quantities = {"memory_efficiency_total"};
      std::string joined;
      for (const auto& g : grid_specs) joined += (joined.empty() ? "" : ";") + g;
      std::string qs;
      for (const auto& q : quantities) qs += (qs.empty() ? "" : ",") + q;
      manifest.arguments = {{"grid", joined}, {"quantity", qs}};
      result.table = run_sweep(s, axes, quantities);
    }

    manifest.scenario_path = active->scenario;
    manifest.overrides = active->overrides;
    manifest.format = result.is_table ? active->format : "json";

    if (active->out.empty()) {
      emit(result, manifest.format, out);
      return kExitOk;
    }
    std::ofstream file(active->out, std::ios::binary);
    if (!file)
      throw Error(Errc::InvalidParameter, "cannot write '" + active->out + "'");
    emit(result, manifest.format, file);
    manifest.outputs = {active->out};
    std::ofstream mf(active->out + ".manifest.json", std::ios::binary);
    nlohmann::json m = manifest.to_json();
    m["resolved_scenario"] = to_json(s);
    mf << m.dump(2) << '\n';
    return kExitOk;
  } catch (const Error& e) {
    err << "spinvault: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "spinvault: " << e.what() << '\n';
    return kExitCompute;
  }
}

}  // namespace spinvault::cli
