#include "spinvault/core/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

namespace spinvault {

using nlohmann::json;

Scenario canonical_scenario() {
  Scenario s;

  s.comb = CombParams::from_separation(96e6, 8.0, 27e9);

  const double radius = 1.0;
  const double volume = 4.0 / 3.0 * std::numbers::pi * radius * radius * radius;

  auto& e = s.ensemble;
  e.n_a = 3e14;
  e.n_b = 2e20;
  e.p_a = 0.95;
  e.p_b = 0.75;
  e.gamma_p = 5.96e6;
  e.gamma_s = 17.5;
  e.gamma_k = 1.0 / (100.0 * 3600.0);
  e.D_a = 0.35;
  e.D_b = 0.70;
  e.J = 1000.0;
  e.delta_bar = 0.0;
  e.delta_s = 0.0;
  e.delta_k = 50e3;
  e.N_a = e.n_a * volume;
  e.N_b = e.n_b * volume;

  // Impedance matched: kappa = Z = N_a (g0 p)^2 / Gamma.
  s.cavity.decay_rate = 1e9;
  s.cavity.coupling_product =
      std::sqrt(s.cavity.decay_rate * s.comb.bandwidth / e.N_a);
  e.G = std::sqrt(e.p_a * e.n_a) * s.cavity.coupling_product;

  s.cell.radius = radius;
  s.cell.boundary_alkali = WallBoundary::Destructive;
  s.cell.boundary_noble = WallBoundary::NonDestructive;

  // HSH pulse with pi^2 T Omega^2 / Gamma = 4.
  auto& p = s.pulse;
  p.kind = PulseKind::HSH;
  p.duration = 4000.0 / s.comb.bandwidth;
  p.peak_rabi = std::sqrt(4.0 * s.comb.bandwidth /
                          (std::numbers::pi * std::numbers::pi * p.duration));
  p.chirp_bandwidth = s.comb.bandwidth;
  p.sech_beta = 0.0;
  p.hsh_edge_fraction = 0.04;

  auto& r = s.repeater;
  r.total_distance = 1000.0;
  r.link_count = 4;
  r.pair_probability = 0.0105851917;
  r.mode_count = 0;
  r.memory_count = 100;
  r.eta_m = 0.79;
  r.eta_d = 0.75;
  r.eta_c = 0.8;
  r.attenuation_length = 22.0;
  r.fiber_speed = 2e8;
  r.source_rate = 1e10;

  auto& pr = s.protocol;
  pr.storage_sim_duration = 10.0 / e.J;
  pr.storage_time = pr.storage_sim_duration;
  pr.grid_points = 200;
  pr.rtol = 1e-6;
  pr.atol = 1e-10;
  pr.transfer_source = TransferSource::Analytic;
  pr.transfer_detunings = 64;
  pr.series_samples = 400;
  pr.echo_convention = EchoConvention::AngularSeparation;
  pr.transfer_exponent = TransferExponent::TotalEfficiency;
  return s;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

struct Checker {
  std::vector<Issue> issues;

  void add(Errc code, std::string field, std::string message,
           Severity sev = Severity::Error) {
    issues.push_back({code, std::move(field), std::move(message), sev});
  }

  bool finite(const std::string& field, double v) {
    if (std::isfinite(v)) return true;
    add(Errc::InvalidParameter, field, "value is not finite");
    return false;
  }

  void non_negative(const std::string& field, double v) {
    if (finite(field, v) && v < 0.0)
      add(Errc::NegativeRate, field, "must be >= 0");
  }

  void positive(const std::string& field, double v, Errc code) {
    if (finite(field, v) && !(v > 0.0)) add(code, field, "must be > 0");
  }

  void probability(const std::string& field, double v) {
    if (finite(field, v) && (v < 0.0 || v > 1.0))
      add(Errc::PolarizationOutOfRange, field, "must lie in [0, 1]");
  }

  void efficiency(const std::string& field, double v) {
    if (finite(field, v) && !(v > 0.0 && v <= 1.0))
      add(Errc::InvalidParameter, field, "must lie in (0, 1]");
  }
};

bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

std::vector<Issue> check(const Scenario& s) {
  Checker c;

  if (s.schema_version != kSchemaVersion)
    c.add(Errc::InvalidParameter, "schema_version",
          "unsupported schema version " + std::to_string(s.schema_version));

  const auto& comb = s.comb;
  c.positive("comb.peak_width", comb.peak_width, Errc::NegativeRate);
  c.positive("comb.peak_separation", comb.peak_separation, Errc::NegativeRate);
  c.positive("comb.bandwidth", comb.bandwidth, Errc::NegativeRate);
  if (comb.peak_width > 0.0 && comb.peak_separation > 0.0) {
    if (comb.peak_separation < comb.peak_width)
      c.add(Errc::InvalidParameter, "comb.peak_separation",
            "tooth separation must be >= tooth width");
    const double f = comb.peak_separation / comb.peak_width;
    if (!(std::abs(comb.finesse - f) <= 1e-12 * f))
      c.add(Errc::FinesseMismatch, "comb.finesse",
            "declared finesse differs from peak_separation / peak_width = " +
                std::to_string(f));
  }
  if (comb.peak_separation > 0.0 && comb.bandwidth > 0.0 &&
      comb.bandwidth < 2.0 * comb.peak_separation)
    c.add(Errc::InvalidParameter, "comb.bandwidth",
          "comb must hold at least two teeth (bandwidth >= 2 separation)");

  const auto& e = s.ensemble;
  c.non_negative("ensemble.n_a", e.n_a);
  c.non_negative("ensemble.n_b", e.n_b);
  c.probability("ensemble.p_a", e.p_a);
  c.probability("ensemble.p_b", e.p_b);
  c.non_negative("ensemble.gamma_p", e.gamma_p);
  c.non_negative("ensemble.gamma_s", e.gamma_s);
  c.non_negative("ensemble.gamma_k", e.gamma_k);
  c.non_negative("ensemble.D_a", e.D_a);
  c.non_negative("ensemble.D_b", e.D_b);
  c.non_negative("ensemble.J", e.J);
  c.non_negative("ensemble.G", e.G);
  c.non_negative("ensemble.N_a", e.N_a);
  c.non_negative("ensemble.N_b", e.N_b);
  c.finite("ensemble.delta_bar", e.delta_bar);
  c.finite("ensemble.delta_s", e.delta_s);
  c.finite("ensemble.delta_k", e.delta_k);
  // gamma_p is an ordinary linewidth used as 2*pi*gamma_p.
  if (!(to_angular(e.gamma_p) > e.gamma_s && e.gamma_s > e.gamma_k))
    c.add(Errc::HierarchyViolation, "ensemble",
          "expected gamma_p >> gamma_s >> gamma_k", Severity::Warning);

  c.positive("cavity.decay_rate", s.cavity.decay_rate, Errc::NonPositiveKappa);
  c.non_negative("cavity.coupling_product", s.cavity.coupling_product);

  c.positive("cell.radius", s.cell.radius, Errc::InvalidParameter);

  const auto& p = s.pulse;
  c.positive("pulse.duration", p.duration, Errc::InvalidParameter);
  c.non_negative("pulse.peak_rabi", p.peak_rabi);
  c.non_negative("pulse.chirp_bandwidth", p.chirp_bandwidth);
  c.finite("pulse.sech_beta", p.sech_beta);
  if (c.finite("pulse.hsh_edge_fraction", p.hsh_edge_fraction) &&
      !(p.hsh_edge_fraction > 0.0 && p.hsh_edge_fraction < 0.5))
    c.add(Errc::InvalidParameter, "pulse.hsh_edge_fraction",
          "must lie in (0, 0.5)");

  const auto& r = s.repeater;
  c.positive("repeater.total_distance", r.total_distance,
             Errc::InvalidParameter);
  if (r.link_count < 2 || !power_of_two(r.link_count))
    c.add(Errc::DegenerateLink, "repeater.link_count",
          "link count must be a power of two >= 2");
  if (c.finite("repeater.pair_probability", r.pair_probability) &&
      !(r.pair_probability > 0.0 && r.pair_probability < 1.0))
    c.add(Errc::InvalidParameter, "repeater.pair_probability",
          "must lie in (0, 1)");
  if (r.memory_count < 1)
    c.add(Errc::InvalidParameter, "repeater.memory_count", "must be >= 1");
  c.efficiency("repeater.eta_m", r.eta_m);
  c.efficiency("repeater.eta_d", r.eta_d);
  c.efficiency("repeater.eta_c", r.eta_c);
  c.positive("repeater.attenuation_length", r.attenuation_length,
             Errc::InvalidParameter);
  c.positive("repeater.fiber_speed", r.fiber_speed, Errc::InvalidParameter);
  c.positive("repeater.source_rate", r.source_rate, Errc::InvalidParameter);

  const auto& pr = s.protocol;
  c.positive("protocol.storage_sim_duration", pr.storage_sim_duration,
             Errc::InvalidParameter);
  if (c.finite("protocol.storage_time", pr.storage_time) &&
      pr.storage_time < pr.storage_sim_duration)
    c.add(Errc::InvalidParameter, "protocol.storage_time",
          "must be >= storage_sim_duration");
  if (pr.grid_points < 32)
    c.add(Errc::GridTooCoarse, "protocol.grid_points", "need >= 32 points");
  c.positive("protocol.rtol", pr.rtol, Errc::InvalidParameter);
  c.positive("protocol.atol", pr.atol, Errc::InvalidParameter);
  if (pr.transfer_detunings < 16)
    c.add(Errc::InvalidParameter, "protocol.transfer_detunings",
          "need >= 16 detunings");
  if (pr.series_samples < 2)
    c.add(Errc::InvalidParameter, "protocol.series_samples", "need >= 2");

  return std::move(c.issues);
}

bool has_errors(const std::vector<Issue>& issues) noexcept {
  for (const auto& i : issues)
    if (i.severity == Severity::Error) return true;
  return false;
}

const Scenario& validate(const Scenario& s) {
  const auto issues = check(s);
  if (!has_errors(issues)) return s;
  std::ostringstream msg;
  bool first = true;
  for (const auto& i : issues) {
    if (i.severity != Severity::Error) continue;
    if (!first) msg << "; ";
    first = false;
    msg << i.field << " [" << to_string(i.code) << "] " << i.message;
  }
  throw Error(Errc::ValidationFailed, msg.str());
}

// ---------------------------------------------------------------------------
// Field registry shared by JSON I/O and command-line overrides

namespace {

enum class FieldKind { Real, Integer, Text };

struct Field {
  std::string_view path;
  FieldKind kind;
  std::function<json(const Scenario&)> get;
  std::function<void(Scenario&, const json&)> set;
};

template <class Access>
Field real(std::string_view path, Access access) {
  return {path, FieldKind::Real,
          [access](const Scenario& s) {
            return json(access(const_cast<Scenario&>(s)));
          },
          [access](Scenario& s, const json& v) {
            access(s) = v.get<double>();
          }};
}

template <class Access>
Field integer(std::string_view path, Access access) {
  return {path, FieldKind::Integer,
          [access](const Scenario& s) {
            return json(access(const_cast<Scenario&>(s)));
          },
          [access](Scenario& s, const json& v) {
            if (v.is_number_float()) {
              const double d = v.get<double>();
              if (d != std::floor(d))
                throw Error(Errc::InvalidParameter, "expected an integer");
              access(s) = static_cast<int>(d);
            } else {
              access(s) = v.get<int>();
            }
          }};
}

template <class Access, class ToString, class FromString>
Field text(std::string_view path, Access access, ToString to, FromString from) {
  return {path, FieldKind::Text,
          [access, to](const Scenario& s) {
            return json(std::string(to(access(const_cast<Scenario&>(s)))));
          },
          [access, from](Scenario& s, const json& v) {
            access(s) = from(v.get<std::string>());
          }};
}

#define SV_REAL(path, member) \
  real(path, [](Scenario& s) -> double& { return s.member; })
#define SV_INT(path, member) \
  integer(path, [](Scenario& s) -> int& { return s.member; })

const std::vector<Field>& registry() {
  static const std::vector<Field> fields = [] {
    auto bound = [](WallBoundary b) { return to_string(b); };
    auto kind = [](PulseKind k) { return to_string(k); };
    auto source = [](TransferSource t) { return to_string(t); };
    auto echo = [](EchoConvention c) { return to_string(c); };
    auto expo = [](TransferExponent x) { return to_string(x); };
    return std::vector<Field>{
        SV_REAL("comb.peak_width", comb.peak_width),
        SV_REAL("comb.peak_separation", comb.peak_separation),
        SV_REAL("comb.bandwidth", comb.bandwidth),
        SV_REAL("comb.finesse", comb.finesse),
        SV_REAL("ensemble.n_a", ensemble.n_a),
        SV_REAL("ensemble.n_b", ensemble.n_b),
        SV_REAL("ensemble.p_a", ensemble.p_a),
        SV_REAL("ensemble.p_b", ensemble.p_b),
        SV_REAL("ensemble.gamma_p", ensemble.gamma_p),
        SV_REAL("ensemble.gamma_s", ensemble.gamma_s),
        SV_REAL("ensemble.gamma_k", ensemble.gamma_k),
        SV_REAL("ensemble.D_a", ensemble.D_a),
        SV_REAL("ensemble.D_b", ensemble.D_b),
        SV_REAL("ensemble.J", ensemble.J),
        SV_REAL("ensemble.G", ensemble.G),
        SV_REAL("ensemble.delta_bar", ensemble.delta_bar),
        SV_REAL("ensemble.delta_s", ensemble.delta_s),
        SV_REAL("ensemble.delta_k", ensemble.delta_k),
        SV_REAL("ensemble.N_a", ensemble.N_a),
        SV_REAL("ensemble.N_b", ensemble.N_b),
        SV_REAL("cavity.decay_rate", cavity.decay_rate),
        SV_REAL("cavity.coupling_product", cavity.coupling_product),
        SV_REAL("cell.radius", cell.radius),
        text("cell.boundary_alkali",
             [](Scenario& s) -> WallBoundary& { return s.cell.boundary_alkali; },
             bound, wall_boundary_from_string),
        text("cell.boundary_noble",
             [](Scenario& s) -> WallBoundary& { return s.cell.boundary_noble; },
             bound, wall_boundary_from_string),
        text("pulse.kind",
             [](Scenario& s) -> PulseKind& { return s.pulse.kind; }, kind,
             pulse_kind_from_string),
        SV_REAL("pulse.peak_rabi", pulse.peak_rabi),
        SV_REAL("pulse.duration", pulse.duration),
        SV_REAL("pulse.chirp_bandwidth", pulse.chirp_bandwidth),
        SV_REAL("pulse.sech_beta", pulse.sech_beta),
        SV_REAL("pulse.hsh_edge_fraction", pulse.hsh_edge_fraction),
        SV_REAL("repeater.total_distance", repeater.total_distance),
        SV_INT("repeater.link_count", repeater.link_count),
        SV_REAL("repeater.pair_probability", repeater.pair_probability),
        SV_INT("repeater.mode_count", repeater.mode_count),
        SV_INT("repeater.memory_count", repeater.memory_count),
        SV_REAL("repeater.eta_m", repeater.eta_m),
        SV_REAL("repeater.eta_d", repeater.eta_d),
        SV_REAL("repeater.eta_c", repeater.eta_c),
        SV_REAL("repeater.attenuation_length", repeater.attenuation_length),
        SV_REAL("repeater.fiber_speed", repeater.fiber_speed),
        SV_REAL("repeater.source_rate", repeater.source_rate),
        SV_REAL("protocol.storage_sim_duration", protocol.storage_sim_duration),
        SV_REAL("protocol.storage_time", protocol.storage_time),
        SV_INT("protocol.grid_points", protocol.grid_points),
        SV_REAL("protocol.rtol", protocol.rtol),
        SV_REAL("protocol.atol", protocol.atol),
        text("protocol.transfer_source",
             [](Scenario& s) -> TransferSource& {
               return s.protocol.transfer_source;
             },
             source, transfer_source_from_string),
        SV_INT("protocol.transfer_detunings", protocol.transfer_detunings),
        SV_INT("protocol.series_samples", protocol.series_samples),
        text("protocol.echo_convention",
             [](Scenario& s) -> EchoConvention& {
               return s.protocol.echo_convention;
             },
             echo, echo_convention_from_string),
        text("protocol.transfer_exponent",
             [](Scenario& s) -> TransferExponent& {
               return s.protocol.transfer_exponent;
             },
             expo, transfer_exponent_from_string),
    };
  }();
  return fields;
}

#undef SV_REAL
#undef SV_INT

const Field& find_field(std::string_view path) {
  for (const auto& f : registry())
    if (f.path == path) return f;
  throw Error(Errc::UnknownField, "no scenario field '" + std::string(path) + "'");
}

std::pair<std::string, std::string> split_path(std::string_view path) {
  const auto dot = path.find('.');
  return {std::string(path.substr(0, dot)), std::string(path.substr(dot + 1))};
}

}  // namespace

json to_json(const Scenario& s) {
  json doc;
  doc["schema_version"] = s.schema_version;
  for (const auto& f : registry()) {
    auto [section, key] = split_path(f.path);
    doc[section][key] = f.get(s);
  }
  return doc;
}

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object())
    throw Error(Errc::InvalidParameter, "scenario must be a JSON object");
  if (!doc.contains("schema_version"))
    throw Error(Errc::InvalidParameter, "missing mandatory schema_version");
  Scenario s = canonical_scenario();
  s.schema_version = doc.at("schema_version").get<int>();
  if (s.schema_version != kSchemaVersion)
    throw Error(Errc::InvalidParameter,
                "unsupported schema_version " + std::to_string(s.schema_version));
  for (const auto& [section, body] : doc.items()) {
    if (section == "schema_version") continue;
    if (!body.is_object())
      throw Error(Errc::InvalidParameter,
                  "section '" + section + "' must be an object");
    for (const auto& [key, value] : body.items()) {
      const auto& f = find_field(section + "." + key);
      try {
        f.set(s, value);
      } catch (const json::exception& ex) {
        throw Error(Errc::InvalidParameter,
                    std::string(f.path) + ": " + ex.what());
      }
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(Errc::ConfigNotFound,
                "cannot open scenario file '" + path.string() + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& ex) {
    throw Error(Errc::InvalidParameter,
                "malformed scenario '" + path.string() + "': " + ex.what());
  }
  return scenario_from_json(doc);
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out)
    throw Error(Errc::ComputeFailed, "cannot write '" + path.string() + "'");
  out << to_json(s).dump(2) << '\n';
}

std::vector<std::string> field_paths() {
  std::vector<std::string> out;
  for (const auto& f : registry()) out.emplace_back(f.path);
  return out;
}

json get_field(const Scenario& s, std::string_view path) {
  return find_field(path).get(s);
}

void set_field(Scenario& s, std::string_view path, std::string_view value) {
  const auto& f = find_field(path);
  json v;
  if (f.kind == FieldKind::Text) {
    v = std::string(value);
  } else {
    double d = 0.0;
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, d);
    if (ec != std::errc() || ptr != end)
      throw Error(Errc::InvalidParameter, std::string(path) +
                                              ": not a number '" +
                                              std::string(value) + "'");
    v = d;
  }
  f.set(s, v);

  auto& comb = s.comb;
  if (path == "comb.finesse" || path == "comb.peak_separation")
    comb.peak_width = comb.peak_separation / comb.finesse;
  else if (path == "comb.peak_width")
    comb.finesse = comb.peak_separation / comb.peak_width;
}

}  // namespace spinvault
