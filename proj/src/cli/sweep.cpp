#include "spinvault/cli/sweep.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>

#include "spinvault/afc/analytics.hpp"
#include "spinvault/core/error.hpp"
#include "spinvault/core/parallel.hpp"
#include "spinvault/pde/protocol.hpp"
#include "spinvault/pulse/transfer.hpp"
#include "spinvault/repeater/model.hpp"

namespace spinvault::cli {

namespace {

constexpr std::string_view kJOverGammaS = "J_over_gamma_s";

using Quantity = std::function<double(const Scenario&)>;

double coherence_time(const Scenario& s) { return 1.0 / s.ensemble.gamma_k; }

const std::vector<std::pair<std::string, Quantity>>& registry() {
  static const std::vector<std::pair<std::string, Quantity>> q = {
      {"dephasing_factor",
       [](const Scenario& s) { return afc::dephasing_factor(s.comb.finesse); }},
      {"multimode_capacity",
       [](const Scenario& s) {
         return static_cast<double>(afc::multimode_capacity(
             s.comb.bandwidth, s.comb.peak_separation));
       }},
      {"transfer_efficiency_analytic",
       [](const Scenario& s) {
         return afc::transfer_efficiency_analytic(
             s.pulse.kind, s.pulse.duration, s.pulse.peak_rabi,
             s.comb.bandwidth, s.protocol.transfer_exponent);
       }},
      {"transfer_efficiency_numeric",
       [](const Scenario& s) {
         return pulse::transfer_efficiency_numeric(
             s.pulse, s.comb.bandwidth, s.protocol.transfer_detunings, false);
       }},
      {"exchange_efficiency_analytic",
       [](const Scenario& s) {
         return afc::exchange_efficiency_analytic(
             s.ensemble.gamma_s, s.ensemble.J, afc::ExchangeLegs::OneWay);
       }},
      {"exchange_efficiency_numeric",
       [](const Scenario& s) {
         pde::EvolveOptions o;
         o.tolerances = {s.protocol.rtol, s.protocol.atol};
         return pde::exchange_efficiency_numeric(
             s.ensemble, s.cell,
             pde::RadialGrid::make(s.cell.radius, s.protocol.grid_points), o);
       }},
      {"memory_efficiency_total",
       [](const Scenario& s) {
         return afc::memory_efficiency_total(s.pulse, s.comb, s.ensemble).total;
       }},
      {"protocol_efficiency_numeric",
       [](const Scenario& s) { return pde::run_protocol(s).numeric.total; }},
      {"time_bandwidth_product",
       [](const Scenario& s) {
         return afc::time_bandwidth_product(coherence_time(s), s.comb.bandwidth);
       }},
      {"total_time",
       [](const Scenario& s) {
         return repeater::total_time(repeater::RepeaterConfig::from_scenario(s));
       }},
      {"repeater_rate",
       [](const Scenario& s) {
         return repeater::repeater_rate(
             repeater::RepeaterConfig::from_scenario(s));
       }},
      {"direct_rate",
       [](const Scenario& s) {
         return repeater::direct_rate(s.repeater.total_distance,
                                      s.repeater.source_rate,
                                      s.repeater.attenuation_length);
       }},
      {"crossover_distance",
       [](const Scenario& s) {
         const auto c = repeater::RepeaterConfig::from_scenario(s);
         return repeater::crossover_distance(c, c.source_rate);
       }},
      {"optimal_links",
       [](const Scenario& s) {
         const auto c = repeater::RepeaterConfig::from_scenario(s);
         return static_cast<double>(
             repeater::optimal_links(c.total_distance, c));
       }},
      {"max_distance",
       [](const Scenario& s) {
         return repeater::max_distance(
             repeater::RepeaterConfig::from_scenario(s), coherence_time(s));
       }},
  };
  return q;
}

bool is_numeric_field(const std::string& field) {
  const auto paths = field_paths();
  if (std::find(paths.begin(), paths.end(), field) == paths.end()) return false;
  return get_field(canonical_scenario(), field).is_number();
}

}  // namespace

GridAxis parse_grid_axis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos)
    throw Error(Errc::InvalidParameter,
                "grid axis must be field=values, got '" + std::string(text) + "'");
  GridAxis axis{std::string(text.substr(0, eq)), {}};
  if (axis.field != kJOverGammaS && !is_numeric_field(axis.field))
    throw Error(Errc::UnknownField,
                "no numeric scenario field '" + axis.field + "'");
  axis.values = parse_values(text.substr(eq + 1));
  return axis;
}

std::vector<std::string> quantity_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : registry()) names.push_back(name);
  return names;
}

double evaluate_quantity(const Scenario& s, std::string_view name) {
  for (const auto& [n, fn] : registry())
    if (n == name) return fn(s);
  throw Error(Errc::UnknownField, "unknown quantity '" + std::string(name) + "'");
}

void apply_axis_value(Scenario& s, const std::string& field, double value) {
  if (field == kJOverGammaS) {
    s.ensemble.J = value * s.ensemble.gamma_s;
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  set_field(s, field, buf);
}

Table run_sweep(const Scenario& base, const std::vector<GridAxis>& axes,
                const std::vector<std::string>& quantities) {
  if (axes.empty()) throw Error(Errc::EmptyGrid, "sweep needs a grid axis");
  if (quantities.empty())
    throw Error(Errc::EmptyGrid, "sweep needs at least one quantity");
  for (const auto& q : quantities) {
    const auto names = quantity_names();
    if (std::find(names.begin(), names.end(), q) == names.end())
      throw Error(Errc::UnknownField, "unknown quantity '" + q + "'");
  }
  std::size_t total = 1;
  for (const auto& a : axes) {
    if (a.values.empty())
      throw Error(Errc::EmptyGrid, "axis '" + a.field + "' has no values");
    total *= a.values.size();
  }

  // Row i maps to grid indices with the last axis varying fastest.
  auto indices = [&](std::size_t i) {
    std::vector<std::size_t> idx(axes.size());
    for (std::size_t k = axes.size(); k-- > 0;) {
      idx[k] = i % axes[k].values.size();
      i /= axes[k].values.size();
    }
    return idx;
  };

  std::vector<std::vector<double>> results(total);
  parallel_for(total, [&](std::size_t i) {
    Scenario s = base;
    const auto idx = indices(i);
    for (std::size_t k = 0; k < axes.size(); ++k)
      apply_axis_value(s, axes[k].field, axes[k].values[idx[k]]);
    validate(s);
    std::vector<double> row;
    for (const auto& q : quantities) row.push_back(evaluate_quantity(s, q));
    results[i] = std::move(row);
  });

  Table table;
  for (const auto& a : axes) table.columns.push_back(a.field);
  for (const auto& q : quantities) table.columns.push_back(q);
  for (std::size_t i = 0; i < total; ++i) {
    std::vector<Cell> row;
    const auto idx = indices(i);
    for (std::size_t k = 0; k < axes.size(); ++k)
      row.emplace_back(axes[k].values[idx[k]]);
    for (double v : results[i]) row.emplace_back(v);
    table.add_row(std::move(row));
  }
  return table;
}

}  // namespace spinvault::cli
