#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "spinvault/cli/csv.hpp"
#include "spinvault/core/scenario.hpp"

namespace spinvault::cli {

/// One grid axis: a scenario field (or the pseudo-field J_over_gamma_s,
/// which sets ensemble.J = value * ensemble.gamma_s) and its values.
struct GridAxis {
  std::string field;
  std::vector<double> values;
};

/// "field=min:max:steps" or "field=v1,v2,...". Throws UnknownField for a
/// field that is neither numeric nor the pseudo-field, EmptyGrid for no
/// values.
GridAxis parse_grid_axis(std::string_view text);

/// Names accepted by `quantity`, in a fixed order.
std::vector<std::string> quantity_names();

/// Evaluates one named observable of a validated scenario. Throws
/// UnknownField for an unknown name.
double evaluate_quantity(const Scenario& s, std::string_view name);

void apply_axis_value(Scenario& s, const std::string& field, double value);

/// Cartesian product of the axes, first axis slowest, evaluated in parallel
/// and assembled in grid order. One column per axis, then per quantity.
Table run_sweep(const Scenario& base, const std::vector<GridAxis>& axes,
                const std::vector<std::string>& quantities);

}  // namespace spinvault::cli
