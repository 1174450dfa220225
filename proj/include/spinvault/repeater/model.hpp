#pragma once

#include <string>
#include <vector>

#include "spinvault/core/scenario.hpp"

/// Multiplexed AFC repeater rate model and its distance searches.
namespace spinvault::repeater {

/// Repeater parameters with the memory-side quantities resolved: mode count
/// from the comb capacity when unset, interface delay pi / (2 J).
struct RepeaterConfig {
  double total_distance = 0.0;  // km
  int link_count = 4;
  double pair_probability = 0.0;
  double mode_count = 0.0;
  double memory_count = 1.0;
  double eta_m = 0.0;
  double eta_d = 0.0;
  double eta_c = 0.0;
  double attenuation_length = 0.0;  // km
  double fiber_speed = 0.0;         // m/s
  double source_rate = 0.0;         // Hz
  double interface_delay = 0.0;     // s

  static RepeaterConfig from_scenario(const Scenario& s);

  RepeaterConfig with(double distance, int links) const {
    RepeaterConfig c = *this;
    c.total_distance = distance;
    c.link_count = links;
    return c;
  }
};

/// Throws InvalidParameter on out-of-range values and DegenerateLink when
/// the link count is not a power of two >= 2.
void validate(const RepeaterConfig& cfg);

/// log2(links). Throws DegenerateLink unless links is a power of two >= 2.
int nesting_level(int links);

/// exp(-L0 / (2 L_att)).
double transmission_efficiency(double elementary_length, double attenuation_length);

/// Inputs of the total-time formula at an explicit nesting level.
struct LinkBudget {
  double elementary_length = 0.0;  // L0 (km)
  double pair_probability = 0.0;
  double mode_count = 0.0;
  double eta_m = 0.0;
  double eta_d = 0.0;
  double eta_c = 0.0;
  double attenuation_length = 0.0;  // km
  double fiber_speed = 0.0;         // m/s
  double interface_delay = 0.0;     // s

  static LinkBudget from_config(const RepeaterConfig& cfg);
};

/// T = (L0/c + t_int) 3^(n+1) / (N p eta_c eta_d eta_t eta^(n+2))
///     * prod_{k=1..n} 2^k (2^k - 1) eta,  eta = eta_m eta_d.
/// Evaluated directly. n = 0 leaves the empty product.
double total_time(const LinkBudget& budget, int nesting);

/// log T, accumulated term by term so no intermediate over- or underflows.
double log_total_time(const LinkBudget& budget, int nesting);

double total_time(const RepeaterConfig& cfg);
double log_total_time(const RepeaterConfig& cfg);

/// memory_count / T_tot, evaluated through log T_tot.
double repeater_rate(const RepeaterConfig& cfg);
double log_repeater_rate(const RepeaterConfig& cfg);

/// source_rate exp(-L / L_att), times eta_d when `include_detector`.
double direct_rate(double distance, double source_rate,
                   double attenuation_length, bool include_detector = false,
                   double eta_d = 1.0);

inline const std::vector<int> kDefaultCandidates{4, 8};

/// Candidate with the highest rate at `distance`; ties go to fewer links.
int optimal_links(double distance, const RepeaterConfig& cfg,
                  const std::vector<int>& candidates = kDefaultCandidates);

struct SearchRange {
  double lo = 100.0;   // km
  double hi = 5000.0;  // km
};

/// Smallest distance where the best-candidate repeater rate reaches the
/// direct rate, to 0.1 km. Returns the lower bound when the repeater already
/// wins there; throws NoCrossover when it never wins inside the range.
double crossover_distance(const RepeaterConfig& cfg, double source_rate,
                          const std::vector<int>& candidates = kDefaultCandidates,
                          SearchRange range = {});

/// Largest distance, to 1 km, whose best-candidate total time stays within
/// `storage_time`. Returns the upper bound when every distance fits; throws
/// NeverReachable when even the lower bound does not.
double max_distance(const RepeaterConfig& cfg, double storage_time,
                    const std::vector<int>& candidates = kDefaultCandidates,
                    SearchRange range = {});

/// Distance, to 0.1 km, where `more` links overtake `fewer` links. Throws
/// NoCrossover when the order does not change inside the range.
double switch_distance(const RepeaterConfig& cfg, int fewer, int more,
                       SearchRange range = {});

/// Pair probability that puts the crossover at `target` km, by bisection in
/// log p. Throws NoCrossover when the target is out of reach.
double calibrate_pair_probability(const RepeaterConfig& cfg, double target,
                                  const std::vector<int>& candidates = kDefaultCandidates);

struct RateCurve {
  std::vector<double> distances;  // km
  std::vector<double> rates;      // Hz
  std::string protocol;
};

RateCurve repeater_curve(const RepeaterConfig& cfg, int links,
                         const std::vector<double>& distances);
RateCurve direct_curve(const RepeaterConfig& cfg,
                       const std::vector<double>& distances,
                       bool include_detector = false);

}  // namespace spinvault::repeater
