#include "spinvault/repeater/model.hpp"

#include <cmath>
#include <bit>
#include <numbers>

#include "spinvault/afc/analytics.hpp"
#include "spinvault/core/error.hpp"

namespace spinvault::repeater {

namespace {

constexpr double kMetersPerKm = 1e3;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::InvalidParameter, what);
}

bool efficiency(double x) { return x > 0.0 && x <= 1.0; }

struct Bracket {
  double lo;  // last point where the predicate held
  double hi;  // first point where it failed
};

template <class F>
Bracket bisect(F&& holds, double lo, double hi, double resolution) {
  // holds(lo) is true and holds(hi) false on entry.
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? lo : hi) = mid;
  }
  return {lo, hi};
}

double best_log_rate(const RepeaterConfig& cfg, double distance,
                     const std::vector<int>& candidates) {
  return log_repeater_rate(
      cfg.with(distance, optimal_links(distance, cfg, candidates)));
}

}  // namespace

RepeaterConfig RepeaterConfig::from_scenario(const Scenario& s) {
  const auto& r = s.repeater;
  RepeaterConfig c;
  c.total_distance = r.total_distance;
  c.link_count = r.link_count;
  c.pair_probability = r.pair_probability;
  c.mode_count = r.mode_count > 0
                     ? r.mode_count
                     : afc::multimode_capacity(s.comb.bandwidth,
                                               s.comb.peak_separation);
  c.memory_count = r.memory_count;
  c.eta_m = r.eta_m;
  c.eta_d = r.eta_d;
  c.eta_c = r.eta_c;
  c.attenuation_length = r.attenuation_length;
  c.fiber_speed = r.fiber_speed;
  c.source_rate = r.source_rate;
  c.interface_delay = std::numbers::pi / (2.0 * s.ensemble.J);
  return c;
}

int nesting_level(int links) {
  if (links < 2 || (links & (links - 1)) != 0)
    throw Error(Errc::DegenerateLink,
                "link count must be a power of two >= 2, got " +
                    std::to_string(links));
  return std::countr_zero(static_cast<unsigned>(links));
}

void validate(const RepeaterConfig& cfg) {
  nesting_level(cfg.link_count);
  require(cfg.total_distance > 0.0, "total distance must be positive");
  require(cfg.pair_probability > 0.0 && cfg.pair_probability < 1.0,
          "pair probability must lie in (0, 1)");
  require(cfg.mode_count >= 1.0, "mode count must be >= 1");
  require(cfg.memory_count >= 1.0, "memory count must be >= 1");
  require(efficiency(cfg.eta_m) && efficiency(cfg.eta_d) &&
              efficiency(cfg.eta_c),
          "efficiencies must lie in (0, 1]");
  require(cfg.attenuation_length > 0.0, "attenuation length must be positive");
  require(cfg.fiber_speed > 0.0, "fiber speed must be positive");
  require(cfg.interface_delay >= 0.0, "interface delay must be >= 0");
}

double transmission_efficiency(double elementary_length,
                               double attenuation_length) {
  require(elementary_length >= 0.0 && attenuation_length > 0.0,
          "transmission needs L0 >= 0 and L_att > 0");
  return std::exp(-elementary_length / (2.0 * attenuation_length));
}

LinkBudget LinkBudget::from_config(const RepeaterConfig& cfg) {
  return {cfg.total_distance / cfg.link_count,
          cfg.pair_probability,
          cfg.mode_count,
          cfg.eta_m,
          cfg.eta_d,
          cfg.eta_c,
          cfg.attenuation_length,
          cfg.fiber_speed,
          cfg.interface_delay};
}

double total_time(const LinkBudget& b, int nesting) {
  require(nesting >= 0, "nesting level must be >= 0");
  const double eta = b.eta_m * b.eta_d;
  const double eta_t = transmission_efficiency(b.elementary_length,
                                               b.attenuation_length);
  const double cycle =
      b.elementary_length * kMetersPerKm / b.fiber_speed + b.interface_delay;
  double product = 1.0;
  for (int k = 1; k <= nesting; ++k) {
    const double two_k = std::ldexp(1.0, k);
    product *= two_k * (two_k - 1.0) * eta;
  }
  return cycle * std::pow(3.0, nesting + 1) /
         (b.mode_count * b.pair_probability * b.eta_c * b.eta_d * eta_t *
          std::pow(eta, nesting + 2)) *
         product;
}

double log_total_time(const LinkBudget& b, int nesting) {
  require(nesting >= 0, "nesting level must be >= 0");
  const double log_eta = std::log(b.eta_m) + std::log(b.eta_d);
  const double cycle =
      b.elementary_length * kMetersPerKm / b.fiber_speed + b.interface_delay;
  double acc = std::log(cycle) + (nesting + 1) * std::log(3.0);
  acc -= std::log(b.mode_count) + std::log(b.pair_probability) +
         std::log(b.eta_c) + std::log(b.eta_d);
  acc += b.elementary_length / (2.0 * b.attenuation_length);
  acc -= (nesting + 2) * log_eta;
  for (int k = 1; k <= nesting; ++k) {
    const double two_k = std::ldexp(1.0, k);
    acc += k * std::numbers::ln2 + std::log(two_k - 1.0) + log_eta;
  }
  return acc;
}

double total_time(const RepeaterConfig& cfg) {
  validate(cfg);
  return total_time(LinkBudget::from_config(cfg), nesting_level(cfg.link_count));
}

double log_total_time(const RepeaterConfig& cfg) {
  validate(cfg);
  return log_total_time(LinkBudget::from_config(cfg),
                        nesting_level(cfg.link_count));
}

double log_repeater_rate(const RepeaterConfig& cfg) {
  return std::log(cfg.memory_count) - log_total_time(cfg);
}

double repeater_rate(const RepeaterConfig& cfg) {
  return std::exp(log_repeater_rate(cfg));
}

double direct_rate(double distance, double source_rate,
                   double attenuation_length, bool include_detector,
                   double eta_d) {
  require(distance >= 0.0 && source_rate > 0.0 && attenuation_length > 0.0,
          "direct rate needs L >= 0, source rate > 0 and L_att > 0");
  const double rate = source_rate * std::exp(-distance / attenuation_length);
  return include_detector ? rate * eta_d : rate;
}

int optimal_links(double distance, const RepeaterConfig& cfg,
                  const std::vector<int>& candidates) {
  if (candidates.empty())
    throw Error(Errc::InvalidParameter, "no candidate link counts");
  int best = 0;
  double best_rate = -INFINITY;
  for (int links : candidates) {
    const double r = log_repeater_rate(cfg.with(distance, links));
    if (r > best_rate || (r == best_rate && links < best)) {
      best = links;
      best_rate = r;
    }
  }
  return best;
}

double crossover_distance(const RepeaterConfig& cfg, double source_rate,
                          const std::vector<int>& candidates,
                          SearchRange range) {
  auto direct_wins = [&](double L) {
    return best_log_rate(cfg, L, candidates) <
           std::log(direct_rate(L, source_rate, cfg.attenuation_length));
  };
  if (!direct_wins(range.lo)) return range.lo;
  if (direct_wins(range.hi))
    throw Error(Errc::NoCrossover,
                "repeater never beats direct transmission below " +
                    std::to_string(range.hi) + " km");
  return bisect(direct_wins, range.lo, range.hi, 0.1).hi;
}

double max_distance(const RepeaterConfig& cfg, double storage_time,
                    const std::vector<int>& candidates, SearchRange range) {
  require(storage_time > 0.0, "storage time must be positive");
  const double log_budget = std::log(storage_time);
  auto fits = [&](double L) {
    return log_total_time(cfg.with(L, optimal_links(L, cfg, candidates))) <=
           log_budget;
  };
  if (!fits(range.lo))
    throw Error(Errc::NeverReachable,
                "total time exceeds the storage time already at " +
                    std::to_string(range.lo) + " km");
  if (fits(range.hi)) return range.hi;
  return bisect(fits, range.lo, range.hi, 1.0).lo;
}

double switch_distance(const RepeaterConfig& cfg, int fewer, int more,
                       SearchRange range) {
  auto fewer_wins = [&](double L) {
    return log_repeater_rate(cfg.with(L, fewer)) >=
           log_repeater_rate(cfg.with(L, more));
  };
  if (!fewer_wins(range.lo) || fewer_wins(range.hi))
    throw Error(Errc::NoCrossover,
                std::to_string(more) + " links never overtake " +
                    std::to_string(fewer) + " inside the search range");
  return bisect(fewer_wins, range.lo, range.hi, 0.1).hi;
}

double calibrate_pair_probability(const RepeaterConfig& cfg, double target,
                                  const std::vector<int>& candidates) {
  // The rate is proportional to p, so the crossover falls as p grows.
  auto crossover_beyond = [&](double log_p) {
    RepeaterConfig c = cfg;
    c.pair_probability = std::exp(log_p);
    auto direct_wins = [&](double L) {
      return best_log_rate(c, L, candidates) <
             std::log(direct_rate(L, c.source_rate, c.attenuation_length));
    };
    return direct_wins(target);
  };
  double lo = std::log(1e-12), hi = std::log(0.999);
  if (!crossover_beyond(lo) || crossover_beyond(hi))
    throw Error(Errc::NoCrossover,
                "no pair probability puts the crossover at " +
                    std::to_string(target) + " km");
  return std::exp(bisect(crossover_beyond, lo, hi, 1e-12).hi);
}

RateCurve repeater_curve(const RepeaterConfig& cfg, int links,
                         const std::vector<double>& distances) {
  RateCurve c{distances, {}, "repeater-" + std::to_string(links) + "-links"};
  c.rates.reserve(distances.size());
  for (double L : distances) c.rates.push_back(repeater_rate(cfg.with(L, links)));
  return c;
}

RateCurve direct_curve(const RepeaterConfig& cfg,
                       const std::vector<double>& distances,
                       bool include_detector) {
  RateCurve c{distances, {}, "direct"};
  c.rates.reserve(distances.size());
  for (double L : distances)
    c.rates.push_back(direct_rate(L, cfg.source_rate, cfg.attenuation_length,
                                  include_detector, cfg.eta_d));
  return c;
}

}  // namespace spinvault::repeater
