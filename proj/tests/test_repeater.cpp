#include <doctest.h>

#include <cmath>
#include <random>

#include "spinvault/afc/analytics.hpp"
#include "spinvault/core/error.hpp"
#include "spinvault/repeater/model.hpp"

using namespace spinvault;
using namespace spinvault::repeater;

namespace {

RepeaterConfig canonical() { return RepeaterConfig::from_scenario(canonical_scenario()); }

// Written out longhand from the model definition.
double oracle_total_time(const LinkBudget& b, int n) {
  const double eta = b.eta_m * b.eta_d;
  const double eta_t = std::exp(-b.elementary_length / (2.0 * b.attenuation_length));
  double t = (b.elementary_length * 1e3 / b.fiber_speed + b.interface_delay) *
             std::pow(3.0, n + 1) /
             (b.mode_count * b.pair_probability * b.eta_c * b.eta_d * eta_t *
              std::pow(eta, n + 2));
  for (int k = 1; k <= n; ++k) t *= std::pow(2.0, k) * (std::pow(2.0, k) - 1.0) * eta;
  return t;
}

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::ComputeFailed;
}

}  // namespace

TEST_CASE("configuration resolves memory-side quantities") {
  const auto s = canonical_scenario();
  const auto c = canonical();
  CHECK(c.mode_count == std::floor(2.0 * s.comb.bandwidth / (5.0 * s.comb.peak_separation)));
  CHECK(c.interface_delay == doctest::Approx(M_PI / (2.0 * s.ensemble.J)));
  CHECK(c.memory_count == 100.0);
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("nesting levels") {
  CHECK(nesting_level(2) == 1);
  CHECK(nesting_level(4) == 2);
  CHECK(nesting_level(8) == 3);
  CHECK(nesting_level(1024) == 10);
  for (int bad : {0, 1, 3, 6, -4})
    CHECK(code_of([&] { nesting_level(bad); }) == Errc::DegenerateLink);
  CHECK(code_of([&] { validate(canonical().with(1000, 6)); }) == Errc::DegenerateLink);
}

TEST_CASE("transmission efficiency of one elementary link") {
  CHECK(transmission_efficiency(250.0, 22.0) == doctest::Approx(3.4069e-3).epsilon(1e-4));
  CHECK(transmission_efficiency(0.0, 22.0) == 1.0);
}

TEST_CASE("total time at the reference point") {
  auto c = canonical().with(2000.0, 8);
  c.pair_probability = 0.01;
  const auto b = LinkBudget::from_config(c);
  CHECK(b.elementary_length == 250.0);
  CHECK(total_time(c) == doctest::Approx(oracle_total_time(b, 3)).epsilon(1e-12));
  CHECK(total_time(c) == doctest::Approx(3.820255e5).epsilon(1e-6));
}

TEST_CASE("nesting level zero leaves the empty product") {
  auto b = LinkBudget::from_config(canonical().with(100.0, 2));
  b.elementary_length = 100.0;
  const double eta = b.eta_m * b.eta_d;
  const double expected =
      (100e3 / b.fiber_speed + b.interface_delay) * 3.0 /
      (b.mode_count * b.pair_probability * b.eta_c * b.eta_d *
       transmission_efficiency(100.0, b.attenuation_length) * eta * eta);
  CHECK(total_time(b, 0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(log_total_time(b, 0) == doctest::Approx(std::log(expected)).epsilon(1e-12));
}

TEST_CASE("log and direct evaluation agree") {
  std::mt19937_64 rng(20261016);
  std::uniform_real_distribution<double> L(50.0, 3000.0), p(1e-4, 0.5), eff(0.05, 1.0),
      att(10.0, 40.0);
  std::uniform_int_distribution<int> lvl(1, 4);
  const auto base = canonical();
  for (int i = 0; i < 1000; ++i) {
    auto c = base.with(L(rng), 1 << lvl(rng));
    c.pair_probability = p(rng);
    c.eta_m = eff(rng);
    c.eta_d = eff(rng);
    c.eta_c = eff(rng);
    c.attenuation_length = att(rng);
    const double direct = total_time(c);
    if (!std::isfinite(direct) || direct == 0.0) continue;
    CHECK(log_total_time(c) == doctest::Approx(std::log(direct)).epsilon(1e-12));
    CHECK(repeater_rate(c) == doctest::Approx(c.memory_count / direct).epsilon(1e-10));
  }
}

TEST_CASE("log evaluation survives where the direct product overflows") {
  auto c = canonical().with(200000.0, 4);
  CHECK(std::isinf(total_time(c)));
  const double lt = log_total_time(c);
  CHECK(std::isfinite(lt));
  CHECK(lt > std::log(std::numeric_limits<double>::max()));
  CHECK(log_repeater_rate(c) == doctest::Approx(std::log(c.memory_count) - lt));
}

TEST_CASE("rates fall monotonically with distance") {
  const auto c = canonical();
  for (int links : {2, 4, 8, 16}) {
    double prev = INFINITY;
    for (double L = 100.0; L <= 4000.0; L += 50.0) {
      const double r = log_repeater_rate(c.with(L, links));
      CHECK(r < prev);
      prev = r;
    }
  }
  double prev = INFINITY;
  for (double L = 0.0; L <= 1000.0; L += 25.0) {
    const double r = direct_rate(L, c.source_rate, c.attenuation_length);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("rates improve with every efficiency and resource") {
  const auto c = canonical().with(1500.0, 8);
  const double base = log_repeater_rate(c);
  auto bump = [&](auto member, double factor) {
    auto d = c;
    d.*member *= factor;
    return log_repeater_rate(d);
  };
  CHECK(bump(&RepeaterConfig::eta_m, 1.1) > base);
  CHECK(bump(&RepeaterConfig::eta_d, 1.1) > base);
  CHECK(bump(&RepeaterConfig::eta_c, 1.1) > base);
  CHECK(bump(&RepeaterConfig::pair_probability, 2.0) > base);
  CHECK(bump(&RepeaterConfig::mode_count, 2.0) > base);
  CHECK(bump(&RepeaterConfig::memory_count, 2.0) > base);
  CHECK(bump(&RepeaterConfig::attenuation_length, 1.1) > base);
  CHECK(bump(&RepeaterConfig::interface_delay, 10.0) < base);
}

TEST_CASE("direct transmission") {
  const auto c = canonical();
  CHECK(direct_rate(0.0, 1e10, 22.0) == 1e10);
  CHECK(direct_rate(507.0, 1e10, 22.0) == doctest::Approx(1e10 * std::exp(-507.0 / 22.0)));
  CHECK(direct_rate(507.0, c.source_rate, c.attenuation_length) ==
        doctest::Approx(0.98).epsilon(0.02));
  CHECK(direct_rate(100.0, 1e10, 22.0, true, 0.75) ==
        doctest::Approx(0.75 * direct_rate(100.0, 1e10, 22.0)));
}

TEST_CASE("optimal link count") {
  const auto c = canonical();
  CHECK(optimal_links(800.0, c) == 4);
  CHECK(optimal_links(2000.0, c) == 8);
  CHECK(optimal_links(800.0, c, {8}) == 8);
  // Doubling a memory-independent factor never changes the choice.
  auto d = c;
  d.memory_count *= 2.0;
  for (double L = 200.0; L <= 3000.0; L += 100.0)
    CHECK(optimal_links(L, c) == optimal_links(L, d));
}

TEST_CASE("crossover with direct transmission") {
  const auto c = canonical();
  const double x = crossover_distance(c, c.source_rate);
  CHECK(x == doctest::Approx(507.0).epsilon(0.01));
  // The repeater wins just beyond the crossover and loses just before it.
  auto best = [&](double L) {
    return std::max(log_repeater_rate(c.with(L, 4)), log_repeater_rate(c.with(L, 8)));
  };
  CHECK(best(x + 0.2) >= std::log(direct_rate(x + 0.2, c.source_rate, c.attenuation_length)));
  CHECK(best(x - 0.2) < std::log(direct_rate(x - 0.2, c.source_rate, c.attenuation_length)));

  CHECK(crossover_distance(c, 1e-6) == 100.0);
  CHECK(code_of([&] { crossover_distance(c, 1e300); }) == Errc::NoCrossover);

  auto more = c;
  more.memory_count *= 2.0;
  CHECK(crossover_distance(more, c.source_rate) < x);
  auto better = c;
  better.eta_m = 0.9;
  CHECK(crossover_distance(better, c.source_rate) < x);
}

TEST_CASE("maximum distance for a storage budget") {
  const auto c = canonical();
  double prev = 0.0;
  for (double hours : {1.0, 10.0, 100.0, 1000.0}) {
    const double d = max_distance(c, hours * 3600.0);
    CHECK(d > prev);
    prev = d;
    int links = optimal_links(d, c);
    CHECK(total_time(c.with(d, links)) <= hours * 3600.0);
  }
  CHECK(max_distance(c, 1e300) == 5000.0);
  CHECK(code_of([&] { max_distance(c, 1e-3); }) == Errc::NeverReachable);
}

TEST_CASE("switch distance between link counts") {
  const auto c = canonical();
  const double s = switch_distance(c, 4, 8);
  CHECK(optimal_links(s - 1.0, c) == 4);
  CHECK(optimal_links(s + 1.0, c) == 8);
  CHECK(code_of([&] { switch_distance(c, 4, 8, {100.0, 500.0}); }) == Errc::NoCrossover);
}

TEST_CASE("calibration reproduces the pair probability") {
  auto c = canonical();
  const double target = crossover_distance(c, c.source_rate);
  const double p = calibrate_pair_probability(c, target);
  CHECK(p == doctest::Approx(c.pair_probability).epsilon(1e-3));
  c.pair_probability = calibrate_pair_probability(c, 600.0);
  CHECK(crossover_distance(c, c.source_rate) == doctest::Approx(600.0).epsilon(1e-3));
}

TEST_CASE("rate curves") {
  const auto c = canonical();
  const std::vector<double> L{200.0, 800.0, 2000.0};
  const auto r = repeater_curve(c, 8, L);
  CHECK(r.protocol == "repeater-8-links");
  REQUIRE(r.rates.size() == 3);
  CHECK(r.rates[1] == doctest::Approx(repeater_rate(c.with(800.0, 8))));
  const auto d = direct_curve(c, L);
  CHECK(d.protocol == "direct");
  CHECK(d.rates[0] == doctest::Approx(direct_rate(200.0, c.source_rate, c.attenuation_length)));
}

TEST_CASE("invalid configurations are rejected") {
  auto c = canonical();
  c.pair_probability = 1.5;
  CHECK(code_of([&] { validate(c); }) == Errc::InvalidParameter);
  c = canonical();
  c.eta_m = 0.0;
  CHECK(code_of([&] { validate(c); }) == Errc::InvalidParameter);
  c = canonical();
  c.total_distance = -1.0;
  CHECK(code_of([&] { validate(c); }) == Errc::InvalidParameter);
}
