#include "spinvault/afc/analytics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "spinvault/core/error.hpp"

namespace spinvault::afc {

namespace {

constexpr double pi = std::numbers::pi;

void require(bool ok, const char* what) {
  if (!ok) throw Error(Errc::InvalidParameter, what);
}

// 8-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr std::array<double, 4> kGlNodes{0.1834346424956498, 0.5255324099163290,
                                         0.7966664774136267, 0.9602898564975363};
constexpr std::array<double, 4> kGlWeights{
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
    0.1012285362903763};

double rabi_response(double rabi, double detuning, double duration) {
  const double w2 = rabi * rabi + detuning * detuning;
  if (w2 == 0.0) return 0.0;
  const double s = std::sin(0.5 * std::sqrt(w2) * duration);
  return rabi * rabi / w2 * s * s;
}

double square_band_average(double duration, double rabi, double bandwidth) {
  // Symmetric in the detuning: integrate [0, Gamma/2]. Panels resolve the
  // sin^2 oscillation, whose period in detuning is ~ 2 pi / T.
  const double half = 0.5 * bandwidth;
  const int panels = static_cast<int>(
      std::clamp(std::ceil(4.0 * half * duration / pi), 64.0, 1e6));
  const double width = half / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * width;
    for (std::size_t k = 0; k < kGlNodes.size(); ++k) {
      const double dx = 0.5 * width * kGlNodes[k];
      acc += kGlWeights[k] * (rabi_response(rabi, mid - dx, duration) +
                              rabi_response(rabi, mid + dx, duration));
    }
  }
  return acc * 0.5 * width / half;
}

}  // namespace

double cavity_reflection(double kappa, double absorption_rate) {
  if (!(kappa > 0.0))
    throw Error(Errc::NonPositiveKappa, "cavity decay rate must be > 0");
  require(absorption_rate >= 0.0, "absorption rate must be >= 0");
  return (kappa - absorption_rate) / (kappa + absorption_rate);
}

double absorption_rate(double atom_number, double coupling_product,
                       double bandwidth) {
  require(atom_number > 0.0 && coupling_product > 0.0 && bandwidth > 0.0,
          "absorption_rate needs positive inputs");
  return atom_number * coupling_product * coupling_product / bandwidth;
}

double cooperativity(double atom_number, double coupling, double kappa,
                     double bandwidth) {
  require(atom_number > 0.0 && coupling >= 0.0 && kappa > 0.0 &&
              bandwidth > 0.0,
          "cooperativity needs positive inputs");
  return atom_number * coupling * coupling / (kappa * bandwidth);
}

double collective_coupling(double polarization, double density,
                           double coupling_product) {
  require(polarization >= 0.0 && density >= 0.0,
          "collective coupling needs non-negative inputs");
  return std::sqrt(polarization * density) * coupling_product;
}

double dephasing_factor(double finesse) {
  if (!(finesse >= 1.0))
    throw Error(Errc::FinesseTooSmall, "finesse must be >= 1");
  if (std::isinf(finesse)) return 1.0;
  const double x = pi / finesse;
  const double sinc = std::sin(x) / x;
  return sinc * sinc;
}

int multimode_capacity(double bandwidth, double separation) {
  require(separation > 0.0 && bandwidth >= separation,
          "multimode capacity needs Gamma >= Delta > 0");
  return static_cast<int>(std::floor(2.0 * bandwidth / (5.0 * separation)));
}

double comb_rephasing_time(double separation, EchoConvention convention) {
  require(separation > 0.0, "comb separation must be > 0");
  return convention == EchoConvention::AngularSeparation
             ? kTwoPi / to_angular(separation)
             : kTwoPi / separation;
}

EchoTiming echo_delay(double pulse_duration, double exchange_duration,
                      double separation, EchoConvention convention) {
  require(pulse_duration >= 0.0 && exchange_duration >= 0.0,
          "stage durations must be >= 0");
  EchoTiming out;
  out.rephasing = comb_rephasing_time(separation, convention);
  out.delay = 2.0 * pulse_duration + 2.0 * exchange_duration + out.rephasing;
  out.convention = convention;
  return out;
}

double transfer_coefficient(PulseKind kind, TransferExponent convention) {
  switch (kind) {
    case PulseKind::ChirpedSech:
      return convention == TransferExponent::Literal ? pi : pi * pi;
    case PulseKind::HSH:
      return convention == TransferExponent::Literal ? pi / 2.0 : pi * pi;
    case PulseKind::SquarePi:
      break;
  }
  throw Error(Errc::InvalidParameter,
              "square pulses have no adiabatic transfer coefficient");
}

double transfer_efficiency_analytic(PulseKind kind, double duration,
                                    double peak_rabi, double bandwidth,
                                    TransferExponent convention) {
  require(duration > 0.0 && peak_rabi >= 0.0 && bandwidth > 0.0,
          "transfer efficiency needs T, Gamma > 0 and Omega >= 0");
  if (kind == PulseKind::SquarePi)
    return square_band_average(duration, peak_rabi, bandwidth);
  const double a = transfer_coefficient(kind, convention);
  return -std::expm1(-a * duration * peak_rabi * peak_rabi / bandwidth);
}

double exchange_duration(double J, double gamma_s) {
  require(J > 0.0 && gamma_s >= 0.0, "exchange needs J > 0, gamma_s >= 0");
  if (gamma_s >= pi * J)
    throw Error(Errc::OverdampedExchange,
                "gamma_s >= pi J: no coherent half swap");
  return (pi * J - gamma_s) / (2.0 * J * J);
}

double exchange_efficiency_analytic(double gamma_s, double J,
                                    ExchangeLegs legs) {
  require(J > 0.0 && gamma_s >= 0.0, "exchange needs J > 0, gamma_s >= 0");
  const double one_way = std::exp(-pi * gamma_s / (2.0 * J));
  return legs == ExchangeLegs::OneWay ? one_way : one_way * one_way;
}

EfficiencyBreakdown memory_efficiency_total(const PulseSpec& pulse,
                                            const CombParams& comb,
                                            const EnsembleParams& ensemble) {
  const double transfer = transfer_efficiency_analytic(
      pulse.kind, pulse.duration, pulse.peak_rabi, comb.bandwidth,
      TransferExponent::TotalEfficiency);
  return EfficiencyBreakdown::compose(
      transfer, transfer,
      exchange_efficiency_analytic(ensemble.gamma_s, ensemble.J,
                                   ExchangeLegs::RoundTrip),
      dephasing_factor(comb.finesse));
}

double time_bandwidth_product(double storage_time, double bandwidth) {
  require(storage_time > 0.0 && bandwidth > 0.0,
          "time-bandwidth product needs positive inputs");
  return storage_time * bandwidth;
}

double multiplexed_success(double probability, long long modes) {
  require(probability >= 0.0 && probability <= 1.0 && modes >= 1,
          "multiplexed success needs P in [0,1] and N >= 1");
  if (probability == 1.0) return 1.0;
  return -std::expm1(static_cast<double>(modes) * std::log1p(-probability));
}

}  // namespace spinvault::afc
