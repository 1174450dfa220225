#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>

#include <Eigen/Core>

#include "spinvault/core/error.hpp"

namespace spinvault::ode {

struct Tolerances {
  double rtol = 1e-6;
  double atol = 1e-10;
};

struct StepControl {
  double initial_step = 0.0;  // <= 0: pick automatically
  double max_step = std::numeric_limits<double>::infinity();
  double min_step = 0.0;      // absolute floor, StiffnessBailout below it
  std::size_t max_steps = 50'000'000;
};

struct Stats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_calls = 0;
  double last_step = 0.0;
};

/// Adaptive Dormand-Prince 5(4) integrator with FSAL and a PI step
/// controller. `Vec` is an Eigen vector (real or complex); `Rhs` has the
/// signature void(double t, const Vec& y, Vec& dydt).
///
/// The error norm is the RMS over components of
/// |err_i| / (atol + rtol * max(|y_i|, |y_new_i|)).
template <class Vec>
class DormandPrince {
 public:
  DormandPrince(Tolerances tol, StepControl control = {})
      : tol_(tol), control_(control) {}

  /// Advances y from t0 to t1 in place. Calls `observer(t, y)` after every
  /// accepted step when provided.
  template <class Rhs, class Observer>
  void integrate(Rhs&& rhs, Vec& y, double t0, double t1, Observer&& observer);

  template <class Rhs>
  void integrate(Rhs&& rhs, Vec& y, double t0, double t1) {
    integrate(std::forward<Rhs>(rhs), y, t0, t1, [](double, const Vec&) {});
  }

  const Stats& stats() const noexcept { return stats_; }

  /// Step size to resume with on a following integrate() call.
  double suggested_step() const noexcept { return h_next_; }
  void set_initial_step(double h) noexcept { control_.initial_step = h; }

 private:
  template <class Rhs>
  double initial_step(Rhs& rhs, const Vec& y, const Vec& f0, double t0,
                      double span);

  double error_norm(const Vec& err, const Vec& y0, const Vec& y1) const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < err.size(); ++i) {
      const double scale = tol_.atol + tol_.rtol * std::max(std::abs(y0[i]),
                                                            std::abs(y1[i]));
      const double r = std::abs(err[i]) / scale;
      acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(std::max<Eigen::Index>(1, err.size())));
  }

  Tolerances tol_;
  StepControl control_;
  Stats stats_;
  double h_next_ = 0.0;
  Vec k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, y_new_, err_;
};

template <class Vec>
template <class Rhs>
double DormandPrince<Vec>::initial_step(Rhs& rhs, const Vec& y, const Vec& f0,
                                        double t0, double span) {
  // Hairer, Norsett & Wanner starting-step heuristic.
  double d0 = 0.0, d1 = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double sc = tol_.atol + tol_.rtol * std::abs(y[i]);
    d0 += std::norm(y[i]) / (sc * sc);
    d1 += std::norm(f0[i]) / (sc * sc);
  }
  const double n = static_cast<double>(std::max<Eigen::Index>(1, y.size()));
  d0 = std::sqrt(d0 / n);
  d1 = std::sqrt(d1 / n);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / d1;
  h0 = std::min(h0, span);

  tmp_ = y + h0 * f0;
  rhs(t0 + h0, tmp_, k2_);
  ++stats_.rhs_calls;
  double d2 = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double sc = tol_.atol + tol_.rtol * std::abs(y[i]);
    d2 += std::norm(k2_[i] - f0[i]) / (sc * sc);
  }
  d2 = std::sqrt(d2 / n) / h0;
  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6 * span, h0 * 1e-3)
                                : std::pow(0.01 / dm, 1.0 / 5.0);
  return std::min({100.0 * h0, h1, span});
}

template <class Vec>
template <class Rhs, class Observer>
void DormandPrince<Vec>::integrate(Rhs&& rhs, Vec& y, double t0, double t1,
                                   Observer&& observer) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double span = t1 - t0;
  if (!(span > 0.0)) return;

  for (Vec* k : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_}) k->resize(y.size());
  rhs(t0, y, k1_);
  ++stats_.rhs_calls;

  double h = control_.initial_step > 0.0 ? control_.initial_step
                                         : initial_step(rhs, y, k1_, t0, span);
  h = std::min(h, control_.max_step);

  double t = t0;
  double err_prev = 1e-4;
  bool last_rejected = false;

  while (t < t1) {
    if (stats_.accepted + stats_.rejected >= control_.max_steps)
      throw Error(Errc::IntegratorFailure,
                  "step budget exhausted at t = " + std::to_string(t));
    if (h < control_.min_step)
      throw Error(Errc::StiffnessBailout,
                  "step " + std::to_string(h) + " s below floor at t = " +
                      std::to_string(t));
    if (t + h == t)
      throw Error(Errc::IntegratorFailure,
                  "step underflow at t = " + std::to_string(t));

    // The proposal h survives a truncated final step so a following
    // integrate() call can resume with it.
    const bool final_step = t + h >= t1;
    const double hs = final_step ? t1 - t : h;

    tmp_ = y + hs * (a21 * k1_);
    rhs(t + c2 * hs, tmp_, k2_);
    tmp_ = y + hs * (a31 * k1_ + a32 * k2_);
    rhs(t + c3 * hs, tmp_, k3_);
    tmp_ = y + hs * (a41 * k1_ + a42 * k2_ + a43 * k3_);
    rhs(t + c4 * hs, tmp_, k4_);
    tmp_ = y + hs * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
    rhs(t + c5 * hs, tmp_, k5_);
    tmp_ = y + hs * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ +
                     a65 * k5_);
    rhs(t + hs, tmp_, k6_);
    y_new_ = y + hs * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
    rhs(t + hs, y_new_, k7_);
    stats_.rhs_calls += 6;

    err_ = hs * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ +
                 e7 * k7_);
    const double err = error_norm(err_, y, y_new_);

    if (!std::isfinite(err))
      throw Error(Errc::IntegratorFailure,
                  "non-finite error estimate at t = " + std::to_string(t));

    if (err <= 1.0) {
      // PI controller, factor clamped to [0.2, 5].
      double fac = err == 0.0
                       ? 5.0
                       : 0.9 * std::pow(err, -0.17) * std::pow(err_prev, 0.04);
      fac = std::clamp(fac, 0.2, 5.0);
      if (last_rejected) fac = std::min(fac, 1.0);
      err_prev = std::max(err, 1e-4);

      t = final_step ? t1 : t + hs;
      y.swap(y_new_);
      k1_.swap(k7_);
      ++stats_.accepted;
      stats_.last_step = hs;
      observer(t, y);
      last_rejected = false;
      if (!final_step) h = std::min(hs * fac, control_.max_step);
    } else {
      h = hs * std::max(0.2, 0.9 * std::pow(err, -0.2));
      ++stats_.rejected;
      last_rejected = true;
    }
  }
  h_next_ = h;
}

}  // namespace spinvault::ode
