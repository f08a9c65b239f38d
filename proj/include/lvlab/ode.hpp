#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

namespace lvlab {

struct OdeOptions {
  double abs_tol = 1e-9;
  double rel_tol = 1e-9;
  double h_init = 1e-3;
  double h_min = 1e-14;
  double h_max = 0.5;
  std::size_t max_steps = 200000;
};

enum class OdeStatus { Reached, Event, StepUnderflow, MaxSteps, Failure };

template <std::size_t N>
struct OdeResult {
  OdeStatus status = OdeStatus::Reached;
  double t = 0.0;
  std::array<double, N> y{};
  std::size_t steps = 0;
  std::string diagnostic;
};

template <std::size_t N>
using State = std::array<double, N>;

namespace detail {

template <std::size_t N>
State<N> axpy(const State<N>& y, double h, std::initializer_list<std::pair<double, const State<N>*>> terms) {
  State<N> out = y;
  for (const auto& [c, k] : terms)
    for (std::size_t i = 0; i < N; ++i) out[i] += h * c * (*k)[i];
  return out;
}

// One Dormand-Prince 5(4) step; returns the 5th order solution and writes the error estimate.
template <std::size_t N, class F>
State<N> dopri_step(F& f, double t, const State<N>& y, const State<N>& k1, double h,
                    State<N>& err, State<N>& k7) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  const State<N> k2 = f(t + c2 * h, axpy<N>(y, h, {{a21, &k1}}));
  const State<N> k3 = f(t + c3 * h, axpy<N>(y, h, {{a31, &k1}, {a32, &k2}}));
  const State<N> k4 = f(t + c4 * h, axpy<N>(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
  const State<N> k5 =
      f(t + c5 * h, axpy<N>(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
  const State<N> k6 =
      f(t + h, axpy<N>(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
  const State<N> y5 =
      axpy<N>(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
  k7 = f(t + h, y5);
  for (std::size_t i = 0; i < N; ++i)
    err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
  return y5;
}

}  // namespace detail

// Adaptive Dormand-Prince integration of y' = f(t, y) from t0 to t1 (t1 may be
// below t0). `event(t, y)` returning true stops the integration; the event time
// is then located by bisection to `event_tol`. `observe(t, y)` sees every
// accepted step. Exceptions thrown by f are reported as Failure.
template <std::size_t N, class F, class Event, class Observe>
OdeResult<N> integrate(F&& f, const State<N>& y0, double t0, double t1, const OdeOptions& opt,
                       Event&& event, Observe&& observe, double event_tol = 1e-12) {
  OdeResult<N> res;
  res.t = t0;
  res.y = y0;
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  double h = dir * std::min(opt.h_init, std::abs(t1 - t0));
  if (h == 0.0) return res;
  double t = t0;
  State<N> y = y0;
  try {
    if (event(t0, y0)) {
      res.status = OdeStatus::Event;
      return res;
    }
    State<N> k1 = f(t0, y0);
    State<N> err{}, k7{};
    observe(t, y);
    while (dir * (t1 - t) > 0.0) {
      if (res.steps >= opt.max_steps) {
        res.status = OdeStatus::MaxSteps;
        res.diagnostic = "step budget exhausted";
        break;
      }
      if (dir * (t + h - t1) > 0.0) h = t1 - t;
      State<N> ynew = detail::dopri_step<N>(f, t, y, k1, h, err, k7);
      double en = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        en = std::max(en, std::abs(err[i]) / sc);
      }
      if (!std::isfinite(en)) en = 1e10;
      if (en <= 1.0) {
        if (event(t + h, ynew)) {
          // bisect on the step length
          double lo = 0.0, hi = h;
          State<N> yhi = ynew;
          State<N> e2{}, k72{};
          while (std::abs(hi - lo) > event_tol * std::max(1.0, std::abs(t))) {
            const double mid = 0.5 * (lo + hi);
            State<N> ym = detail::dopri_step<N>(f, t, y, k1, mid, e2, k72);
            if (event(t + mid, ym)) {
              hi = mid;
              yhi = ym;
            } else {
              lo = mid;
            }
          }
          res.t = t + hi;
          res.y = yhi;
          res.status = OdeStatus::Event;
          ++res.steps;
          observe(res.t, res.y);
          return res;
        }
        t += h;
        y = ynew;
        k1 = k7;
        ++res.steps;
        observe(t, y);
      }
      const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      h *= fac;
      if (std::abs(h) > opt.h_max) h = dir * opt.h_max;
      if (std::abs(h) < opt.h_min) {
        res.status = OdeStatus::StepUnderflow;
        res.diagnostic = "step size underflow";
        res.t = t;
        res.y = y;
        return res;
      }
    }
    res.t = t;
    res.y = y;
  } catch (const std::exception& e) {
    res.status = OdeStatus::Failure;
    res.diagnostic = e.what();
    res.t = t;
    res.y = y;
  }
  return res;
}

template <std::size_t N, class F>
OdeResult<N> integrate(F&& f, const State<N>& y0, double t0, double t1, const OdeOptions& opt) {
  return integrate<N>(std::forward<F>(f), y0, t0, t1, opt, [](double, const State<N>&) { return false; },
                      [](double, const State<N>&) {});
}

}  // namespace lvlab
