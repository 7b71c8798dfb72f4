#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>

#include "hchaos/detail_dop853.hpp"

namespace hchaos {

struct OdeOptions {
  double rtol = 1e-12;
  double atol = 1e-12;
  double min_step = 1e-14;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  // 0 selects automatically
  std::size_t max_steps = 50'000'000;
};

enum class OdeStatus { ok, step_underflow, stopped };

struct OdeReport {
  OdeStatus status = OdeStatus::ok;
  double s_reached = 0.0;  // arclength along the time path that was integrated
  double last_step = 0.0;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
};

/// Adaptive DOP853 along a straight time segment t(s) = t0 + dir * s, s in [0, length].
/// `rhs(y)` returns dy/dt; the integrator advances dy/ds = dir * rhs(y).
/// `observer(s, y)` is called after each accepted step and may return false to stop.
template <typename T, std::size_t N, typename Rhs, typename Observer>
OdeReport integrate_dop853(Rhs&& rhs, std::array<T, N>& y, T dir, double length,
                           const OdeOptions& opt, Observer&& observer) {
  namespace tab = detail::dop853;
  using State = std::array<T, N>;
  OdeReport rep;
  if (length <= 0.0) return rep;

  auto f = [&](const State& x) {
    State d = rhs(x);
    for (auto& v : d) v *= dir;
    return d;
  };
  auto err_scale = [&](const State& a, const State& b, std::size_t i) {
    using std::abs;
    return opt.atol + opt.rtol * std::max(abs(a[i]), abs(b[i]));
  };

  std::array<State, tab::kStages + 1> k;
  k[0] = f(y);

  double h = opt.initial_step;
  if (h <= 0.0) {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      using std::abs;
      const double sc = opt.atol + opt.rtol * abs(y[i]);
      d0 = std::max(d0, abs(y[i]) / sc);
      d1 = std::max(d1, abs(k[0][i]) / sc);
    }
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min({h, length, opt.max_step});
  }

  double s = 0.0;
  constexpr double safety = 0.9;
  constexpr double min_factor = 0.2;
  constexpr double max_factor = 10.0;
  constexpr double order_exp = -1.0 / 8.0;

  while (s < length) {
    if (rep.accepted + rep.rejected > opt.max_steps) {
      rep.status = OdeStatus::step_underflow;
      break;
    }
    bool last = false;
    if (s + h >= length) {
      h = length - s;
      last = true;
    }
    if (h < opt.min_step && !last) {
      rep.status = OdeStatus::step_underflow;
      break;
    }

    for (int st = 1; st < tab::kStages; ++st) {
      State tmp = y;
      for (int j = 0; j < st; ++j) {
        const double a = tab::A[st][j];
        if (a == 0.0) continue;
        for (std::size_t i = 0; i < N; ++i) tmp[i] += (h * a) * k[j][i];
      }
      k[st] = f(tmp);
    }
    State ynew = y;
    for (int j = 0; j < tab::kStages; ++j) {
      const double b = tab::B[j];
      if (b == 0.0) continue;
      for (std::size_t i = 0; i < N; ++i) ynew[i] += (h * b) * k[j][i];
    }
    k[tab::kStages] = f(ynew);

    double e5 = 0.0, e3 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      T s5{}, s3{};
      for (int j = 0; j <= tab::kStages; ++j) {
        s5 += tab::E5[j] * k[j][i];
        s3 += tab::E3[j] * k[j][i];
      }
      using std::abs;
      const double sc = err_scale(y, ynew, i);
      const double r5 = abs(s5) / sc;
      const double r3 = abs(s3) / sc;
      e5 += r5 * r5;
      e3 += r3 * r3;
    }
    double err = 0.0;
    if (e5 > 0.0 || e3 > 0.0) {
      err = h * e5 / std::sqrt((e5 + 0.01 * e3) * static_cast<double>(N));
    }
    if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();

    if (err <= 1.0) {
      s = last ? length : s + h;
      y = ynew;
      k[0] = k[tab::kStages];
      ++rep.accepted;
      rep.last_step = h;
      rep.s_reached = s;
      if (!observer(s, y)) {
        rep.status = OdeStatus::stopped;
        return rep;
      }
      const double fac = err == 0.0 ? max_factor
                                    : std::min(max_factor, safety * std::pow(err, order_exp));
      h = std::min(h * fac, opt.max_step);
    } else {
      ++rep.rejected;
      const double fac = std::max(min_factor, safety * std::pow(err, order_exp));
      h *= fac;
    }
  }
  rep.s_reached = s;
  return rep;
}

}  // namespace hchaos
