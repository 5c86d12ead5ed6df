#include "peaks/ode.hpp"

#include <algorithm>
#include <cmath>

#include "peaks/errors.hpp"

namespace peaks {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

}  // namespace

OdeOutcome integrate_dopri5(const Rhs2& rhs, double t0, const State2& y0, double t_end,
                            const OdeOptions& opt, double dt_out,
                            const std::function<void(double, const State2&)>& observer,
                            const std::function<int(double, const State2&)>& event) {
  OdeOutcome out;
  double t = t0;
  State2 y = y0;
  double h_prop = std::min(opt.h_init, opt.h_max);
  State2 k1 = rhs(t, y);
  long next_node = 1;

  while (t < t_end) {
    double t_stop = t_end;
    if (dt_out > 0.0) t_stop = std::min(t_stop, t0 + static_cast<double>(next_node) * dt_out);
    const bool clipped = h_prop >= t_stop - t;
    double h = clipped ? t_stop - t : h_prop;
    if (h < 1e-15) h = 1e-15;

    const State2 k2 = rhs(t + h * a21, {y[0] + h * a21 * k1[0], y[1] + h * a21 * k1[1]});
    State2 yt = {y[0] + h * (a31 * k1[0] + a32 * k2[0]),
                 y[1] + h * (a31 * k1[1] + a32 * k2[1])};
    const State2 k3 = rhs(t + h * (3.0 / 10), yt);
    yt = {y[0] + h * (a41 * k1[0] + a42 * k2[0] + a43 * k3[0]),
          y[1] + h * (a41 * k1[1] + a42 * k2[1] + a43 * k3[1])};
    const State2 k4 = rhs(t + h * (4.0 / 5), yt);
    yt = {y[0] + h * (a51 * k1[0] + a52 * k2[0] + a53 * k3[0] + a54 * k4[0]),
          y[1] + h * (a51 * k1[1] + a52 * k2[1] + a53 * k3[1] + a54 * k4[1])};
    const State2 k5 = rhs(t + h * (8.0 / 9), yt);
    yt = {y[0] + h * (a61 * k1[0] + a62 * k2[0] + a63 * k3[0] + a64 * k4[0] + a65 * k5[0]),
          y[1] + h * (a61 * k1[1] + a62 * k2[1] + a63 * k3[1] + a64 * k4[1] + a65 * k5[1])};
    const State2 k6 = rhs(t + h, yt);
    const State2 ynew = {
        y[0] + h * (b1 * k1[0] + b3 * k3[0] + b4 * k4[0] + b5 * k5[0] + b6 * k6[0]),
        y[1] + h * (b1 * k1[1] + b3 * k3[1] + b4 * k4[1] + b5 * k5[1] + b6 * k6[1])};
    const State2 k7 = rhs(t + h, ynew);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
      const double sc = opt.atol + opt.rtol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / 2.0);

    if (err <= 1.0) {
      t = clipped ? t_stop : t + h;
      y = ynew;
      k1 = k7;  // FSAL
      if (dt_out > 0.0 && clipped &&
          t_stop == t0 + static_cast<double>(next_node) * dt_out && t < t_end) {
        if (observer) observer(t, y);
        ++next_node;
      } else if (dt_out > 0.0 && clipped && t >= t_end && observer &&
                 std::fabs(t - (t0 + static_cast<double>(next_node) * dt_out)) <
                     1e-9 * std::max(1.0, std::fabs(t))) {
        observer(t, y);
        ++next_node;
      }
      if (event) {
        const int code = event(t, y);
        if (code != 0) {
          out.t = t;
          out.y = y;
          out.stop_code = code;
          ++out.steps;
          return out;
        }
      }
      const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-12), -0.2), 0.2, 5.0);
      if (!clipped) {
        h_prop = std::min(h * fac, opt.h_max);
      } else if (fac > 1.0) {
        h_prop = std::min(h_prop, opt.h_max);
      } else {
        h_prop = std::min(h * fac, opt.h_max);
      }
    } else {
      const double fac = std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
      h_prop = h * fac;
    }
    if (++out.steps > opt.max_steps)
      throw NonConvergence("integrate_dopri5: step budget exceeded");
  }
  out.t = t;
  out.y = y;
  return out;
}

}  // namespace peaks
