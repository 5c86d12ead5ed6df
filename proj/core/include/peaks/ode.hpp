#pragma once

#include <array>
#include <functional>

namespace peaks {

using State2 = std::array<double, 2>;
using Rhs2 = std::function<State2(double, const State2&)>;

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-14;
  double h_init = 1e-4;
  double h_max = 0.05;
  long max_steps = 5'000'000;
};

struct OdeOutcome {
  double t = 0.0;
  State2 y{0.0, 0.0};
  int stop_code = 0;  // 0: reached t_end; otherwise the event code
  long steps = 0;
};

// Adaptive Dormand-Prince 5(4). After every accepted step the event callback
// may return a nonzero code to stop. If dt_out > 0, steps are clipped so the
// trajectory lands exactly on t0 + i*dt_out and observer is called there.
OdeOutcome integrate_dopri5(
    const Rhs2& rhs, double t0, const State2& y0, double t_end, const OdeOptions& opt,
    double dt_out = 0.0,
    const std::function<void(double, const State2&)>& observer = nullptr,
    const std::function<int(double, const State2&)>& event = nullptr);

}  // namespace peaks
