#pragma once

#include <string>
#include <vector>

#include "peaks/special.hpp"

namespace peaks {

// A sampled positive radial function on a uniform grid [0, rmax], together
// with its derivative, the ODE-supplied second derivative (used as Hermite
// slope data for the derivative), and a fitted exponential tail
// u(r) ~ amp * r^power * exp(-rate*r) used beyond rmax.
struct RadialProfile {
  std::vector<double> r;    // strictly increasing, r[0] = 0, uniform spacing
  std::vector<double> u;    // u(r) > 0 on [0, rmax)
  std::vector<double> du;   // u'(r), du[0] = 0
  std::vector<double> d2u;  // u''(r) from the defining ODE (Hermite slopes for du)

  LogLinFit decay;          // fitted on [fit_lo, fit_hi]
  double fit_lo = 0.0;
  double fit_hi = 0.0;
  double tail_tol = 0.0;    // stored tolerance the tail fit residual satisfies

  double h() const { return r.size() > 1 ? r[1] - r[0] : 0.0; }
  double rmax() const { return r.empty() ? 0.0 : r.back(); }

  // Cubic Hermite interpolation inside the grid, fitted decay form beyond.
  double value(double rr) const;
  double deriv(double rr) const;
  // Derivative of the u' interpolant (consistent second derivative).
  double second(double rr) const;

  // Checks monotonicity/positivity structure; returns false with a reason.
  bool check_invariants(std::string* why = nullptr) const;
};

// Least-squares fit of log u over [win_lo, win_hi] against
// log u = log C + a log r - b r. Throws DegenerateWindow on < 8 samples.
LogLinFit fit_decay(const RadialProfile& p, double win_lo, double win_hi);

// Plain-text profile cache. Format: one header line
//   q=<v> tol=<v> rmax=<v> u0=<v>
// followed by one "r u du" row per node, all in %.17g.
void save_profile_cache(const std::string& path, double q, double tol,
                        const RadialProfile& p);
struct ProfileCacheHeader {
  double q, tol, rmax, u0;
};
bool load_profile_cache(const std::string& path, ProfileCacheHeader* hdr,
                        RadialProfile* p);

}  // namespace peaks
