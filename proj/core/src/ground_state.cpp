#include "peaks/ground_state.hpp"

#include <cmath>
#include <filesystem>

#include "peaks/errors.hpp"
#include "peaks/ode.hpp"
#include "peaks/report.hpp"

namespace peaks {

namespace {

constexpr double kPi = 3.14159265358979323846;

Rhs2 radial_rhs(double q) {
  return [q](double r, const State2& y) -> State2 {
    const double u = y[0];
    const double up = y[1];
    const double f = u - (u > 0.0 ? std::pow(u, q - 1.0) : -std::pow(-u, q - 1.0));
    if (r < 1e-10) return {up, f / 3.0};
    return {up, -2.0 / r * up + f};
  };
}

enum ShotKind { kOvershoot = 1, kUndershoot = 2 };

// Classifies a trial U(0): crossing zero means too large, turning back up
// means too small.
int classify_shot(double u0, double q, double rmax, const OdeOptions& oo) {
  const auto rhs = radial_rhs(q);
  const auto out = integrate_dopri5(
      rhs, 0.0, {u0, 0.0}, rmax, oo, 0.0, nullptr, [](double r, const State2& y) -> int {
        if (y[0] < 0.0) return kOvershoot;
        if (r > 1e-3 && y[1] > 0.0) return kUndershoot;
        return 0;
      });
  return out.stop_code;
}

}  // namespace

GroundStateU solve_classical_ground_state(double q, double tol, const ShootingOptions& opt) {
  if (!(q > 2.0) || !(q < 6.0))
    throw InvalidExponent("solve_classical_ground_state: q must lie in (2,6)");
  if (!(tol > 0.0) || tol > 1e-4)
    throw ValidationError("solve_classical_ground_state: tol must lie in (0, 1e-4]");

  OdeOptions oo;
  oo.rtol = tol / 10.0;
  oo.atol = 1e-15;
  oo.h_max = 0.05;

  // Bracket: below (q/2)^{1/(q-2)} the trajectory has too little energy to
  // reach zero, so it always turns back (undershoot).
  double lo = std::pow(q / 2.0, 1.0 / (q - 2.0)) * (1.0 + 1e-9);
  double hi = 2.0 * lo;
  int guard = 0;
  while (classify_shot(hi, q, opt.rmax, oo) != kOvershoot) {
    hi *= 1.5;
    if (++guard > 60)
      throw NonConvergence("ground state shooting: failed to bracket an overshoot");
  }
  for (int it = 0; it < opt.max_bisections; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval exhausted at double precision
    const int kind = classify_shot(mid, q, opt.rmax, oo);
    if (kind == kOvershoot) {
      hi = mid;
    } else {
      lo = mid;  // undershoot, or no event before rmax
    }
  }
  const double u0 = 0.5 * (lo + hi);
  if (!(hi - lo < 1e-9 * u0))
    throw NonConvergence("ground state shooting: bisection failed to converge");

  // Output grid spacing resolving the steepest (origin) scale of the profile.
  const double ell = 1.0 / std::sqrt(std::max(1.0, (q - 1.0) * std::pow(u0, q - 2.0)));
  double h = std::min(5e-3, ell / 64.0);
  long n = static_cast<long>(std::ceil(opt.rmax / h));
  if (n % 2 != 0) ++n;
  h = opt.rmax / static_cast<double>(n);

  GroundStateU gs;
  gs.q = q;
  gs.tol = tol;
  gs.u0 = u0;
  auto& p = gs.profile;
  p.r.assign(static_cast<std::size_t>(n) + 1, 0.0);
  p.u.assign(p.r.size(), 0.0);
  p.du.assign(p.r.size(), 0.0);
  for (long i = 0; i <= n; ++i) p.r[static_cast<std::size_t>(i)] = h * static_cast<double>(i);
  p.u[0] = u0;
  p.du[0] = 0.0;

  // Final trajectory: series start near the origin, then node-exact stepping.
  const auto rhs = radial_rhs(q);
  const double r0 = 1e-6;
  const double c2 = (u0 - std::pow(u0, q - 1.0)) / 6.0;
  const State2 y = {u0 + c2 * r0 * r0, 2.0 * c2 * r0};
  auto first = integrate_dopri5(rhs, r0, y, h, oo);
  p.u[1] = first.y[0];
  p.du[1] = first.y[1];

  // Splice onto the exact decaying solution C e^{-r}/r of the linearized tail
  // equation once u drops below the threshold; the shooting trajectory is
  // exponentially ill-conditioned past that point.
  double splice_C = -1.0;
  long splice_from = n + 1;
  const double u_splice = opt.splice_threshold;
  integrate_dopri5(
      rhs, h, first.y, opt.rmax, oo, h,
      [&](double r, const State2& yy) {
        const auto i = static_cast<std::size_t>(std::llround(r / h));
        p.u[i] = yy[0];
        p.du[i] = yy[1];
      },
      [&](double r, const State2& yy) -> int {
        if (splice_C < 0.0 && yy[0] < u_splice) {
          splice_C = yy[0] * r * std::exp(r);
          splice_from = static_cast<long>(std::floor(r / h)) + 1;
          return 9;
        }
        return 0;
      });
  if (splice_C < 0.0)
    throw NonConvergence("ground state shooting: trajectory never reached the tail regime");
  for (long i = splice_from; i <= n; ++i) {
    const double r = p.r[static_cast<std::size_t>(i)];
    p.u[static_cast<std::size_t>(i)] = splice_C * std::exp(-r) / r;
    p.du[static_cast<std::size_t>(i)] = -splice_C * std::exp(-r) / r * (1.0 + 1.0 / r);
  }

  // Second derivative from the equation itself (Hermite slope data for u').
  p.d2u.assign(p.r.size(), 0.0);
  p.d2u[0] = (u0 - std::pow(u0, q - 1.0)) / 3.0;
  for (std::size_t i = 1; i < p.r.size(); ++i) {
    p.d2u[i] = p.u[i] - std::pow(p.u[i], q - 1.0) - 2.0 / p.r[i] * p.du[i];
  }

  p.fit_lo = opt.rmax - 10.0;
  p.fit_hi = opt.rmax;
  p.tail_tol = 1e-3;
  p.decay = fit_decay(p, p.fit_lo, p.fit_hi);

  // Norms: composite Simpson over the grid plus the analytic tail.
  std::vector<double> f(p.r.size());
  const double fourpi = 4.0 * kPi;
  for (std::size_t i = 0; i < p.r.size(); ++i) f[i] = p.u[i] * p.u[i] * p.r[i] * p.r[i];
  gs.l2_sq = fourpi * simpson_uniform(f, h) +
             fourpi * radial_tail_integral(p.decay.amp, p.decay.power, p.decay.rate, 2.0,
                                           opt.rmax);
  for (std::size_t i = 0; i < p.r.size(); ++i)
    f[i] = std::pow(p.u[i], q) * p.r[i] * p.r[i];
  gs.lq_q = fourpi * simpson_uniform(f, h) +
            fourpi * radial_tail_integral(p.decay.amp, p.decay.power, p.decay.rate, q,
                                          opt.rmax);
  for (std::size_t i = 0; i < p.r.size(); ++i) f[i] = p.du[i] * p.du[i] * p.r[i] * p.r[i];
  // Tail of int u'^2 r^2: u' = amp e^{-br} r^a (a/r - b), expanded in powers of 1/r.
  {
    const double A2 = p.decay.amp * p.decay.amp;
    const double a2 = 2.0 * p.decay.power;
    const double b2 = 2.0 * p.decay.rate;
    auto piece = [&](double shift) {
      const double s = a2 - shift + 3.0;
      return A2 * std::pow(b2, -s) * upper_incomplete_gamma(s, b2 * opt.rmax);
    };
    const double br = p.decay.rate, aw = p.decay.power;
    const double tail = br * br * piece(0.0) - 2.0 * br * aw * piece(1.0) + aw * aw * piece(2.0);
    gs.grad_l2_sq = fourpi * simpson_uniform(f, h) + fourpi * tail;
  }

  std::string why;
  if (!p.check_invariants(&why))
    throw NonConvergence("ground state profile invariant violated: " + why);
  return gs;
}

std::string profile_cache_path(const std::string& cache_dir, double q, double tol) {
  return cache_dir + "/profile_q" + g17(q) + "_tol" + g17(tol) + ".txt";
}

GroundStateU solve_or_load_ground_state(double q, double tol, const std::string& cache_dir) {
  const std::string path = profile_cache_path(cache_dir, q, tol);
  ProfileCacheHeader hdr{};
  RadialProfile p;
  if (load_profile_cache(path, &hdr, &p) && hdr.q == q && hdr.tol == tol) {
    GroundStateU gs;
    gs.q = q;
    gs.tol = tol;
    gs.u0 = hdr.u0;
    gs.profile = std::move(p);
    auto& prof = gs.profile;
    prof.d2u.assign(prof.r.size(), 0.0);
    prof.d2u[0] = (gs.u0 - std::pow(gs.u0, q - 1.0)) / 3.0;
    for (std::size_t i = 1; i < prof.r.size(); ++i)
      prof.d2u[i] =
          prof.u[i] - std::pow(prof.u[i], q - 1.0) - 2.0 / prof.r[i] * prof.du[i];
    prof.fit_lo = prof.rmax() - 10.0;
    prof.fit_hi = prof.rmax();
    prof.tail_tol = 1e-3;
    prof.decay = fit_decay(prof, prof.fit_lo, prof.fit_hi);
    const double h = prof.h();
    const double fourpi = 4.0 * kPi;
    std::vector<double> f(prof.r.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = prof.u[i] * prof.u[i] * prof.r[i] * prof.r[i];
    gs.l2_sq = fourpi * simpson_uniform(f, h) +
               fourpi * radial_tail_integral(prof.decay.amp, prof.decay.power,
                                             prof.decay.rate, 2.0, prof.rmax());
    for (std::size_t i = 0; i < f.size(); ++i)
      f[i] = std::pow(prof.u[i], q) * prof.r[i] * prof.r[i];
    gs.lq_q = fourpi * simpson_uniform(f, h) +
              fourpi * radial_tail_integral(prof.decay.amp, prof.decay.power,
                                            prof.decay.rate, q, prof.rmax());
    for (std::size_t i = 0; i < f.size(); ++i)
      f[i] = prof.du[i] * prof.du[i] * prof.r[i] * prof.r[i];
    const double A2 = prof.decay.amp * prof.decay.amp;
    const double a2 = 2.0 * prof.decay.power;
    const double b2 = 2.0 * prof.decay.rate;
    auto piece = [&](double shift) {
      const double s = a2 - shift + 3.0;
      return A2 * std::pow(b2, -s) * upper_incomplete_gamma(s, b2 * prof.rmax());
    };
    const double br = prof.decay.rate, aw = prof.decay.power;
    gs.grad_l2_sq = fourpi * simpson_uniform(f, h) +
                    fourpi * (br * br * piece(0.0) - 2.0 * br * aw * piece(1.0) +
                              aw * aw * piece(2.0));
    return gs;
  }
  GroundStateU gs = solve_classical_ground_state(q, tol);
  std::filesystem::create_directories(cache_dir);
  save_profile_cache(path, q, tol, gs.profile);
  return gs;
}

namespace {

// Fourth-order first derivative of a sampled function. kind=0: interior data
// extends oddly through r=0 (radial derivative component); kind=1: one-sided
// at both ends.
double fd4_deriv(const std::vector<double>& v, std::size_t i, double h, bool odd_at_zero) {
  const std::size_t n = v.size();
  auto at = [&](long j) -> double {
    if (j >= 0) return v[static_cast<std::size_t>(j)];
    return odd_at_zero ? -v[static_cast<std::size_t>(-j)] : v[0];
  };
  const auto li = static_cast<long>(i);
  if ((odd_at_zero || li >= 2) && i + 2 < n) {
    return (at(li - 2) - 8.0 * at(li - 1) + 8.0 * at(li + 1) - at(li + 2)) / (12.0 * h);
  }
  if (li < 2) {
    // forward-biased rows (only used when odd extension is off)
    if (li == 0)
      return (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) /
             (12.0 * h);
    return (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / (12.0 * h);
  }
  const std::size_t m = n - 1;
  if (i == m)
    return (25.0 * v[m] - 48.0 * v[m - 1] + 36.0 * v[m - 2] - 16.0 * v[m - 3] +
            3.0 * v[m - 4]) /
           (12.0 * h);
  return (3.0 * v[m] + 10.0 * v[m - 1] - 18.0 * v[m - 2] + 6.0 * v[m - 3] - v[m - 4]) /
         (12.0 * h);
}

}  // namespace

double ode_residual_sup(const RadialProfile& p, double q) {
  const double h = p.h();
  double sup = 0.0;
  for (std::size_t i = 0; i < p.r.size(); ++i) {
    const double upp = fd4_deriv(p.du, i, h, /*odd_at_zero=*/true);
    double res;
    if (i == 0) {
      res = -3.0 * upp + p.u[0] - std::pow(p.u[0], q - 1.0);
    } else {
      res = -upp - 2.0 / p.r[i] * p.du[i] + p.u[i] - std::pow(p.u[i], q - 1.0);
    }
    sup = std::max(sup, std::fabs(res));
  }
  return sup;
}

KirchhoffGroundState build_kirchhoff_ground_state(const GroundStateU& U, double a, double b,
                                                  int k, double Q0) {
  if (!(a > 0.0)) throw ValidationError("build_kirchhoff_ground_state: a must be positive");
  if (b < 0.0) throw ValidationError("build_kirchhoff_ground_state: b must be nonnegative");
  if (k < 1) throw ValidationError("build_kirchhoff_ground_state: k must be at least 1");
  if (!(Q0 > 0.0)) throw ValidationError("build_kirchhoff_ground_state: Q0 must be positive");

  KirchhoffGroundState gs;
  gs.base = U;
  gs.a = a;
  gs.b = b;
  gs.k = k;
  gs.q = U.q;
  gs.Q0 = Q0;
  gs.lambda1 = std::pow(Q0, -1.0 / (U.q - 2.0));
  gs.b_tilde = b * static_cast<double>(k) * gs.lambda1 * gs.lambda1 * U.grad_l2_sq;
  if (gs.b_tilde == 0.0) {
    gs.sqrt_ck = std::sqrt(a);
    gs.c_k = a;
  } else {
    gs.sqrt_ck = (gs.b_tilde + std::sqrt(gs.b_tilde * gs.b_tilde + 4.0 * a)) / 2.0;
    gs.c_k = gs.sqrt_ck * gs.sqrt_ck;
  }
  gs.eta = 1.0 / gs.sqrt_ck;
  const double l2 = gs.lambda1 * gs.lambda1;
  const double ck32 = gs.c_k * gs.sqrt_ck;
  gs.w_grad_l2_sq = l2 * gs.sqrt_ck * U.grad_l2_sq;
  gs.w_lq_q = std::pow(gs.lambda1, U.q) * ck32 * U.lq_q;
  gs.w_l2_sq = l2 * ck32 * U.l2_sq;
  gs.A = (U.q - 2.0) / (2.0 * U.q) * gs.w_lq_q;
  gs.B = b / 4.0 * gs.w_grad_l2_sq * gs.w_grad_l2_sq;
  return gs;
}

double eval_w(const KirchhoffGroundState& gs, const Point3& x, double epsilon,
              const Point3& center) {
  const double dx = x[0] - center[0], dy = x[1] - center[1], dz = x[2] - center[2];
  const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
  return gs.w_radial(dist / epsilon);
}

Point3 eval_grad_w(const KirchhoffGroundState& gs, const Point3& x, double epsilon,
                   const Point3& center) {
  const double dx = x[0] - center[0], dy = x[1] - center[1], dz = x[2] - center[2];
  const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
  if (dist < 1e-14 * epsilon) return {0.0, 0.0, 0.0};
  const double g = gs.w_radial_deriv(dist / epsilon) / (epsilon * dist);
  return {g * dx, g * dy, g * dz};
}

double kirchhoff_residual_sup(const KirchhoffGroundState& gs) {
  const auto& p = gs.base.profile;
  const double eta = gs.eta;
  const double h = p.h() / eta;  // spacing of the scaled grid rho = r/eta
  std::vector<double> W(p.r.size()), dW(p.r.size());
  for (std::size_t i = 0; i < p.r.size(); ++i) {
    W[i] = gs.lambda1 * p.u[i];
    dW[i] = gs.lambda1 * eta * p.du[i];
  }
  double sup = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < W.size(); ++i) {
    const double Wpp = fd4_deriv(dW, i, h, /*odd_at_zero=*/true);
    const double rho = p.r[i] / eta;
    double res;
    if (i == 0) {
      res = -gs.c_k * 3.0 * Wpp + W[0] - gs.Q0 * std::pow(W[0], gs.q - 1.0);
    } else {
      res = -gs.c_k * (Wpp + 2.0 / rho * dW[i]) + W[i] - gs.Q0 * std::pow(W[i], gs.q - 1.0);
    }
    sup = std::max(sup, std::fabs(res));
    scale = std::max(scale, gs.Q0 * std::pow(W[i], gs.q - 1.0));
  }
  return sup / scale;
}

double w_grad_l2_sq_by_quadrature(const KirchhoffGroundState& gs) {
  const auto& p = gs.base.profile;
  const double eta = gs.eta;
  const double h = p.h() / eta;
  std::vector<double> f(p.r.size());
  for (std::size_t i = 0; i < p.r.size(); ++i) {
    const double rho = p.r[i] / eta;
    const double dW = gs.lambda1 * eta * p.du[i];
    f[i] = dW * dW * rho * rho;
  }
  const double amp = gs.lambda1 * p.decay.amp * std::pow(eta, p.decay.power);
  const double rate = p.decay.rate * eta;
  const double aw = p.decay.power;
  const double A2 = amp * amp;
  const double b2 = 2.0 * rate;
  const double R = p.rmax() / eta;
  auto piece = [&](double shift) {
    const double s = 2.0 * aw - shift + 3.0;
    return A2 * std::pow(b2, -s) * upper_incomplete_gamma(s, b2 * R);
  };
  const double tail = rate * rate * piece(0.0) - 2.0 * rate * aw * piece(1.0) +
                      aw * aw * piece(2.0);
  return 4.0 * kPi * (simpson_uniform(f, h) + tail);
}

double w_lq_q_by_quadrature(const KirchhoffGroundState& gs) {
  const auto& p = gs.base.profile;
  const double eta = gs.eta;
  const double h = p.h() / eta;
  std::vector<double> f(p.r.size());
  for (std::size_t i = 0; i < p.r.size(); ++i) {
    const double rho = p.r[i] / eta;
    f[i] = std::pow(gs.lambda1 * p.u[i], gs.q) * rho * rho;
  }
  const double amp = gs.lambda1 * p.decay.amp * std::pow(eta, p.decay.power);
  const double rate = p.decay.rate * eta;
  const double tail =
      radial_tail_integral(amp, p.decay.power, rate, gs.q, p.rmax() / eta);
  return 4.0 * kPi * (simpson_uniform(f, h) + tail);
}

}  // namespace peaks
