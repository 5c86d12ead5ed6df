#pragma once

#include <array>
#include <string>

#include "peaks/radial_profile.hpp"

namespace peaks {

using Point3 = std::array<double, 3>;

// The positive radial decaying solution of  -u'' - (2/r)u' + u = u^{q-1}
// on [0, rmax], plus its integral norms over R^3 (grid quadrature + analytic
// tail from the fitted decay).
struct GroundStateU {
  RadialProfile profile;
  double q = 0.0;
  double tol = 0.0;
  double u0 = 0.0;           // U(0)
  double grad_l2_sq = 0.0;   // int |grad U|^2
  double lq_q = 0.0;         // int U^q
  double l2_sq = 0.0;        // int U^2
};

struct ShootingOptions {
  double rmax = 25.0;
  double splice_threshold = 1e-5;  // switch to the exact linear tail below this value
  int max_bisections = 200;
};

// Radial shooting with bisection on U(0). tol bounds the sup-norm ODE residual
// of the returned profile; the integrator runs at relative tolerance tol/10.
GroundStateU solve_classical_ground_state(double q, double tol,
                                          const ShootingOptions& opt = {});

// Same, but consults/populates the plain-text profile cache in cache_dir.
GroundStateU solve_or_load_ground_state(double q, double tol, const std::string& cache_dir);
std::string profile_cache_path(const std::string& cache_dir, double q, double tol);

// Sup-norm residual of the classical equation, with u'' recomputed from the
// stored u' by fourth-order finite differences (independent of the integrator).
double ode_residual_sup(const RadialProfile& p, double q);

// Scaled ground state w(x) = lambda1 U(eta x) solving
//   -(a + b k int|grad w|^2) Lap w + w = Q0 w^{q-1}.
struct KirchhoffGroundState {
  GroundStateU base;
  double a = 0.0, b = 0.0;
  int k = 1;
  double q = 0.0, Q0 = 1.0;

  double lambda1 = 0.0;   // Q0^{-1/(q-2)}
  double b_tilde = 0.0;   // b k lambda1^2 int|grad U|^2
  double sqrt_ck = 0.0;   // (b_tilde + sqrt(b_tilde^2 + 4a)) / 2
  double c_k = 0.0;
  double eta = 0.0;       // 1/sqrt(c_k)

  double w_grad_l2_sq = 0.0;  // int |grad w|^2
  double w_lq_q = 0.0;        // int w^q
  double w_l2_sq = 0.0;       // int w^2
  double A = 0.0;             // (q-2)/(2q) int w^q
  double B = 0.0;             // (b/4) (int |grad w|^2)^2

  double w_max() const { return lambda1 * base.u0; }
  double w_radial(double rho) const { return lambda1 * base.profile.value(eta * rho); }
  double w_radial_deriv(double rho) const {
    return lambda1 * eta * base.profile.deriv(eta * rho);
  }
};

KirchhoffGroundState build_kirchhoff_ground_state(const GroundStateU& U, double a,
                                                  double b, int k, double Q0);

// Peak evaluation w_{eps,center}(x) = lambda1 U(eta |x-center| / eps) and its
// spatial gradient. Tail extrapolation beyond the sampled range is always defined.
double eval_w(const KirchhoffGroundState& gs, const Point3& x, double epsilon,
              const Point3& center);
Point3 eval_grad_w(const KirchhoffGroundState& gs, const Point3& x, double epsilon,
                   const Point3& center);

// Relative sup-norm residual of the scaled equation on the radial grid, with
// the second derivative recomputed by finite differences.
double kirchhoff_residual_sup(const KirchhoffGroundState& gs);

// int |grad w|^2 and int w^q recomputed by radial quadrature from the scaled
// profile (used by the scaling-closure checks).
double w_grad_l2_sq_by_quadrature(const KirchhoffGroundState& gs);
double w_lq_q_by_quadrature(const KirchhoffGroundState& gs);

}  // namespace peaks
