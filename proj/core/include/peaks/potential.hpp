#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "peaks/ground_state.hpp"

namespace peaks {

// The weight Q(x): a smooth bounded evaluator together with the structural
// data of its expansion around the critical point at the origin,
//   Q(x) = Q0 + P1(x') - P2(x'') + R(x)  on B_delta(0),
// with x' the first t coordinates, P1(x') = lambda |x'|^{h1}, and
// R(x) = O(|x|^{h1+sigma}).
struct PotentialModel {
  std::string name;  // "constant", "remark", "saddle", or "expr:<text>"
  std::function<double(const Point3&)> eval;

  int t = 3;          // split dimension, x' = (x_1..x_t)
  double h = 2.0;     // lower expansion order (>= 2)
  double h1 = 2.0;    // upper expansion order (>= h)
  double lambda = 1.0;
  double sigma = 2.0;
  double delta = 1.0;  // expansion radius
  double Q0 = 1.0;
  double sup_bound = 2.0;

  // Declared expansion pieces; null means identically zero.
  std::function<double(const Point3&)> P1;
  std::function<double(const Point3&)> P2;

  // Analytic m-th derivative tensor (flattened, 3^m entries); null means
  // central finite differences.
  std::function<std::vector<double>(const Point3&, int)> analytic_deriv;

  int order_cap() const { return static_cast<int>(std::floor(h)) + 1; }
};

PotentialModel make_constant_model(double value = 1.0);
PotentialModel make_remark_model();  // sin(|x|^2) + 1
PotentialModel make_saddle_model();  // 1 + |x'|^2 - |x''|^2 with t = 2
// Arithmetic expression in x1, x2, x3 with sin/cos/exp/sqrt and ^ powers.
// Derivatives fall back to finite differences.
PotentialModel make_expression_model(const std::string& expr, int t, double h, double h1,
                                     double lambda, double sigma, double delta);

double eval_Q(const PotentialModel& m, const Point3& x);

// Symmetric m-th derivative tensor at x, flattened row-major with 3^m entries.
// Throws OrderTooHigh for m > [h]+1.
std::vector<double> derivatives_Q(const PotentialModel& m, const Point3& x, int order);

// Frobenius norm of a flattened tensor.
double tensor_norm(const std::vector<double>& tensor);

// Sup of |R(x)| / |x|^{h1+sigma} over log-spaced samples in B_delta(0),
// split per decade. Passes when the ratio does not grow toward the origin.
struct Q3Report {
  double sup_ratio = 0.0;
  std::vector<double> decade_sup;  // outermost decade first
  bool pass = false;
  int n_samples = 0;
};
Q3Report check_Q3(const PotentialModel& m, int n_samples);

// Spot checks of (Q2), (1.11) and (1.12) on sampled points.
struct StructureReport {
  double grad_norm_at_origin = 0.0;
  double p1_max_abs_err = 0.0;   // max |P1(x') - lambda |x'|^{h1}|
  double q12_min_ratio = 0.0;    // min <DP2(x''), x''> / |x''|^h (t < 3 only)
  bool q2_pass = false;
};
StructureReport check_structure(const PotentialModel& m, int n_samples);

}  // namespace peaks
