#pragma once

#include <memory>
#include <vector>

#include "peaks/grid.hpp"

namespace peaks {

// Discrete kernels over a composite grid: trapezoid quadrature weights and
// finite-difference first derivatives of the grid's order (one-sided stencils
// of the same order at box faces). Every reduction runs over a fixed chunk
// partition, so results are bit-identical at any worker count.
class Geometry {
public:
  explicit Geometry(std::shared_ptr<const GridSpec> grid);

  const GridSpec& grid() const { return *grid_; }
  const std::shared_ptr<const GridSpec>& grid_ptr() const { return grid_; }
  std::int64_t size() const { return grid_->total_nodes; }

  // sum_n W_n u_n v_n  (and variants)
  double mass_dot(const double* u, const double* v) const;
  double mass_dot_coeff(const double* c, const double* u, const double* v) const;
  double mass_sum(const double* u) const;

  // sum_n W_n (Du)_n . (Dv)_n with finite-difference gradients
  double grad_dot(const double* u, const double* v) const;
  // sum_n W_n g_n . (Dv)_n with an analytic gradient on the left
  double grad_dot_mixed(const double* gx, const double* gy, const double* gz,
                        const double* v) const;
  // sum_n W_n a_n . b_n for two analytic gradients
  double grad_dot_analytic(const double* ax, const double* ay, const double* az,
                           const double* bx, const double* by, const double* bz) const;

  // out_n += scale * W_n c_n u_n  (c may be null for 1)
  void add_mass(const double* u, const double* coeff_or_null, double scale,
                double* out) const;
  // out += scale * D^T (W Du)
  void add_stiffness(const double* u, double scale, double* out) const;
  // out += scale * D^T (W g) for an analytic gradient g
  void add_grad_functional(const double* gx, const double* gy, const double* gz,
                           double scale, double* out) const;

  // Metric of the discrete <.,.>_eps form: out = W u + eps2a D^T(W Du).
  void apply_metric(const double* u, double eps2a, double* out) const;
  std::vector<double> metric_diagonal(double eps2a) const;

  // Quadrature weight of one node (for tests and dumps).
  double node_weight(int box, long i, long j, long k) const;

private:
  std::shared_ptr<const GridSpec> grid_;
  std::vector<std::array<std::vector<double>, 3>> w_;  // per box, per axis
  int order_;
};

}  // namespace peaks
