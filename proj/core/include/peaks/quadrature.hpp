#pragma once

#include <span>
#include <string>

#include "peaks/field.hpp"
#include "peaks/geometry.hpp"
#include "peaks/potential.hpp"

namespace peaks {

struct InnerSplit {
  double total = 0.0;
  double grad_part = 0.0;  // eps^2 a int grad u . grad v
  double mass_part = 0.0;  // int u v
};

// <u,v>_eps = int (eps^2 a grad u . grad v + u v) on the composite grid.
// Fields carrying analytic gradients contribute them; plain fields contribute
// finite-difference gradients of the grid's order.
double inner_eps(const Field& u, const Field& v);
InnerSplit inner_eps_split(const Field& u, const Field& v);
double norm_eps(const Field& u);

// (sum_n W_n |u|^p)^{1/p}
double lp_norm(const Field& u, double p);

struct ProductFactor {
  int peak = 0;
  double power = 1.0;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;  // from refining one axis by a factor 2
  double tail_bound = 0.0;      // estimated contribution outside the boxes
};

// Quadrature of  prod_f w_{eps,y_{peak_f}}^{power_f} * (Q if given)  over the
// composite grid. With two or more distinct peaks all powers must be >= 1
// (the equal-power case below 1 is not supported).
IntegralResult integrate_product(std::span<const ProductFactor> factors,
                                 const PotentialModel* Q, const PeakConfig& Y,
                                 const KirchhoffGroundState& gs, const GridSpec& grid);

// Model  eps^3 exp(-min(r,s) eta d / eps) (d/eps)^{-min(r,s)}  used only for
// ratio and log-slope comparisons.
double interaction_asymptotic(double r, double s, double separation,
                              const KirchhoffGroundState& gs, double epsilon);

// Two-center integrals reduced to an axisymmetric (z, rho) quadrature in peak
// units; independent of the 3-D composite grid.
//   pair_integral:           int w_i^{p_i} w_j^{p_j}
//   pair_gradient_integral:  int w_i^{p_i} w_j (d w_i / d y_{i,axis}) with the
//                            axis along the separation; returns the signed
//                            component (positive = force pulling i toward j).
double pair_integral(const KirchhoffGroundState& gs, double epsilon, double d,
                     double p_i, double p_j, int nodes_per_unit = 12,
                     double halfwidth = 16.0);
double pair_gradient_integral(const KirchhoffGroundState& gs, double epsilon, double d,
                              double p_i, int nodes_per_unit = 12,
                              double halfwidth = 16.0);

// Plain-text field dump ("x y z value" rows) plus a JSON sidecar with the grid
// metadata.
void dump_field(const Field& f, const std::string& path_base);

}  // namespace peaks
