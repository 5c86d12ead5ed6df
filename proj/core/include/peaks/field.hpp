#pragma once

#include <memory>
#include <vector>

#include "peaks/grid.hpp"

namespace peaks {

// A real-valued function sampled on a composite grid. Fields built from the
// radial profile also carry their exact gradient; fields that exist only as
// node values (corrections, solver iterates) use finite differences instead.
struct Field {
  std::shared_ptr<const GridSpec> grid;
  std::vector<double> values;
  std::vector<double> gx, gy, gz;  // analytic gradient, empty when absent
  double epsilon = 0.0;
  double a = 0.0;  // stiffness entering the <.,.>_eps form

  bool has_analytic_grad() const { return !gx.empty(); }
  std::int64_t size() const { return grid ? grid->total_nodes : 0; }
};

Field zero_field(std::shared_ptr<const GridSpec> grid, double a);

// Drops the analytic gradient arrays (the field then acts as a plain
// node-value object in all forms).
void strip_gradient(Field& f);

}  // namespace peaks
