#include "peaks/field.hpp"

namespace peaks {

Field zero_field(std::shared_ptr<const GridSpec> grid, double a) {
  Field f;
  f.epsilon = grid->epsilon;
  f.a = a;
  f.values.assign(static_cast<std::size_t>(grid->total_nodes), 0.0);
  f.grid = std::move(grid);
  return f;
}

void strip_gradient(Field& f) {
  f.gx.clear();
  f.gy.clear();
  f.gz.clear();
  f.gx.shrink_to_fit();
  f.gy.shrink_to_fit();
  f.gz.shrink_to_fit();
}

}  // namespace peaks
