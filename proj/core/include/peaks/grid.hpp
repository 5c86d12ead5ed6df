#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "peaks/peak_config.hpp"

namespace peaks {

// One axis-aligned box of the composite grid. Nodes along axis d sit at
// lo[d] + i*h for i in [0, n[d]).
struct GridBox {
  Point3 lo{0, 0, 0};
  std::array<long, 3> n{0, 0, 0};
  std::int64_t offset = 0;  // start index into flat node arrays

  std::int64_t node_count() const {
    return static_cast<std::int64_t>(n[0]) * n[1] * n[2];
  }
};

// Composite peak-centered grid: one box per peak, with overlapping peak boxes
// merged into disjoint cluster boxes, all sharing one uniform spacing.
struct GridSpec {
  std::vector<GridBox> boxes;
  double h = 0.0;        // node spacing (physical units)
  double epsilon = 0.0;  // scale the grid was built for
  double unit = 0.0;     // peak length unit eps/eta
  int nodes_per_unit = 0;
  double box_halfwidth_L = 0.0;
  int fd_order = 2;  // finite-difference order of the discrete gradient (2 or 4)
  std::int64_t total_nodes = 0;

  Point3 node(int box, long i, long j, long k) const {
    const GridBox& b = boxes[static_cast<std::size_t>(box)];
    return {b.lo[0] + h * static_cast<double>(i), b.lo[1] + h * static_cast<double>(j),
            b.lo[2] + h * static_cast<double>(k)};
  }
};

struct GridParams {
  int nodes_per_unit = 6;
  double box_halfwidth_L = 12.0;
  std::int64_t budget = 20'000'000;
  int fd_order = 2;
};

// Builds the composite grid for a configuration. Peaks whose boxes overlap are
// merged into one bounding box; throws GridTooLarge above the node budget.
std::shared_ptr<const GridSpec> make_grid(const PeakConfig& Y,
                                          const KirchhoffGroundState& gs,
                                          int nodes_per_unit, double box_halfwidth_L,
                                          std::int64_t budget = 20'000'000,
                                          int fd_order = 2);
std::shared_ptr<const GridSpec> make_grid(const PeakConfig& Y,
                                          const KirchhoffGroundState& gs,
                                          const GridParams& gp);

bool same_grid(const GridSpec& a, const GridSpec& b);

}  // namespace peaks
