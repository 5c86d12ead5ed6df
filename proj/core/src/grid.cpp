#include "peaks/grid.hpp"

#include <algorithm>
#include <cmath>

#include "peaks/errors.hpp"

namespace peaks {

double peak_distance(const Point3& a, const Point3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

bool validate_peaks(const PeakConfig& Y, double eta, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (Y.points.empty()) return fail("no peaks");
  if (!(Y.epsilon > 0.0)) return fail("epsilon must be positive");
  for (std::size_t i = 0; i < Y.points.size(); ++i) {
    const double r = peak_distance(Y.points[i], {0, 0, 0});
    if (r > Y.delta)
      return fail("peak " + std::to_string(i) + " outside B_delta: |y| = " +
                  std::to_string(r));
    for (std::size_t j = i + 1; j < Y.points.size(); ++j) {
      const double sep = eta * peak_distance(Y.points[i], Y.points[j]) / Y.epsilon;
      if (sep < Y.R1)
        return fail("pair (" + std::to_string(i) + "," + std::to_string(j) +
                    ") below separation floor: " + std::to_string(sep));
    }
  }
  return true;
}

double peak_margin(const PeakConfig& Y, double eta) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < Y.points.size(); ++i) {
    m = std::min(m, Y.delta - peak_distance(Y.points[i], {0, 0, 0}));
    for (std::size_t j = i + 1; j < Y.points.size(); ++j) {
      const double sep = eta * peak_distance(Y.points[i], Y.points[j]) / Y.epsilon;
      m = std::min(m, (sep - Y.R1) * Y.epsilon / eta);
    }
  }
  return m;
}

namespace {

struct ProtoBox {
  Point3 lo, hi;
};

bool overlaps(const ProtoBox& a, const ProtoBox& b) {
  for (int d = 0; d < 3; ++d) {
    if (a.hi[d] < b.lo[d] || b.hi[d] < a.lo[d]) return false;
  }
  return true;
}

}  // namespace

std::shared_ptr<const GridSpec> make_grid(const PeakConfig& Y,
                                          const KirchhoffGroundState& gs,
                                          int nodes_per_unit, double box_halfwidth_L,
                                          std::int64_t budget, int fd_order) {
  if (nodes_per_unit < 4)
    throw ValidationError("make_grid: nodes_per_unit must be at least 4");
  if (!(box_halfwidth_L >= 8.0))
    throw ValidationError("make_grid: box_halfwidth_L must be at least 8");
  if (fd_order != 2 && fd_order != 4)
    throw ValidationError("make_grid: fd_order must be 2 or 4");
  if (Y.points.empty()) throw ValidationError("make_grid: empty configuration");

  auto grid = std::make_shared<GridSpec>();
  grid->epsilon = Y.epsilon;
  grid->unit = Y.epsilon / gs.eta;
  grid->nodes_per_unit = nodes_per_unit;
  grid->box_halfwidth_L = box_halfwidth_L;
  grid->fd_order = fd_order;
  grid->h = grid->unit / static_cast<double>(nodes_per_unit);

  const double H = box_halfwidth_L * grid->unit;

  // Canonical peak order so relabelled configurations produce identical grids.
  std::vector<Point3> pts = Y.points;
  std::sort(pts.begin(), pts.end());

  std::vector<ProtoBox> proto;
  proto.reserve(pts.size());
  for (const auto& p : pts) {
    proto.push_back({{p[0] - H, p[1] - H, p[2] - H}, {p[0] + H, p[1] + H, p[2] + H}});
  }
  // Merge overlapping boxes to a fixed point.
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < proto.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < proto.size() && !merged; ++j) {
        if (overlaps(proto[i], proto[j])) {
          for (int d = 0; d < 3; ++d) {
            proto[i].lo[d] = std::min(proto[i].lo[d], proto[j].lo[d]);
            proto[i].hi[d] = std::max(proto[i].hi[d], proto[j].hi[d]);
          }
          proto.erase(proto.begin() + static_cast<long>(j));
          merged = true;
        }
      }
    }
  }
  std::sort(proto.begin(), proto.end(),
            [](const ProtoBox& a, const ProtoBox& b) { return a.lo < b.lo; });

  std::int64_t offset = 0;
  for (const auto& pb : proto) {
    GridBox box;
    box.lo = pb.lo;
    for (int d = 0; d < 3; ++d) {
      const double extent = pb.hi[d] - pb.lo[d];
      box.n[d] = static_cast<long>(std::llround(extent / grid->h)) + 1;
    }
    box.offset = offset;
    offset += box.node_count();
    grid->boxes.push_back(box);
  }
  grid->total_nodes = offset;
  if (grid->total_nodes > budget)
    throw GridTooLarge("make_grid: " + std::to_string(grid->total_nodes) +
                       " nodes exceed budget " + std::to_string(budget));

  // Every peak must sit well inside exactly one box.
  for (const auto& p : pts) {
    int owner = 0;
    for (const auto& box : grid->boxes) {
      bool inside = true;
      for (int d = 0; d < 3; ++d) {
        const double hi = box.lo[d] + grid->h * static_cast<double>(box.n[d] - 1);
        if (p[d] - box.lo[d] < H / 2.0 || hi - p[d] < H / 2.0) inside = false;
      }
      if (inside) ++owner;
    }
    if (owner != 1)
      throw ValidationError("make_grid: peak not interior to exactly one box");
  }
  return grid;
}

std::shared_ptr<const GridSpec> make_grid(const PeakConfig& Y,
                                          const KirchhoffGroundState& gs,
                                          const GridParams& gp) {
  return make_grid(Y, gs, gp.nodes_per_unit, gp.box_halfwidth_L, gp.budget, gp.fd_order);
}

bool same_grid(const GridSpec& a, const GridSpec& b) {
  if (a.h != b.h || a.epsilon != b.epsilon || a.boxes.size() != b.boxes.size() ||
      a.fd_order != b.fd_order)
    return false;
  for (std::size_t i = 0; i < a.boxes.size(); ++i) {
    if (a.boxes[i].lo != b.boxes[i].lo || a.boxes[i].n != b.boxes[i].n) return false;
  }
  return true;
}

}  // namespace peaks
