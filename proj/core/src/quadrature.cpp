#include "peaks/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "peaks/errors.hpp"
#include "peaks/parallel.hpp"
#include "peaks/report.hpp"

namespace peaks {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_compatible(const Field& u, const Field& v) {
  if (!u.grid || !v.grid) throw GridMismatch("inner_eps: field without grid");
  if (u.grid.get() != v.grid.get() && !same_grid(*u.grid, *v.grid))
    throw GridMismatch("inner_eps: fields live on different grids");
  if (u.epsilon != v.epsilon) throw GridMismatch("inner_eps: epsilon mismatch");
  if (u.a != v.a) throw GridMismatch("inner_eps: stiffness mismatch");
}

}  // namespace

InnerSplit inner_eps_split(const Field& u, const Field& v) {
  require_compatible(u, v);
  Geometry geo(u.grid);
  InnerSplit s;
  s.mass_part = geo.mass_dot(u.values.data(), v.values.data());
  double gd;
  if (u.has_analytic_grad() && v.has_analytic_grad()) {
    gd = geo.grad_dot_analytic(u.gx.data(), u.gy.data(), u.gz.data(), v.gx.data(),
                               v.gy.data(), v.gz.data());
  } else if (u.has_analytic_grad()) {
    gd = geo.grad_dot_mixed(u.gx.data(), u.gy.data(), u.gz.data(), v.values.data());
  } else if (v.has_analytic_grad()) {
    gd = geo.grad_dot_mixed(v.gx.data(), v.gy.data(), v.gz.data(), u.values.data());
  } else {
    gd = geo.grad_dot(u.values.data(), v.values.data());
  }
  s.grad_part = u.epsilon * u.epsilon * u.a * gd;
  s.total = s.grad_part + s.mass_part;
  return s;
}

double inner_eps(const Field& u, const Field& v) { return inner_eps_split(u, v).total; }

double norm_eps(const Field& u) { return std::sqrt(std::max(0.0, inner_eps(u, u))); }

double lp_norm(const Field& u, double p) {
  if (!(p >= 1.0)) throw ValidationError("lp_norm: p must be >= 1");
  Geometry geo(u.grid);
  std::vector<double> t(u.values.size());
  parallel_for(static_cast<std::int64_t>(t.size()), [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i)
      t[static_cast<std::size_t>(i)] = std::pow(std::fabs(u.values[static_cast<std::size_t>(i)]), p);
  });
  return std::pow(geo.mass_sum(t.data()), 1.0 / p);
}

namespace {

// Integrand of integrate_product at a physical point.
struct ProductEvaluator {
  const KirchhoffGroundState* gs;
  const PotentialModel* Q;
  const PeakConfig* Y;
  std::vector<ProductFactor> factors;

  double operator()(const Point3& x) const {
    double v = 1.0;
    for (const auto& f : factors) {
      const Point3& c = Y->points[static_cast<std::size_t>(f.peak)];
      const double dx = x[0] - c[0], dy = x[1] - c[1], dz = x[2] - c[2];
      const double w = gs->w_radial(std::sqrt(dx * dx + dy * dy + dz * dz) / Y->epsilon);
      v *= (f.power == 1.0) ? w : std::pow(w, f.power);
    }
    if (Q) v *= Q->eval(x);
    return v;
  }
};

// Trapezoid sum of a point functor over one box, with an optional refinement
// factor along the x axis (virtual nodes, nothing stored).
double box_sum(const GridSpec& grid, const GridBox& box, const ProductEvaluator& f,
               int refine_x) {
  const double h = grid.h;
  const double hx = h / refine_x;
  const long n0 = (box.n[0] - 1) * refine_x + 1;
  const long n1 = box.n[1], n2 = box.n[2];
  return parallel_sum(n1 * n2, 64, [&](std::int64_t lo, std::int64_t hi) {
    double s = 0.0;
    for (std::int64_t row = lo; row < hi; ++row) {
      const long j = static_cast<long>(row % n1);
      const long k = static_cast<long>(row / n1);
      const double wj = (j == 0 || j == n1 - 1) ? 0.5 * h : h;
      const double wk = (k == 0 || k == n2 - 1) ? 0.5 * h : h;
      const double y = box.lo[1] + h * static_cast<double>(j);
      const double z = box.lo[2] + h * static_cast<double>(k);
      double rs = 0.0;
      for (long i = 0; i < n0; ++i) {
        const double wi = (i == 0 || i == n0 - 1) ? 0.5 * hx : hx;
        rs += wi * f({box.lo[0] + hx * static_cast<double>(i), y, z});
      }
      s += wj * wk * rs;
    }
    return s;
  });
}

// Crude exterior estimate: face maximum times face area times a decay length.
double tail_estimate(const GridSpec& grid, const GridBox& box, const ProductEvaluator& f,
                     double decay_length) {
  double face_max = 0.0;
  const double h = grid.h;
  const long n0 = box.n[0], n1 = box.n[1], n2 = box.n[2];
  // Sample a coarse lattice on each face.
  auto at = [&](long i, long j, long k) {
    return std::fabs(f({box.lo[0] + h * static_cast<double>(i),
                        box.lo[1] + h * static_cast<double>(j),
                        box.lo[2] + h * static_cast<double>(k)}));
  };
  const long si = std::max<long>(1, n0 / 16), sj = std::max<long>(1, n1 / 16),
             sk = std::max<long>(1, n2 / 16);
  for (long j = 0; j < n1; j += sj)
    for (long k = 0; k < n2; k += sk)
      face_max = std::max({face_max, at(0, j, k), at(n0 - 1, j, k)});
  for (long i = 0; i < n0; i += si)
    for (long k = 0; k < n2; k += sk)
      face_max = std::max({face_max, at(i, 0, k), at(i, n1 - 1, k)});
  for (long i = 0; i < n0; i += si)
    for (long j = 0; j < n1; j += sj)
      face_max = std::max({face_max, at(i, j, 0), at(i, j, n2 - 1)});
  const double ex = h * static_cast<double>(n0 - 1);
  const double ey = h * static_cast<double>(n1 - 1);
  const double ez = h * static_cast<double>(n2 - 1);
  const double area = 2.0 * (ex * ey + ey * ez + ex * ez);
  return face_max * area * decay_length;
}

}  // namespace

IntegralResult integrate_product(std::span<const ProductFactor> factors,
                                 const PotentialModel* Q, const PeakConfig& Y,
                                 const KirchhoffGroundState& gs, const GridSpec& grid) {
  if (factors.empty()) throw ValidationError("integrate_product: no factors");
  std::set<int> peaks;
  double min_power = std::numeric_limits<double>::infinity();
  for (const auto& f : factors) {
    if (f.peak < 0 || f.peak >= Y.k())
      throw ValidationError("integrate_product: peak index out of range");
    if (!(f.power > 0.0)) throw ValidationError("integrate_product: powers must be positive");
    peaks.insert(f.peak);
    min_power = std::min(min_power, f.power);
  }
  if (peaks.size() >= 2 && min_power < 1.0)
    throw ValidationError(
        "integrate_product: powers below 1 with multiple peaks are unsupported");

  ProductEvaluator ev{&gs, Q, &Y, {factors.begin(), factors.end()}};
  IntegralResult res;
  double coarse = 0.0, fine = 0.0;
  for (const auto& box : grid.boxes) {
    coarse += box_sum(grid, box, ev, 1);
    fine += box_sum(grid, box, ev, 2);
    res.tail_bound += tail_estimate(grid, box, ev, Y.epsilon / (min_power * gs.eta));
  }
  res.value = fine;
  res.error_estimate = std::fabs(fine - coarse);
  return res;
}

double interaction_asymptotic(double r, double s, double separation,
                              const KirchhoffGroundState& gs, double epsilon) {
  const double m = std::min(r, s);
  const double de = separation / epsilon;
  return epsilon * epsilon * epsilon * std::exp(-m * gs.eta * separation / epsilon) *
         std::pow(de, -m);
}

double pair_integral(const KirchhoffGroundState& gs, double epsilon, double d, double p_i,
                     double p_j, int nodes_per_unit, double halfwidth) {
  // Peak units: s = eta x / eps; centers at z = 0 and z = m.
  const double m = gs.eta * d / epsilon;
  const double hs = 1.0 / nodes_per_unit;
  const double zlo = -halfwidth, zhi = m + halfwidth;
  const long nz = static_cast<long>(std::ceil((zhi - zlo) / hs)) + 1;
  const long nr = static_cast<long>(std::ceil(halfwidth / hs)) + 1;
  const double unit = epsilon / gs.eta;
  double total = parallel_sum(nz, 16, [&](std::int64_t lo, std::int64_t hi) {
    double s = 0.0;
    for (std::int64_t iz = lo; iz < hi; ++iz) {
      const double z = zlo + hs * static_cast<double>(iz);
      const double wz = (iz == 0 || iz == nz - 1) ? 0.5 * hs : hs;
      double rowsum = 0.0;
      for (long ir = 0; ir < nr; ++ir) {
        const double rho = hs * static_cast<double>(ir);
        const double wr = (ir == 0 || ir == nr - 1) ? 0.5 * hs : hs;
        const double r1 = std::sqrt(z * z + rho * rho);
        const double r2 = std::sqrt((z - m) * (z - m) + rho * rho);
        const double u1 = gs.lambda1 * gs.base.profile.value(r1);
        const double u2 = gs.lambda1 * gs.base.profile.value(r2);
        rowsum += wr * std::pow(u1, p_i) * std::pow(u2, p_j) * rho;
      }
      s += wz * rowsum;
    }
    return s;
  });
  return 2.0 * kPi * unit * unit * unit * total;
}

double pair_gradient_integral(const KirchhoffGroundState& gs, double epsilon, double d,
                              double p_i, int nodes_per_unit, double halfwidth) {
  const double m = gs.eta * d / epsilon;
  const double hs = 1.0 / nodes_per_unit;
  const double zlo = -halfwidth, zhi = m + halfwidth;
  const long nz = static_cast<long>(std::ceil((zhi - zlo) / hs)) + 1;
  const long nr = static_cast<long>(std::ceil(halfwidth / hs)) + 1;
  const double unit = epsilon / gs.eta;
  double total = parallel_sum(nz, 16, [&](std::int64_t lo, std::int64_t hi) {
    double s = 0.0;
    for (std::int64_t iz = lo; iz < hi; ++iz) {
      const double z = zlo + hs * static_cast<double>(iz);
      const double wz = (iz == 0 || iz == nz - 1) ? 0.5 * hs : hs;
      double rowsum = 0.0;
      for (long ir = 0; ir < nr; ++ir) {
        const double rho = hs * static_cast<double>(ir);
        const double wr = (ir == 0 || ir == nr - 1) ? 0.5 * hs : hs;
        const double r1 = std::sqrt(z * z + rho * rho);
        const double r2 = std::sqrt((z - m) * (z - m) + rho * rho);
        if (r1 < 1e-12) continue;
        const double u1 = gs.lambda1 * gs.base.profile.value(r1);
        const double du1 = gs.lambda1 * gs.base.profile.deriv(r1);
        const double u2 = gs.lambda1 * gs.base.profile.value(r2);
        // d/dy_z of w_{eps,0}: -(eta/eps) lambda1 u'(r1) z / r1
        rowsum += wr * std::pow(u1, p_i) * u2 * (-du1 * z / r1) * rho;
      }
      s += wz * rowsum;
    }
    return s;
  });
  // The eta/eps factor from the center derivative times the volume element.
  return 2.0 * kPi * unit * unit * unit * (gs.eta / epsilon) * total;
}

void dump_field(const Field& f, const std::string& path_base) {
  const GridSpec& g = *f.grid;
  std::string rows;
  rows.reserve(static_cast<std::size_t>(g.total_nodes) * 48);
  for (std::size_t b = 0; b < g.boxes.size(); ++b) {
    const GridBox& box = g.boxes[b];
    std::int64_t n = box.offset;
    for (long k = 0; k < box.n[2]; ++k)
      for (long j = 0; j < box.n[1]; ++j)
        for (long i = 0; i < box.n[0]; ++i, ++n) {
          const Point3 x = g.node(static_cast<int>(b), i, j, k);
          rows += g17(x[0]);
          rows += ' ';
          rows += g17(x[1]);
          rows += ' ';
          rows += g17(x[2]);
          rows += ' ';
          rows += g17(f.values[static_cast<std::size_t>(n)]);
          rows += '\n';
        }
  }
  write_text_file(path_base + ".txt", rows);

  Json meta = Json::object();
  meta.set("epsilon", Json::number(g.epsilon));
  meta.set("h", Json::number(g.h));
  meta.set("unit", Json::number(g.unit));
  meta.set("nodes_per_unit", Json::integer(g.nodes_per_unit));
  meta.set("fd_order", Json::integer(g.fd_order));
  meta.set("total_nodes", Json::integer(g.total_nodes));
  Json boxes = Json::array();
  for (const auto& box : g.boxes) {
    Json jb = Json::object();
    Json lo = Json::array();
    for (double v : box.lo) lo.push(Json::number(v));
    Json n = Json::array();
    for (long v : box.n) n.push(Json::integer(v));
    jb.set("lo", std::move(lo));
    jb.set("n", std::move(n));
    boxes.push(std::move(jb));
  }
  meta.set("boxes", std::move(boxes));
  write_text_file(path_base + ".json", meta.dump());
}

}  // namespace peaks
