#include "peaks/geometry.hpp"

#include <cmath>

#include "peaks/errors.hpp"
#include "peaks/parallel.hpp"

namespace peaks {

namespace {

constexpr std::int64_t kLineChunk = 32;
constexpr std::int64_t kRowChunk = 64;

// First-derivative stencil rows. Writes out[i] = (d/dx u)(x_i) for a line of
// length n and stride s, spacing h = 1/ih.
void line_deriv(const double* u, long n, long s, double ih, int order, double* out) {
  if (order == 4) {
    out[0] = ih * (-25.0 / 12 * u[0] + 4.0 * u[s] - 3.0 * u[2 * s] + 4.0 / 3 * u[3 * s] -
                   0.25 * u[4 * s]);
    out[1] = ih * (-0.25 * u[0] - 5.0 / 6 * u[s] + 1.5 * u[2 * s] - 0.5 * u[3 * s] +
                   1.0 / 12 * u[4 * s]);
    const double c = ih / 12.0;
    for (long i = 2; i < n - 2; ++i) {
      const double* p = u + i * s;
      out[i] = c * (p[-2 * s] - 8.0 * p[-s] + 8.0 * p[s] - p[2 * s]);
    }
    const double* e = u + (n - 1) * s;
    out[n - 2] = ih * (0.25 * e[0] + 5.0 / 6 * e[-s] - 1.5 * e[-2 * s] + 0.5 * e[-3 * s] -
                       1.0 / 12 * e[-4 * s]);
    out[n - 1] = ih * (25.0 / 12 * e[0] - 4.0 * e[-s] + 3.0 * e[-2 * s] -
                       4.0 / 3 * e[-3 * s] + 0.25 * e[-4 * s]);
  } else {
    out[0] = ih * (-1.5 * u[0] + 2.0 * u[s] - 0.5 * u[2 * s]);
    const double c = ih * 0.5;
    for (long i = 1; i < n - 1; ++i) {
      const double* p = u + i * s;
      out[i] = c * (p[s] - p[-s]);
    }
    const double* e = u + (n - 1) * s;
    out[n - 1] = ih * (1.5 * e[0] - 2.0 * e[-s] + 0.5 * e[-2 * s]);
  }
}

// out[(i+o)*s] += sum of transposed stencil contributions of t[i] (t already
// carries quadrature weights and scale). Writes stay within the line.
void line_deriv_transpose(const double* t, long n, long s, double ih, int order,
                          double* out) {
  if (order == 4) {
    {
      const double v = ih * t[0];
      out[0] += -25.0 / 12 * v;
      out[s] += 4.0 * v;
      out[2 * s] += -3.0 * v;
      out[3 * s] += 4.0 / 3 * v;
      out[4 * s] += -0.25 * v;
    }
    {
      const double v = ih * t[1];
      out[0] += -0.25 * v;
      out[s] += -5.0 / 6 * v;
      out[2 * s] += 1.5 * v;
      out[3 * s] += -0.5 * v;
      out[4 * s] += 1.0 / 12 * v;
    }
    const double c = ih / 12.0;
    for (long i = 2; i < n - 2; ++i) {
      const double v = c * t[i];
      double* p = out + i * s;
      p[-2 * s] += v;
      p[-s] += -8.0 * v;
      p[s] += 8.0 * v;
      p[2 * s] += -v;
    }
    double* e = out + (n - 1) * s;
    {
      const double v = ih * t[n - 2];
      e[0] += 0.25 * v;
      e[-s] += 5.0 / 6 * v;
      e[-2 * s] += -1.5 * v;
      e[-3 * s] += 0.5 * v;
      e[-4 * s] += -1.0 / 12 * v;
    }
    {
      const double v = ih * t[n - 1];
      e[0] += 25.0 / 12 * v;
      e[-s] += -4.0 * v;
      e[-2 * s] += 3.0 * v;
      e[-3 * s] += -4.0 / 3 * v;
      e[-4 * s] += 0.25 * v;
    }
  } else {
    {
      const double v = ih * t[0];
      out[0] += -1.5 * v;
      out[s] += 2.0 * v;
      out[2 * s] += -0.5 * v;
    }
    const double c = ih * 0.5;
    for (long i = 1; i < n - 1; ++i) {
      const double v = c * t[i];
      out[(i - 1) * s] += -v;
      out[(i + 1) * s] += v;
    }
    double* e = out + (n - 1) * s;
    {
      const double v = ih * t[n - 1];
      e[0] += 1.5 * v;
      e[-s] += -2.0 * v;
      e[-2 * s] += 0.5 * v;
    }
  }
}

// Per-row stencil description used for the metric diagonal.
struct StencilRow {
  int len;
  long off[5];
  double c[5];
};

StencilRow stencil_row(long i, long n, double ih, int order) {
  StencilRow r{};
  if (order == 4) {
    if (i == 0) {
      r = {5, {0, 1, 2, 3, 4}, {-25.0 / 12, 4.0, -3.0, 4.0 / 3, -0.25}};
    } else if (i == 1) {
      r = {5, {-1, 0, 1, 2, 3}, {-0.25, -5.0 / 6, 1.5, -0.5, 1.0 / 12}};
    } else if (i == n - 2) {
      r = {5, {1, 0, -1, -2, -3}, {0.25, 5.0 / 6, -1.5, 0.5, -1.0 / 12}};
    } else if (i == n - 1) {
      r = {5, {0, -1, -2, -3, -4}, {25.0 / 12, -4.0, 3.0, -4.0 / 3, 0.25}};
    } else {
      r = {4, {-2, -1, 1, 2, 0}, {1.0 / 12, -8.0 / 12, 8.0 / 12, -1.0 / 12, 0}};
    }
  } else {
    if (i == 0) {
      r = {3, {0, 1, 2, 0, 0}, {-1.5, 2.0, -0.5, 0, 0}};
    } else if (i == n - 1) {
      r = {3, {0, -1, -2, 0, 0}, {1.5, -2.0, 0.5, 0, 0}};
    } else {
      r = {2, {-1, 1, 0, 0, 0}, {-0.5, 0.5, 0, 0, 0}};
    }
  }
  for (int m = 0; m < r.len; ++m) r.c[m] *= ih;
  return r;
}

struct LineView {
  std::int64_t base;   // flat index of the first node
  long stride;         // node stride along the line
  long len;            // nodes in the line
  double factor;       // product of the two transverse weights
  const double* wline; // per-node weight along the line
};

thread_local std::vector<double> tl_buf1;
thread_local std::vector<double> tl_buf2;

}  // namespace

Geometry::Geometry(std::shared_ptr<const GridSpec> grid) : grid_(std::move(grid)) {
  order_ = grid_->fd_order;
  const double h = grid_->h;
  w_.resize(grid_->boxes.size());
  for (std::size_t b = 0; b < grid_->boxes.size(); ++b) {
    for (int d = 0; d < 3; ++d) {
      const long n = grid_->boxes[b].n[d];
      auto& w = w_[b][d];
      w.assign(static_cast<std::size_t>(n), h);
      w.front() = 0.5 * h;
      w.back() = 0.5 * h;
    }
  }
}

double Geometry::node_weight(int box, long i, long j, long k) const {
  const auto& w = w_[static_cast<std::size_t>(box)];
  return w[0][static_cast<std::size_t>(i)] * w[1][static_cast<std::size_t>(j)] *
         w[2][static_cast<std::size_t>(k)];
}

// --- mass-type kernels: iterate rows (j,k), contiguous in i ----------------

double Geometry::mass_dot(const double* u, const double* v) const {
  double total = 0.0;
  for (std::size_t b = 0; b < grid_->boxes.size(); ++b) {
    const GridBox& box = grid_->boxes[b];
    const long n0 = box.n[0], n1 = box.n[1], n2 = box.n[2];
    const double* wx = w_[b][0].data();
    const double* wy = w_[b][1].data();
    const double* wz = w_[b][2].data();
    total += parallel_sum(n1 * n2, kRowChunk, [&](std::int64_t lo, std::int64_t hi) {
      double s = 0.0;
      for (std::int64_t row = lo; row < hi; ++row) {
        const long j = static_cast<long>(row % n1);
        const long k = static_cast<long>(row / n1);
        const double f = wy[j] * wz[k];
        const double* pu = u + box.offset + (k * n1 + j) * n0;
        const double* pv = v + box.offset + (k * n1 + j) * n0;
        double rs = 0.0;
        for (long i = 0; i < n0; ++i) rs += wx[i] * pu[i] * pv[i];
        s += f * rs;
      }
      return s;
    });
  }
  return total;
}

double Geometry::mass_dot_coeff(const double* c, const double* u, const double* v) const {
  double total = 0.0;
  for (std::size_t b = 0; b < grid_->boxes.size(); ++b) {
    const GridBox& box = grid_->boxes[b];
    const long n0 = box.n[0], n1 = box.n[1], n2 = box.n[2];
    const double* wx = w_[b][0].data();
    const double* wy = w_[b][1].data();
    const double* wz = w_[b][2].data();
    total += parallel_sum(n1 * n2, kRowChunk, [&](std::int64_t lo, std::int64_t hi) {
      double s = 0.0;
      for (std::int64_t row = lo; row < hi; ++row) {
        const long j = static_cast<long>(row % n1);
        const long k = static_cast<long>(row / n1);
        const double f = wy[j] * wz[k];
        const std::int64_t base = box.offset + (k * n1 + j) * n0;
        double rs = 0.0;
        for (long i = 0; i < n0; ++i) rs += wx[i] * c[base + i] * u[base + i] * v[base + i];
        s += f * rs;
      }
      return s;
    });
  }
  return total;
}

double Geometry::mass_sum(const double* u) const {
  double total = 0.0;
  for (std::size_t b = 0; b < grid_->boxes.size(); ++b) {
    const GridBox& box = grid_->boxes[b];
    const long n0 = box.n[0], n1 = box.n[1], n2 = box.n[2];
    const double* wx = w_[b][0].data();
    const double* wy = w_[b][1].data();
    const double* wz = w_[b][2].data();
    total += parallel_sum(n1 * n2, kRowChunk, [&](std::int64_t lo, std::int64_t hi) {
      double s = 0.0;
      for (std::int64_t row = lo; row < hi; ++row) {
        const long j = static_cast<long>(row % n1);
        const long k = static_cast<long>(row / n1);
        const double* pu = u + box.offset + (k * n1 + j) * n0;
        double rs = 0.0;
        for (long i = 0; i < n0; ++i) rs += wx[i] * pu[i];
        s += wy[j] * wz[k] * rs;
      }
      return s;
    });
  }
  return total;
}

double Geometry::grad_dot_analytic(const double* ax, const double* ay, const double* az,
                                   const double* bx, const double* by,
                                   const double* bz) const {
  double total = 0.0;
  for (std::size_t b = 0; b < grid_->boxes.size(); ++b) {
    const GridBox& box = grid_->boxes[b];
    const long n0 = box.n[0], n1 = box.n[1], n2 = box.n[2];
    const double* wx = w_[b][0].data();
    const double* wy = w_[b][1].data();
    const double* wz = w_[b][2].data();
    total += parallel_sum(n1 * n2, kRowChunk, [&](std::int64_t lo, std::int64_t hi) {
      double s = 0.0;
      for (std::int64_t row = lo; row < hi; ++row) {
        const long j = static_cast<long>(row % n1);
        const long k = static_cast<long>(row / n1);
        const std::int64_t base = box.offset + (k * n1 + j) * n0;
        double rs = 0.0;
        for (long i = 0; i < n0; ++i) {
          const std::int64_t m = base + i;
          rs += wx[i] * (ax[m] * bx[m] + ay[m] * by[m] + az[m] * bz[m]);
        }
        s += wy[j] * wz[k] * rs;
      }
      return s;
    });
  }
  return total;
}

// --- gradient kernels: per-axis line sweeps ---------------------------------

namespace {

LineView make_line(const GridBox& box, const std::array<std::vector<double>, 3>& w,
                   int axis, std::int64_t line) {
  const long n0 = box.n[0], n1 = box.n[1];
  LineView lv{};
  switch (axis) {
    case 0: {
      const long j = static_cast<long>(line % n1);
      const long k = static_cast<long>(line / n1);
      lv.base = box.offset + (k * n1 + j) * n0;
      lv.stride = 1;
      lv.len = box.n[0];
      lv.factor = w[1][static_cast<std::size_t>(j)] * w[2][static_cast<std::size_t>(k)];
      lv.wline = w[0].data();
      break;
    }
    case 1: {
      const long i = static_cast<long>(line % n0);
      const long k = static_cast<long>(line / n0);
      lv.base = box.offset + k * n1 * n0 + i;
      lv.stride = n0;
      lv.len = box.n[1];
      lv.factor = w[0][static_cast<std::size_t>(i)] * w[2][static_cast<std::size_t>(k)];
      lv.wline = w[1].data();
      break;
    }
    default: {
      const long i = static_cast<long>(line % n0);
      const long j = static_cast<long>(line / n0);
      lv.base = box.offset + j * n0 + i;
      lv.stride = n0 * n1;
      lv.len = box.n[2];
      lv.factor = w[0][static_cast<std::size_t>(i)] * w[1][static_cast<std::size_t>(j)];
      lv.wline = w[2].data();
      break;
    }
  }
  return lv;
}

std::int64_t line_count(const GridBox& box, int axis) {
  switch (axis) {
    case 0: return static_cast<std::int64_t>(box.n[1]) * box.n[2];
    case 1: return static_cast<std::int64_t>(box.n[0]) * box.n[2];
    default: return static_cast<std::int64_t>(box.n[0]) * box.n[1];
  }
}

}  // namespace

double Geometry::grad_dot(const double* u, const double* v) const {
  const double ih = 1.0 / grid_->h;
  double total = 0.0;
  for (std::size_t b = 0; b < grid_->boxes.size(); ++b) {
    const GridBox& box = grid_->boxes[b];
    for (int axis = 0; axis < 3; ++axis) {
      total += parallel_sum(
          line_count(box, axis), kLineChunk, [&](std::int64_t lo, std::int64_t hi) {
            auto& bu = tl_buf1;
            auto& bv = tl_buf2;
            double s = 0.0;
            for (std::int64_t line = lo; line < hi; ++line) {
              const LineView lv = make_line(box, w_[b], axis, line);
              bu.resize(static_cast<std::size_t>(lv.len));
              bv.resize(static_cast<std::size_t>(lv.len));
              line_deriv(u + lv.base, lv.len, lv.stride, ih, order_, bu.data());
              if (u == v) {
                double rs = 0.0;
                for (long i = 0; i < lv.len; ++i) rs += lv.wline[i] * bu[i] * bu[i];
                s += lv.factor * rs;
              } else {
                line_deriv(v + lv.base, lv.len, lv.stride, ih, order_, bv.data());
                double rs = 0.0;
                for (long i = 0; i < lv.len; ++i) rs += lv.wline[i] * bu[i] * bv[i];
                s += lv.factor * rs;
              }
            }
            return s;
          });
    }
  }
  return total;
}

double Geometry::grad_dot_mixed(const double* gx, const double* gy, const double* gz,
                                const double* v) const {
  const double ih = 1.0 / grid_->h;
  const double* g[3] = {gx, gy, gz};
  double total = 0.0;
  for (std::size_t b = 0; b < grid_->boxes.size(); ++b) {
    const GridBox& box = grid_->boxes[b];
    for (int axis = 0; axis < 3; ++axis) {
      const double* ga = g[axis];
      total += parallel_sum(
          line_count(box, axis), kLineChunk, [&](std::int64_t lo, std::int64_t hi) {
            auto& bv = tl_buf1;
            double s = 0.0;
            for (std::int64_t line = lo; line < hi; ++line) {
              const LineView lv = make_line(box, w_[b], axis, line);
              bv.resize(static_cast<std::size_t>(lv.len));
              line_deriv(v + lv.base, lv.len, lv.stride, ih, order_, bv.data());
              double rs = 0.0;
              for (long i = 0; i < lv.len; ++i)
                rs += lv.wline[i] * ga[lv.base + i * lv.stride] * bv[i];
              s += lv.factor * rs;
            }
            return s;
          });
    }
  }
  return total;
}

void Geometry::add_mass(const double* u, const double* coeff_or_null, double scale,
                        double* out) const {
  for (std::size_t b = 0; b < grid_->boxes.size(); ++b) {
    const GridBox& box = grid_->boxes[b];
    const long n0 = box.n[0], n1 = box.n[1], n2 = box.n[2];
    const double* wx = w_[b][0].data();
    const double* wy = w_[b][1].data();
    const double* wz = w_[b][2].data();
    parallel_for(n1 * n2, kRowChunk, [&](std::int64_t lo, std::int64_t hi) {
      for (std::int64_t row = lo; row < hi; ++row) {
        const long j = static_cast<long>(row % n1);
        const long k = static_cast<long>(row / n1);
        const double f = scale * wy[j] * wz[k];
        const std::int64_t base = box.offset + (k * n1 + j) * n0;
        if (coeff_or_null) {
          for (long i = 0; i < n0; ++i)
            out[base + i] += f * wx[i] * coeff_or_null[base + i] * u[base + i];
        } else {
          for (long i = 0; i < n0; ++i) out[base + i] += f * wx[i] * u[base + i];
        }
      }
    });
  }
}

void Geometry::add_stiffness(const double* u, double scale, double* out) const {
  const double ih = 1.0 / grid_->h;
  for (std::size_t b = 0; b < grid_->boxes.size(); ++b) {
    const GridBox& box = grid_->boxes[b];
    for (int axis = 0; axis < 3; ++axis) {
      parallel_for(line_count(box, axis), kLineChunk,
                   [&](std::int64_t lo, std::int64_t hi) {
                     auto& t = tl_buf1;
                     for (std::int64_t line = lo; line < hi; ++line) {
                       const LineView lv = make_line(box, w_[b], axis, line);
                       t.resize(static_cast<std::size_t>(lv.len));
                       line_deriv(u + lv.base, lv.len, lv.stride, ih, order_, t.data());
                       const double f = scale * lv.factor;
                       for (long i = 0; i < lv.len; ++i) t[static_cast<std::size_t>(i)] *= f * lv.wline[i];
                       line_deriv_transpose(t.data(), lv.len, lv.stride, ih, order_,
                                            out + lv.base);
                     }
                   });
    }
  }
}

void Geometry::add_grad_functional(const double* gx, const double* gy, const double* gz,
                                   double scale, double* out) const {
  const double ih = 1.0 / grid_->h;
  const double* g[3] = {gx, gy, gz};
  for (std::size_t b = 0; b < grid_->boxes.size(); ++b) {
    const GridBox& box = grid_->boxes[b];
    for (int axis = 0; axis < 3; ++axis) {
      const double* ga = g[axis];
      parallel_for(line_count(box, axis), kLineChunk,
                   [&](std::int64_t lo, std::int64_t hi) {
                     auto& t = tl_buf1;
                     for (std::int64_t line = lo; line < hi; ++line) {
                       const LineView lv = make_line(box, w_[b], axis, line);
                       t.resize(static_cast<std::size_t>(lv.len));
                       const double f = scale * lv.factor;
                       for (long i = 0; i < lv.len; ++i)
                         t[static_cast<std::size_t>(i)] =
                             f * lv.wline[i] * ga[lv.base + i * lv.stride];
                       line_deriv_transpose(t.data(), lv.len, lv.stride, ih, order_,
                                            out + lv.base);
                     }
                   });
    }
  }
}

void Geometry::apply_metric(const double* u, double eps2a, double* out) const {
  parallel_for(grid_->total_nodes, [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) out[i] = 0.0;
  });
  add_mass(u, nullptr, 1.0, out);
  add_stiffness(u, eps2a, out);
}

std::vector<double> Geometry::metric_diagonal(double eps2a) const {
  std::vector<double> diag(static_cast<std::size_t>(grid_->total_nodes), 0.0);
  const double ih = 1.0 / grid_->h;
  for (std::size_t b = 0; b < grid_->boxes.size(); ++b) {
    const GridBox& box = grid_->boxes[b];
    const long n0 = box.n[0], n1 = box.n[1], n2 = box.n[2];
    const double* wx = w_[b][0].data();
    const double* wy = w_[b][1].data();
    const double* wz = w_[b][2].data();
    // mass part
    for (long k = 0; k < n2; ++k)
      for (long j = 0; j < n1; ++j) {
        const double f = wy[j] * wz[k];
        const std::int64_t base = box.offset + (k * n1 + j) * n0;
        for (long i = 0; i < n0; ++i) diag[static_cast<std::size_t>(base + i)] += f * wx[i];
      }
    // stiffness diagonal: (D^T W D)_{jj} = sum_i W_i D_{ij}^2 per axis
    for (int axis = 0; axis < 3; ++axis) {
      const std::int64_t lines = line_count(box, axis);
      for (std::int64_t line = 0; line < lines; ++line) {
        const LineView lv = make_line(box, w_[b], axis, line);
        for (long i = 0; i < lv.len; ++i) {
          const StencilRow row = stencil_row(i, lv.len, ih, order_);
          const double wi = lv.factor * lv.wline[i];
          for (int m = 0; m < row.len; ++m) {
            diag[static_cast<std::size_t>(lv.base + (i + row.off[m]) * lv.stride)] +=
                eps2a * wi * row.c[m] * row.c[m];
          }
        }
      }
    }
  }
  return diag;
}

}  // namespace peaks
