#include "peaks/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "peaks/errors.hpp"

namespace peaks {

namespace {

double norm_head(const Point3& x, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

double norm_tail(const Point3& x, int t) {
  double s = 0.0;
  for (int i = t; i < 3; ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

}  // namespace

PotentialModel make_constant_model(double value) {
  PotentialModel m;
  m.name = "constant";
  m.eval = [value](const Point3&) { return value; };
  m.t = 3;
  m.h = 2.0;
  m.h1 = 2.0;
  m.lambda = 1.0;
  m.sigma = 2.0;
  m.delta = 1.0;
  m.Q0 = value;
  m.sup_bound = value;
  m.analytic_deriv = [](const Point3&, int order) {
    return std::vector<double>(static_cast<std::size_t>(std::pow(3, order)), 0.0);
  };
  return m;
}

PotentialModel make_remark_model() {
  PotentialModel m;
  m.name = "remark";
  m.eval = [](const Point3& x) {
    return std::sin(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) + 1.0;
  };
  m.t = 3;
  m.h = 2.0;
  m.h1 = 2.0;
  m.lambda = 1.0;
  m.sigma = 2.0;
  m.delta = 1.0;
  m.Q0 = 1.0;
  m.sup_bound = 2.0;
  m.P1 = [](const Point3& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; };
  m.analytic_deriv = [](const Point3& x, int order) -> std::vector<double> {
    const double s = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    const double cs = std::cos(s), ss = std::sin(s);
    if (order == 1) {
      return {2 * cs * x[0], 2 * cs * x[1], 2 * cs * x[2]};
    }
    if (order == 2) {
      std::vector<double> T(9, 0.0);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          T[static_cast<std::size_t>(3 * i + j)] =
              (i == j ? 2 * cs : 0.0) - 4 * ss * x[i] * x[j];
      return T;
    }
    if (order == 3) {
      std::vector<double> T(27, 0.0);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          for (int k = 0; k < 3; ++k) {
            double v = -8 * cs * x[i] * x[j] * x[k];
            if (i == j) v += -4 * ss * x[k];
            if (i == k) v += -4 * ss * x[j];
            if (j == k) v += -4 * ss * x[i];
            T[static_cast<std::size_t>(9 * i + 3 * j + k)] = v;
          }
      return T;
    }
    throw OrderTooHigh("remark model: analytic derivatives available up to order 3");
  };
  return m;
}

PotentialModel make_saddle_model() {
  PotentialModel m;
  m.name = "saddle";
  m.eval = [](const Point3& x) { return 1.0 + x[0] * x[0] + x[1] * x[1] - x[2] * x[2]; };
  m.t = 2;
  m.h = 2.0;
  m.h1 = 2.0;
  m.lambda = 1.0;
  m.sigma = 2.0;
  m.delta = 1.0;
  m.Q0 = 1.0;
  m.sup_bound = 3.0;  // on the expansion ball
  m.P1 = [](const Point3& x) { return x[0] * x[0] + x[1] * x[1]; };
  m.P2 = [](const Point3& x) { return x[2] * x[2]; };
  m.analytic_deriv = [](const Point3& x, int order) -> std::vector<double> {
    if (order == 1) return {2 * x[0], 2 * x[1], -2 * x[2]};
    if (order == 2) return {2, 0, 0, 0, 2, 0, 0, 0, -2};
    if (order == 3) return std::vector<double>(27, 0.0);
    throw OrderTooHigh("saddle model: analytic derivatives available up to order 3");
  };
  return m;
}

double eval_Q(const PotentialModel& m, const Point3& x) { return m.eval(x); }

namespace {

// Nested central differences for an order-m mixed partial, with an
// order-dependent step balancing truncation against roundoff.
double fd_partial(const std::function<double(const Point3&)>& f, Point3 x,
                  const int* idx, int order, double step) {
  if (order == 0) return f(x);
  Point3 xp = x, xm = x;
  xp[idx[0]] += step;
  xm[idx[0]] -= step;
  return (fd_partial(f, xp, idx + 1, order - 1, step) -
          fd_partial(f, xm, idx + 1, order - 1, step)) /
         (2.0 * step);
}

double fd_step(const Point3& x, int order) {
  const double scale = std::max(1.0, std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  // Roundoff in an order-m nested central difference grows like ulp / step^m,
  // so the first-order step of 1e-5 cannot be reused for higher orders.
  switch (order) {
    case 1: return 1e-5 * scale;
    case 2: return 3e-4 * scale;
    default: return 2e-3 * scale;
  }
}

}  // namespace

std::vector<double> derivatives_Q(const PotentialModel& m, const Point3& x, int order) {
  if (order < 1) throw ValidationError("derivatives_Q: order must be >= 1");
  if (order > m.order_cap())
    throw OrderTooHigh("derivatives_Q: order exceeds [h]+1 = " +
                       std::to_string(m.order_cap()));
  if (m.analytic_deriv) return m.analytic_deriv(x, order);

  const double step = fd_step(x, order);
  const auto size = static_cast<std::size_t>(std::pow(3, order));
  std::vector<double> T(size, 0.0);
  std::vector<int> idx(static_cast<std::size_t>(order), 0);
  for (std::size_t flat = 0; flat < size; ++flat) {
    std::size_t rem = flat;
    for (int d = order - 1; d >= 0; --d) {
      idx[static_cast<std::size_t>(d)] = static_cast<int>(rem % 3);
      rem /= 3;
    }
    // Mixed partials commute; compute each sorted multi-index once.
    bool sorted = true;
    for (int d = 0; d + 1 < order; ++d)
      if (idx[static_cast<std::size_t>(d)] > idx[static_cast<std::size_t>(d + 1)]) {
        sorted = false;
        break;
      }
    if (!sorted) continue;
    T[flat] = fd_partial(m.eval, x, idx.data(), order, step);
  }
  // Scatter the computed sorted entries to all permutations.
  for (std::size_t flat = 0; flat < size; ++flat) {
    std::size_t rem = flat;
    std::vector<int> id(static_cast<std::size_t>(order));
    for (int d = order - 1; d >= 0; --d) {
      id[static_cast<std::size_t>(d)] = static_cast<int>(rem % 3);
      rem /= 3;
    }
    auto srt = id;
    std::sort(srt.begin(), srt.end());
    std::size_t src = 0;
    for (int d = 0; d < order; ++d) src = src * 3 + static_cast<std::size_t>(srt[static_cast<std::size_t>(d)]);
    T[flat] = T[src];
  }
  return T;
}

double tensor_norm(const std::vector<double>& tensor) {
  double s = 0.0;
  for (double v : tensor) s += v * v;
  return std::sqrt(s);
}

namespace {

// Deterministic unit directions (spherical Fibonacci lattice).
Point3 fib_dir(int i, int n) {
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double phi = 2.0 * 3.14159265358979323846 * static_cast<double>(i) / golden;
  return {rho * std::cos(phi), rho * std::sin(phi), z};
}

}  // namespace

Q3Report check_Q3(const PotentialModel& m, int n_samples) {
  Q3Report rep;
  const int n_dirs = 16;
  const int n_radii = std::max(8, n_samples / n_dirs);
  const double lo = m.delta / 100.0;  // two decades
  const int n_decades = 2;
  rep.decade_sup.assign(n_decades, 0.0);
  for (int ir = 0; ir < n_radii; ++ir) {
    const double fr = static_cast<double>(ir) / static_cast<double>(n_radii - 1);
    const double radius = lo * std::pow(m.delta / lo, fr);
    const int decade = std::min(n_decades - 1,
                                static_cast<int>(std::log10(m.delta / radius)));
    for (int id = 0; id < n_dirs; ++id) {
      const Point3 dir = fib_dir(id, n_dirs);
      const Point3 x = {radius * dir[0], radius * dir[1], radius * dir[2]};
      const double p1 = m.P1 ? m.P1(x) : 0.0;
      const double p2 = m.P2 ? m.P2(x) : 0.0;
      const double R = m.eval(x) - m.Q0 - p1 + p2;
      const double ratio = std::fabs(R) / std::pow(radius, m.h1 + m.sigma);
      rep.sup_ratio = std::max(rep.sup_ratio, ratio);
      auto& d = rep.decade_sup[static_cast<std::size_t>(n_decades - 1 - decade)];
      d = std::max(d, ratio);
      ++rep.n_samples;
    }
  }
  // Bounded means the ratio does not blow up approaching the origin.
  const double inner = rep.decade_sup.back();
  const double outer = rep.decade_sup.front();
  rep.pass = inner <= std::max(1.5 * outer, 1e-12 * std::fabs(m.Q0));
  return rep;
}

StructureReport check_structure(const PotentialModel& m, int n_samples) {
  StructureReport rep;
  std::vector<double> g = derivatives_Q(m, {0.0, 0.0, 0.0}, 1);
  rep.grad_norm_at_origin = tensor_norm(g);
  rep.q2_pass = rep.grad_norm_at_origin < 1e-10;
  rep.q12_min_ratio = std::numeric_limits<double>::infinity();
  const int n = std::max(16, n_samples);
  for (int i = 0; i < n; ++i) {
    const Point3 dir = fib_dir(i, n);
    const double radius = m.delta * (static_cast<double>(i % 7) + 1.0) / 7.0;
    Point3 xp{0, 0, 0}, xq{0, 0, 0};
    for (int d = 0; d < m.t; ++d) xp[d] = radius * dir[d];
    const double np = norm_head(xp, m.t);
    if (m.P1 && np <= m.delta) {
      const double err = std::fabs(m.P1(xp) - m.lambda * std::pow(np, m.h1));
      rep.p1_max_abs_err = std::max(rep.p1_max_abs_err, err);
    }
    if (m.t < 3 && m.P2) {
      for (int d = m.t; d < 3; ++d) xq[d] = radius * dir[d];
      const double nq = norm_tail(xq, m.t);
      if (nq > 1e-8 && nq <= m.delta) {
        // <DP2(x''), x''> by central differences of the declared P2
        double dp = 0.0;
        const double step = 1e-6 * std::max(1.0, nq);
        for (int d = m.t; d < 3; ++d) {
          Point3 a = xq, b = xq;
          a[d] += step;
          b[d] -= step;
          dp += (m.P2(a) - m.P2(b)) / (2.0 * step) * xq[d];
        }
        rep.q12_min_ratio = std::min(rep.q12_min_ratio, dp / std::pow(nq, m.h));
      }
    }
  }
  if (!std::isfinite(rep.q12_min_ratio)) rep.q12_min_ratio = 0.0;
  return rep;
}

}  // namespace peaks
