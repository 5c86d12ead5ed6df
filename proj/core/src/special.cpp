#include "peaks/special.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "peaks/errors.hpp"

namespace peaks {

double upper_incomplete_gamma(double s, double x) {
  if (!(x > 0.0)) throw ValidationError("upper_incomplete_gamma: x must be positive");
  if (!(x > s + 1.0))
    throw ValidationError("upper_incomplete_gamma: continued fraction needs x > s + 1");
  // Modified Lentz evaluation of the standard continued fraction
  //   Gamma(s,x) = e^{-x} x^s / (x+1-s - 1(1-s)/(x+3-s - 2(2-s)/(...)))
  const double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) {
      return std::exp(-x + s * std::log(x)) * h;
    }
  }
  throw NonConvergence("upper_incomplete_gamma: continued fraction did not converge");
}

double radial_tail_integral(double amp, double power, double rate, double p, double R) {
  if (!(rate > 0.0) || !(p > 0.0) || !(R > 0.0))
    throw ValidationError("radial_tail_integral: rate, p, R must be positive");
  const double s = p * power + 3.0;
  const double lambda = p * rate;
  return std::pow(amp, p) * std::pow(lambda, -s) * upper_incomplete_gamma(s, lambda * R);
}

namespace {

// Solves a 3x3 system in place with partial pivoting.
void solve3(double A[3][3], double b[3], double x[3]) {
  int piv[3] = {0, 1, 2};
  for (int col = 0; col < 3; ++col) {
    int best = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::fabs(A[piv[r]][col]) > std::fabs(A[piv[best]][col])) best = r;
    std::swap(piv[col], piv[best]);
    const double d = A[piv[col]][col];
    if (d == 0.0) throw SolverError("fit_log_decay: singular normal equations");
    for (int r = col + 1; r < 3; ++r) {
      const double f = A[piv[r]][col] / d;
      for (int c = col; c < 3; ++c) A[piv[r]][c] -= f * A[piv[col]][c];
      b[piv[r]] -= f * b[piv[col]];
    }
  }
  for (int col = 2; col >= 0; --col) {
    double v = b[piv[col]];
    for (int c = col + 1; c < 3; ++c) v -= A[piv[col]][c] * x[c];
    x[col] = v / A[piv[col]][col];
  }
}

}  // namespace

LogLinFit fit_log_decay(std::span<const double> r, std::span<const double> y) {
  if (r.size() != y.size() || r.size() < 8)
    throw DegenerateWindow("fit_log_decay: need at least 8 samples");
  double A[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
  double rhs[3] = {0, 0, 0};
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(y[i] > 0.0) || !(r[i] > 0.0))
      throw DegenerateWindow("fit_log_decay: samples must be positive");
    const double basis[3] = {1.0, std::log(r[i]), -r[i]};
    const double ly = std::log(y[i]);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) A[a][b] += basis[a] * basis[b];
      rhs[a] += basis[a] * ly;
    }
  }
  double coef[3];
  solve3(A, rhs, coef);
  LogLinFit fit;
  fit.amp = std::exp(coef[0]);
  fit.power = coef[1];
  fit.rate = coef[2];
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double model = fit.amp * std::pow(r[i], fit.power) * std::exp(-fit.rate * r[i]);
    fit.max_rel_residual = std::max(fit.max_rel_residual, std::fabs(model - y[i]) / y[i]);
  }
  return fit;
}

std::array<double, 2> fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw DegenerateWindow("fit_line: need at least 2 samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw SolverError("fit_line: degenerate abscissae");
  const double c1 = (n * sxy - sx * sy) / det;
  const double c0 = (sy - c1 * sx) / n;
  return {c0, c1};
}

double simpson_uniform(std::span<const double> y, double h) {
  const std::size_t n = y.size();
  if (n < 3 || n % 2 == 0)
    throw ValidationError("simpson_uniform: need an odd node count (even interval count)");
  double s4 = 0.0, s2 = 0.0;
  for (std::size_t i = 1; i + 1 < n; i += 2) s4 += y[i];
  for (std::size_t i = 2; i + 1 < n; i += 2) s2 += y[i];
  return h / 3.0 * (y[0] + y[n - 1] + 4.0 * s4 + 2.0 * s2);
}

std::uint64_t fnv1a(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("fnv1a_file: cannot open " + path);
  std::uint64_t h = 14695981039346656037ull;
  char buf[1 << 14];
  while (in) {
    in.read(buf, sizeof(buf));
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
  }
  return h;
}

}  // namespace peaks
