#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace peaks {

// Upper incomplete gamma Gamma(s, x) via the Lentz continued fraction.
// Intended for the tail regime x > s + 1; throws outside it.
double upper_incomplete_gamma(double s, double x);

// Integral over [R, inf) of (amp * r^power * exp(-rate*r))^p * r^2 dr.
// This is the analytic tail of a radial L^p-type integral once the profile
// has been replaced by its fitted decay form.
double radial_tail_integral(double amp, double power, double rate, double p, double R);

// Least-squares fit of log y = log C + a*log r - b*r on (r_i, y_i), y_i > 0.
// Returns {C, a, b} plus the max relative residual of the fit over the window.
struct LogLinFit {
  double amp = 0.0;
  double power = 0.0;
  double rate = 0.0;
  double max_rel_residual = 0.0;
};
LogLinFit fit_log_decay(std::span<const double> r, std::span<const double> y);

// Straight-line least squares y = c0 + c1*x; returns {c0, c1}.
std::array<double, 2> fit_line(std::span<const double> x, std::span<const double> y);

// Composite Simpson on a uniform grid (even interval count required).
double simpson_uniform(std::span<const double> y, double h);

std::uint64_t fnv1a(const void* data, std::size_t len);
std::uint64_t fnv1a_file(const std::string& path);

}  // namespace peaks
