#pragma once

#include <string>
#include <vector>

#include "peaks/ground_state.hpp"

namespace peaks {

// A candidate k-peak configuration: peak locations inside B_delta(0) with
// rescaled pairwise separations eta|y_i - y_j|/eps >= R1.
struct PeakConfig {
  std::vector<Point3> points;
  double epsilon = 0.0;
  double delta = 1.0;
  double R1 = 10.0;

  int k() const { return static_cast<int>(points.size()); }
};

// Membership in the admissible set; on failure fills *why when given.
bool validate_peaks(const PeakConfig& Y, double eta, std::string* why = nullptr);

// Minimal margin to the constraint boundary: min over peaks of (delta - |y_i|)
// and over pairs of (eta d_ij / eps - R1) * eps / eta (both as distances).
double peak_margin(const PeakConfig& Y, double eta);

double peak_distance(const Point3& a, const Point3& b);

}  // namespace peaks
