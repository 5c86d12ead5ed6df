#include "peaks/radial_profile.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "peaks/errors.hpp"
#include "peaks/report.hpp"

namespace peaks {

namespace {

// Hermite basis on [0,1]: value = h00 y0 + h10 h m0 + h01 y1 + h11 h m1.
inline double hermite(double s, double y0, double y1, double m0, double m1, double h) {
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * m0 +
         (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * h * m1;
}

}  // namespace

double RadialProfile::value(double rr) const {
  if (rr < 0.0) rr = -rr;
  const double hh = h();
  if (rr >= rmax()) {
    return decay.amp * std::pow(rr, decay.power) * std::exp(-decay.rate * rr);
  }
  const auto i = static_cast<std::size_t>(rr / hh);
  const std::size_t i0 = std::min(i, r.size() - 2);
  const double s = (rr - r[i0]) / hh;
  return hermite(s, u[i0], u[i0 + 1], du[i0], du[i0 + 1], hh);
}

double RadialProfile::deriv(double rr) const {
  if (rr < 0.0) rr = -rr;
  const double hh = h();
  if (rr >= rmax()) {
    return decay.amp * std::pow(rr, decay.power) * std::exp(-decay.rate * rr) *
           (decay.power / rr - decay.rate);
  }
  const auto i = static_cast<std::size_t>(rr / hh);
  const std::size_t i0 = std::min(i, r.size() - 2);
  const double s = (rr - r[i0]) / hh;
  return hermite(s, du[i0], du[i0 + 1], d2u[i0], d2u[i0 + 1], hh);
}

double RadialProfile::second(double rr) const {
  if (rr < 0.0) rr = -rr;
  const double hh = h();
  if (rr >= rmax()) {
    const double f = decay.amp * std::pow(rr, decay.power) * std::exp(-decay.rate * rr);
    const double lin = decay.power / rr - decay.rate;
    return f * (lin * lin - decay.power / (rr * rr));
  }
  const auto i = static_cast<std::size_t>(rr / hh);
  const std::size_t i0 = std::min(i, r.size() - 2);
  const double s = (rr - r[i0]) / hh;
  // d/dr of the cubic Hermite interpolant of u'.
  const double s2 = s * s;
  return (6 * s2 - 6 * s) / hh * du[i0] + (3 * s2 - 4 * s + 1) * d2u[i0] +
         (-6 * s2 + 6 * s) / hh * du[i0 + 1] + (3 * s2 - 2 * s) * d2u[i0 + 1];
}

bool RadialProfile::check_invariants(std::string* why) const {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (r.size() < 16 || r.size() != u.size() || r.size() != du.size())
    return fail("inconsistent sizes");
  if (r[0] != 0.0) return fail("grid must start at 0");
  if (du[0] != 0.0) return fail("u'(0) must vanish");
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(u[i] > 0.0)) return fail("values must be strictly positive");
    if (i > 0 && !(u[i] < u[i - 1])) return fail("values must be strictly decreasing");
  }
  if (decay.max_rel_residual > tail_tol) return fail("tail fit residual above tolerance");
  return true;
}

LogLinFit fit_decay(const RadialProfile& p, double win_lo, double win_hi) {
  std::vector<double> rw, uw;
  for (std::size_t i = 0; i < p.r.size(); ++i) {
    if (p.r[i] >= win_lo && p.r[i] <= win_hi && p.u[i] > 0.0) {
      rw.push_back(p.r[i]);
      uw.push_back(p.u[i]);
    }
  }
  if (rw.size() < 8) throw DegenerateWindow("fit_decay: fewer than 8 samples in window");
  return fit_log_decay(rw, uw);
}

void save_profile_cache(const std::string& path, double q, double tol,
                        const RadialProfile& p) {
  std::string out;
  out.reserve(p.r.size() * 64 + 128);
  out += "q=" + g17(q) + " tol=" + g17(tol) + " rmax=" + g17(p.rmax()) +
         " u0=" + g17(p.u[0]) + "\n";
  for (std::size_t i = 0; i < p.r.size(); ++i) {
    out += g17(p.r[i]);
    out += ' ';
    out += g17(p.u[i]);
    out += ' ';
    out += g17(p.du[i]);
    out += '\n';
  }
  // Atomic-ish replace so concurrent runs sharing a cache directory are safe.
  const std::string tmp = path + ".tmp";
  write_text_file(tmp, out);
  std::rename(tmp.c_str(), path.c_str());
}

bool load_profile_cache(const std::string& path, ProfileCacheHeader* hdr,
                        RadialProfile* p) {
  std::ifstream in(path);
  if (!in) return false;
  std::string header;
  if (!std::getline(in, header)) return false;
  if (std::sscanf(header.c_str(), "q=%lf tol=%lf rmax=%lf u0=%lf", &hdr->q, &hdr->tol,
                  &hdr->rmax, &hdr->u0) != 4)
    return false;
  p->r.clear();
  p->u.clear();
  p->du.clear();
  double r, u, du;
  while (in >> r >> u >> du) {
    p->r.push_back(r);
    p->u.push_back(u);
    p->du.push_back(du);
  }
  return !p->r.empty() && p->r.size() == p->u.size();
}

}  // namespace peaks
