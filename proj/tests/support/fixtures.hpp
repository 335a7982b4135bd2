#pragma once

#include <cmath>
#include <vector>

#include "cavityqed/cavity_em.hpp"
#include "cavityqed/constants.hpp"
#include "cavityqed/transmon.hpp"

namespace cavityqed::testing {

using namespace cavityqed::units;

// WR-90 section, 22.86 x 10.16 x 40 mm, with two feeds on the centerline.
inline CavityGeometry wr90_cavity() { return {22.86 * mm, 10.16 * mm, 40.0 * mm, 1.0}; }

inline CoaxProbe feed_probe(double z_mm) { return {11.43 * mm, z_mm * mm, 0.05 * mm, 2.5 * mm, 0.75 * mm}; }

inline std::vector<CoaxProbe> feed_probes() { return {feed_probe(10.0), feed_probe(30.0)}; }

inline DipoleSpec centered_dipole() {
  DipoleSpec d;
  d.length = 1.0 * mm;
  d.radius = 0.04 * mm;
  d.gap = 0.102 * mm;
  d.center = Vec3(11.43 * mm, 5.08 * mm, 20.0 * mm);
  return d;
}

inline DipoleSpec dipole_at(double x_mm, double z_mm) {
  DipoleSpec d = centered_dipole();
  d.center = Vec3(x_mm * mm, 5.08 * mm, z_mm * mm);
  return d;
}

// Textbook resonance of an empty box: f = c/2 sqrt((m/a)^2 + (n/b)^2 + (p/d)^2).
inline double box_resonance_hz(const CavityGeometry& g, int m, int n, int p) {
  const double s = (m / g.a) * (m / g.a) + (n / g.b) * (n / g.b) + (p / g.d) * (p / g.d);
  return 0.5 * constants::c0 * std::sqrt(s / g.eps_r);
}

}  // namespace cavityqed::testing
