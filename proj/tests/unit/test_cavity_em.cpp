#include <gtest/gtest.h>

#include <cmath>

#include "cavityqed/cavity_em.hpp"
#include "cavityqed/errors.hpp"
#include "fixtures.hpp"

using namespace cavityqed;
using namespace cavityqed::testing;

TEST(CavityModes, FundamentalFrequencies) {
  const CavityGeometry g = wr90_cavity();
  const double te101 = resonant_frequency({ModeFamily::TE, 1, 0, 1}, g) / constants::two_pi;
  const double te102 = resonant_frequency({ModeFamily::TE, 1, 0, 2}, g) / constants::two_pi;
  EXPECT_NEAR(te101 / 1e9, 7.55, 0.002 * 7.55);
  EXPECT_NEAR(te102 / 1e9, 9.96, 0.002 * 9.96);
}

TEST(CavityModes, MatchesTextbookFormula) {
  CavityGeometry g = wr90_cavity();
  for (double eps : {1.0, 2.2}) {
    g.eps_r = eps;
    for (auto idx : {ModeIndex{ModeFamily::TE, 1, 0, 1}, ModeIndex{ModeFamily::TE, 2, 1, 3},
                     ModeIndex{ModeFamily::TM, 1, 1, 0}, ModeIndex{ModeFamily::TM, 2, 3, 4}}) {
      const double f = resonant_frequency(idx, g) / constants::two_pi;
      EXPECT_NEAR(f, box_resonance_hz(g, idx.m, idx.n, idx.p), 1e-12 * f) << idx.label();
    }
  }
}

TEST(CavityModes, ListIsSortedAndComplete) {
  const CavityGeometry g = wr90_cavity();
  const auto modes = mode_list(g, 14e9);
  ASSERT_GE(modes.size(), 3u);
  EXPECT_EQ(modes[0].index().label(), "TE101");
  EXPECT_EQ(modes[1].index().label(), "TE102");
  EXPECT_EQ(modes[2].index().label(), "TE103");
  for (std::size_t i = 1; i < modes.size(); ++i) EXPECT_LE(modes[i - 1].omega(), modes[i].omega());

  // Brute-force count over a generous index box.
  int expected = 0;
  for (int m = 0; m < 10; ++m)
    for (int n = 0; n < 10; ++n)
      for (int p = 0; p < 20; ++p)
        for (auto fam : {ModeFamily::TE, ModeFamily::TM}) {
          const ModeIndex idx{fam, m, n, p};
          if (idx.is_valid() && box_resonance_hz(g, m, n, p) <= 14e9) ++expected;
        }
  EXPECT_EQ(static_cast<int>(modes.size()), expected);
}

TEST(CavityModes, IndexRules) {
  EXPECT_THROW((ModeIndex{ModeFamily::TE, 0, 0, 1}.validate()), DomainError);
  EXPECT_THROW((ModeIndex{ModeFamily::TE, 1, 0, 0}.validate()), DomainError);
  EXPECT_THROW((ModeIndex{ModeFamily::TM, 1, 0, 1}.validate()), DomainError);
  EXPECT_NO_THROW((ModeIndex{ModeFamily::TM, 1, 1, 0}.validate()));
  EXPECT_THROW(CavityMode({ModeFamily::TE, 0, 0, 1}, wr90_cavity()), DomainError);
}

TEST(CavityModes, LabelRoundTrip) {
  for (const char* s : {"TE101", "TM110", "TE203"}) EXPECT_EQ(parse_mode_label(s).label(), s);
  const ModeIndex wide = parse_mode_label("TE1,0,12");
  EXPECT_EQ(wide.p, 12);
  EXPECT_EQ(parse_mode_label(wide.label()), wide);
  for (const char* bad : {"", "TE1", "XE101", "TE1a1", "TE1,0"}) {
    EXPECT_THROW(parse_mode_label(bad), DomainError) << bad;
  }
}

TEST(CavityModes, RejectsPointsOutside) {
  const CavityMode mode({ModeFamily::TE, 1, 0, 1}, wr90_cavity());
  EXPECT_THROW(mode.fields(Vec3(-1e-3, 1e-3, 1e-3)), DomainError);
  EXPECT_THROW(mode.fields(Vec3(1e-3, 1e-3, 41e-3)), DomainError);
  EXPECT_NO_THROW(mode.fields(Vec3(0.0, 0.0, 0.0)));
}

TEST(CavityModes, GeometryValidation) {
  EXPECT_THROW((CavityGeometry{0.0, 1.0, 1.0, 1.0}.validate()), DomainError);
  EXPECT_THROW((CavityGeometry{1.0, 1.0, 1.0, 0.5}.validate()), DomainError);
}

// Midpoint rule on a 64^3 grid; exact for the low-order trig products involved.
TEST(CavityModes, OrthonormalByQuadrature) {
  CavityGeometry g = wr90_cavity();
  g.eps_r = 1.7;
  std::vector<CavityMode> modes;
  for (auto idx : {ModeIndex{ModeFamily::TE, 1, 0, 1}, ModeIndex{ModeFamily::TE, 1, 0, 2},
                   ModeIndex{ModeFamily::TE, 2, 0, 1}, ModeIndex{ModeFamily::TE, 0, 1, 1},
                   ModeIndex{ModeFamily::TE, 1, 1, 1}, ModeIndex{ModeFamily::TM, 1, 1, 1},
                   ModeIndex{ModeFamily::TM, 1, 1, 0}}) {
    modes.emplace_back(idx, g);
  }
  const int n = 64;
  const std::size_t k = modes.size();
  Eigen::MatrixXd ee = Eigen::MatrixXd::Zero(k, k), hh = Eigen::MatrixXd::Zero(k, k);
  std::vector<ModeFields> f(k);
  const double dv = g.volume() / (n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const Vec3 r((i + 0.5) * g.a / n, (j + 0.5) * g.b / n, (l + 0.5) * g.d / n);
        for (std::size_t a = 0; a < k; ++a) f[a] = modes[a].fields(r);
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = a; b < k; ++b) {
            ee(a, b) += g.eps_r * f[a].e.dot(f[b].e) * dv;
            hh(a, b) += f[a].h.dot(f[b].h) * dv;
          }
      }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      const double expect = a == b ? 1.0 : 0.0;
      EXPECT_NEAR(ee(a, b), expect, 1e-9) << modes[a].index().label() << "/" << modes[b].index().label();
      EXPECT_NEAR(hh(a, b), expect, 1e-9) << modes[a].index().label() << "/" << modes[b].index().label();
    }
    EXPECT_NEAR(modes[a].electric_norm_integral(), 1.0, 1e-12);
    EXPECT_NEAR(modes[a].magnetic_norm_integral(), 1.0, 1e-12);
  }
}

TEST(CavityModes, WallBoundaryConditions) {
  const CavityGeometry g = wr90_cavity();
  for (auto idx : {ModeIndex{ModeFamily::TE, 1, 0, 1}, ModeIndex{ModeFamily::TE, 2, 1, 3},
                   ModeIndex{ModeFamily::TM, 1, 2, 1}}) {
    const CavityMode mode(idx, g);
    const double scale = mode.norm_e();
    for (double s : {0.13, 0.5, 0.77}) {
      for (double t : {0.21, 0.64}) {
        // x walls: E_y, E_z tangential; H_x normal.
        for (double x : {0.0, g.a}) {
          const auto f = mode.fields(Vec3(x, s * g.b, t * g.d));
          EXPECT_NEAR(f.e.y(), 0.0, 1e-12 * scale);
          EXPECT_NEAR(f.e.z(), 0.0, 1e-12 * scale);
          EXPECT_NEAR(f.h.x(), 0.0, 1e-12 * scale);
        }
        for (double y : {0.0, g.b}) {
          const auto f = mode.fields(Vec3(s * g.a, y, t * g.d));
          EXPECT_NEAR(f.e.x(), 0.0, 1e-12 * scale);
          EXPECT_NEAR(f.e.z(), 0.0, 1e-12 * scale);
          EXPECT_NEAR(f.h.y(), 0.0, 1e-12 * scale);
        }
        for (double z : {0.0, g.d}) {
          const auto f = mode.fields(Vec3(s * g.a, t * g.b, z));
          EXPECT_NEAR(f.e.x(), 0.0, 1e-12 * scale);
          EXPECT_NEAR(f.e.y(), 0.0, 1e-12 * scale);
          EXPECT_NEAR(f.h.z(), 0.0, 1e-12 * scale);
        }
      }
    }
  }
}

// H = curl(E) / k0 by central differences.
TEST(CavityModes, MagneticFieldIsCurlOfElectric) {
  const CavityGeometry g = wr90_cavity();
  for (auto idx : {ModeIndex{ModeFamily::TE, 1, 0, 2}, ModeIndex{ModeFamily::TM, 1, 1, 1}}) {
    const CavityMode mode(idx, g);
    const double k0 = mode.omega() / constants::c0;
    const Vec3 r(0.31 * g.a, 0.42 * g.b, 0.63 * g.d);
    const double h = 1e-7;
    auto d = [&](int axis, int comp) {
      Vec3 dr = Vec3::Zero();
      dr[axis] = h;
      return (mode.e_field(r + dr)[comp] - mode.e_field(r - dr)[comp]) / (2 * h);
    };
    const Vec3 curl(d(1, 2) - d(2, 1), d(2, 0) - d(0, 2), d(0, 1) - d(1, 0));
    const Vec3 hf = mode.h_field(r);
    EXPECT_LT((curl / k0 - hf).norm(), 1e-6 * mode.norm_h()) << idx.label();
  }
}

TEST(CavityModes, Te10pPeakFieldEqualsNorm) {
  const CavityGeometry g = wr90_cavity();
  const CavityMode mode({ModeFamily::TE, 1, 0, 1}, g);
  EXPECT_NEAR(mode.e_field(Vec3(g.a / 2, g.b / 3, g.d / 2)).norm(), mode.norm_e(), 1e-12 * mode.norm_e());
  EXPECT_NEAR(mode.norm_e(), 2.0 / std::sqrt(g.volume()), 1e-12 * mode.norm_e());
}

TEST(CoaxFeed, ProfileHasUnitNorm) {
  const CoaxProbe probe = feed_probe(10.0);
  const int nr = 4000;
  double sum = 0.0;
  // Log-spaced midpoint rule over rho.
  const double lo = std::log(probe.r_inner), hi = std::log(probe.r_outer);
  for (int i = 0; i < nr; ++i) {
    const double u = lo + (i + 0.5) * (hi - lo) / nr;
    const double rho = std::exp(u);
    const Vec3 e = coax_tem_profile(probe, rho, 0.3);
    sum += e.squaredNorm() * rho * rho * (hi - lo) / nr * constants::two_pi;
  }
  EXPECT_NEAR(sum * constants::eps0, coax_line_normalization(), 1e-9 * coax_line_normalization());
  EXPECT_NEAR(coax_line_normalization(), 2.0 * constants::eps0 / (constants::pi * constants::c0), 1e-30);
}

TEST(CoaxFeed, ProfileIsRadial) {
  const CoaxProbe probe = feed_probe(10.0);
  const Vec3 e = coax_tem_profile(probe, 1e-3, 0.7);
  EXPECT_NEAR(e.y(), 0.0, 0.0);
  EXPECT_NEAR(std::atan2(e.z(), e.x()), 0.7, 1e-12);
  EXPECT_THROW(coax_tem_profile(probe, 3e-3, 0.0), DomainError);
}

TEST(CoaxFeed, ProbeValidation) {
  const CavityGeometry g = wr90_cavity();
  CoaxProbe p = feed_probe(10.0);
  EXPECT_NO_THROW(p.validate(g));
  p.h = g.b;
  EXPECT_THROW(p.validate(g), DomainError);
  p = feed_probe(1.0);
  EXPECT_THROW(p.validate(g), DomainError);
  p = feed_probe(10.0);
  p.r_inner = p.r_outer;
  EXPECT_THROW(p.validate(g), DomainError);
}
