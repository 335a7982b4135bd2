#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cavityqed/constants.hpp"
#include "cavityqed/errors.hpp"
#include "cavityqed/hom.hpp"
#include "oracles.hpp"

using namespace cavityqed;
using namespace cavityqed::testing;

namespace {

constexpr double kUs = 1e-6;

// Two-probe WR-90 response at TE101.
ScatteringResponse feed_response() { return {constants::two_pi * 7.552419e9, 994.3678, 994.3678}; }

struct Draw {
  ScatteringResponse resp;
  PhotonWavepacket p1, p2;
  FrequencyGrid grid;
  double tau = 0.0, t0 = 0.0;
};

// Dimensionless draws: the model only involves products omega t and g^2 t.
Draw random_draw(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto in = [&](double a, double b) { return a + (b - a) * u(rng); };
  Draw d;
  d.resp = {in(5.0, 10.0), in(0.3, 1.2) * (u(rng) < 0.5 ? -1 : 1), in(0.3, 1.2) * (u(rng) < 0.5 ? -1 : 1)};
  d.p1 = {d.resp.omega0 + in(-1.0, 1.0), in(0.5, 3.0), 1};
  d.p2 = {d.resp.omega0 + in(-1.0, 1.0), in(0.5, 3.0), 2};
  d.grid = {d.resp.omega0 - in(3.0, 6.0), d.resp.omega0 + in(3.0, 6.0), 2 + static_cast<int>(u(rng) * 15)};
  d.tau = in(-4.0, 4.0);
  d.t0 = in(-2.0, 2.0);
  return d;
}

HomTerms default_terms(const ScatteringResponse& resp, double sigma1, double sigma2, double tau,
                       double max_tau) {
  const double w = balanced_center_frequency(resp);
  const PhotonWavepacket p1{w, sigma1, 1}, p2{w, sigma2, 2};
  return hom_terms(resp, p1, p2, tau, default_frequency_grid(resp, p1, p2, max_tau));
}

}  // namespace

TEST(HomOracle, MatchesTwoPhotonBasisTermwise) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const Draw d = random_draw(rng);
    ASSERT_LE(d.grid.n_bins, 16);
    const HomTerms got = hom_terms(d.resp, d.p1, d.p2, d.tau, d.grid, d.t0);
    const BruteForceHom ref = brute_force_hom(d.resp, d.p1, d.p2, d.tau, d.grid, d.t0);
    EXPECT_NEAR(got.a, ref.a, 1e-10 * ref.a + 1e-15) << "trial " << trial;
    EXPECT_NEAR(got.b, ref.b, 1e-10 * ref.b + 1e-15) << "trial " << trial;
    EXPECT_NEAR(got.c, ref.c, 1e-10 * ref.c + 1e-15) << "trial " << trial;
  }
}

TEST(HomOracle, SpectralWeightsAreNormalized) {
  const FrequencyGrid grid{0.0, 10.0, 101};
  const SpectralWeights w = spectral_weights({5.0, 2.0, 1}, grid, 0.7);
  double n = 0.0;
  for (const auto& x : w.w) n += std::norm(x);
  EXPECT_NEAR(n, 1.0, 1e-14);
  EXPECT_FALSE(w.truncated);
  EXPECT_NEAR(std::arg(w.w[50] / w.w[49]), 0.7 * grid.spacing(), 1e-12);
  EXPECT_TRUE(spectral_weights({5.0, 0.5, 1}, grid, 0.0).truncated);
}

TEST(Hom, ReferenceTimeDoesNotMatter) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Draw d = random_draw(rng);
    const double ref = hom_terms(d.resp, d.p1, d.p2, d.tau, d.grid, 0.0).g2();
    const double moved = hom_terms(d.resp, d.p1, d.p2, d.tau, d.grid, d.t0).g2();
    EXPECT_NEAR(moved, ref, 1e-9 * std::max(1.0, ref));
  }
}

TEST(Hom, BalancedMatchedPacketsBunch) {
  const ScatteringResponse resp = feed_response();
  const HomTerms t = default_terms(resp, 2.5 * kUs, 2.5 * kUs, 0.0, 0.0);
  EXPECT_LE(t.g2(), 1e-3);
  EXPECT_FALSE(t.truncated);
}

TEST(Hom, DistinguishablePacketsDoNotFullyInterfere) {
  const ScatteringResponse resp = feed_response();
  const double w = balanced_center_frequency(resp);
  const PhotonWavepacket p1{w, 2.5 * kUs, 1}, p2{w, 1.0 * kUs, 2};
  const FrequencyGrid grid = default_frequency_grid(resp, p1, p2, 25 * kUs);
  std::vector<double> taus;
  for (int i = -50; i <= 50; ++i) taus.push_back(i * 0.5 * kUs);
  const HomCurve curve = hom_curve(resp, p1, p2, taus, grid);
  double lowest = 1e9;
  for (const auto& v : curve.g2_values) {
    ASSERT_TRUE(v.has_value());
    lowest = std::min(lowest, *v);
  }
  const double matched = default_terms(resp, 2.5 * kUs, 2.5 * kUs, 0.0, 0.0).g2();
  EXPECT_GT(lowest, 0.0);
  EXPECT_GT(lowest, 2.0 * matched);
}

TEST(Hom, SymmetricInDelayForMatchedPackets) {
  const ScatteringResponse resp = feed_response();
  for (double tau : {0.5, 2.0, 7.0}) {
    const double plus = default_terms(resp, 2.5 * kUs, 2.5 * kUs, tau * kUs, 25 * kUs).g2();
    const double minus = default_terms(resp, 2.5 * kUs, 2.5 * kUs, -tau * kUs, 25 * kUs).g2();
    EXPECT_NEAR(plus, minus, 1e-9);
  }
}

TEST(Hom, CouplingSignDoesNotMatter) {
  ScatteringResponse resp = feed_response();
  const double same = default_terms(resp, 2.5 * kUs, 2.0 * kUs, 1.5 * kUs, 5 * kUs).g2();
  resp.g2 = -resp.g2;
  const double flipped = default_terms(resp, 2.5 * kUs, 2.0 * kUs, 1.5 * kUs, 5 * kUs).g2();
  EXPECT_NEAR(same, flipped, 1e-12);
}

// With detection following each photon, a long delay leaves the two detections uncorrelated.
TEST(Hom, LongDelayIsUncorrelated) {
  const ScatteringResponse resp = feed_response();
  const double tail = default_terms(resp, 2.5 * kUs, 2.5 * kUs, 25 * kUs, 25 * kUs).g2();
  EXPECT_NEAR(tail, 1.0, 1e-2);
}

TEST(Hom, GridDoublingConverges) {
  const ScatteringResponse resp = feed_response();
  const double w = balanced_center_frequency(resp);
  const PhotonWavepacket p1{w, 2.5 * kUs, 1}, p2{w, 2.5 * kUs, 2};
  const FrequencyGrid grid = default_frequency_grid(resp, p1, p2, 25 * kUs);
  FrequencyGrid dense = grid;
  dense.n_bins = 2 * grid.n_bins - 1;
  for (double tau : {0.0, 1.0, 3.0, 10.0, 25.0}) {
    const double a = g2(resp, p1, p2, tau * kUs, grid);
    const double b = g2(resp, p1, p2, tau * kUs, dense);
    EXPECT_NEAR(a, b, 1e-4) << "tau = " << tau;
  }
}

TEST(Hom, DefaultGridCoversPacketsAndDelays) {
  const ScatteringResponse resp = feed_response();
  const PhotonWavepacket p1{resp.omega0, 2.5 * kUs, 1}, p2{resp.omega0, 1.0 * kUs, 2};
  const FrequencyGrid grid = default_frequency_grid(resp, p1, p2, 25 * kUs);
  EXPECT_GE(grid.n_bins, 2048);
  EXPECT_LE(grid.omega_min, resp.omega0 - 20.0 / (1.0 * kUs));
  EXPECT_GE(grid.omega_max, resp.omega0 + 20.0 / (1.0 * kUs));
  EXPECT_GT(grid.period(), 25 * kUs + 10 * 2.5 * kUs);
  EXPECT_THROW(default_frequency_grid({1e10, 0.0, 0.0}, p1, p2, 0.0), DegenerateResponseError);
}

TEST(Hom, TruncatedGridIsReported) {
  const ScatteringResponse resp = feed_response();
  const PhotonWavepacket p1{resp.omega0, 2.5 * kUs, 1}, p2{resp.omega0, 2.5 * kUs, 2};
  const FrequencyGrid narrow{resp.omega0 - 1.0 / kUs, resp.omega0 + 1.0 / kUs, 2048};
  EXPECT_TRUE(hom_terms(resp, p1, p2, 0.0, narrow).truncated);
}

TEST(Hom, InvalidInputs) {
  HomTerms t;
  t.a = 0.0;
  t.b = 0.0;
  t.c = 1.0;
  EXPECT_THROW(t.g2(), UndefinedCorrelationError);
  const ScatteringResponse resp = feed_response();
  const PhotonWavepacket p1{resp.omega0, 2.5 * kUs, 2}, p2{resp.omega0, 2.5 * kUs, 2};
  EXPECT_THROW(hom_terms(resp, p1, p2, 0.0, FrequencyGrid{1e10, 2e10, 16}), DomainError);
}

TEST(BalancedFrequency, ReflectionEqualsTransmission) {
  for (auto [g1, g2] : {std::pair{994.0, 994.0}, std::pair{800.0, 1100.0}, std::pair{900.0, -700.0}}) {
    const ScatteringResponse resp{constants::two_pi * 7.5e9, g1, g2};
    const double w = balanced_center_frequency(resp);
    const Eigen::Matrix2cd s = transfer_functions(resp, w);
    EXPECT_NEAR(std::abs(s(0, 0)), std::abs(s(0, 1)), 1e-12);
  }
  const ScatteringResponse equal{1e10, 900.0, 900.0};
  EXPECT_NEAR(balanced_center_frequency(equal) - equal.omega0, constants::two_pi * 900.0 * 900.0, 1e-3);
  EXPECT_THROW(balanced_center_frequency({1e10, 900.0, 0.0}), DegenerateResponseError);
}

// The g2(0) minimum sits at either 50/50 point omega0 +- 2 pi g^2.
TEST(BalancedFrequency, ScanFindsA5050Point) {
  const ScatteringResponse resp = feed_response();
  const double offset = balanced_center_frequency(resp) - resp.omega0;
  const int n = 81;
  const double lo = resp.omega0 - 2.0 * offset, hi = resp.omega0 + 2.0 * offset;
  for (double sigma : {2.5 * kUs, 1.0 * kUs}) {
    const double w = scan_balanced_center_frequency(resp, sigma, sigma, lo, hi, n);
    const double step = (hi - lo) / (n - 1);
    EXPECT_NEAR(std::abs(w - resp.omega0), offset, step) << "sigma = " << sigma;
  }
}
