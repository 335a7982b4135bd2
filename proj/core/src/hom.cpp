#include "cavityqed/hom.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "cavityqed/constants.hpp"
#include "cavityqed/errors.hpp"

namespace cavityqed {

namespace {

constexpr double kCoverageSigmas = 6.0;

// Normalized Gaussian envelope of the packet sampled on the grid (real, sum of squares = 1).
std::vector<double> envelope(const PhotonWavepacket& pkt, const FrequencyGrid& grid) {
  std::vector<double> g(grid.n_bins);
  double norm2 = 0.0;
  for (int m = 0; m < grid.n_bins; ++m) {
    const double x = pkt.sigma * (grid.node(m) - pkt.omega_in);
    g[m] = std::exp(-0.5 * x * x);
    norm2 += g[m] * g[m];
  }
  if (!(norm2 > 0.0)) {
    throw DomainError("photon spectrum has zero weight on the frequency grid");
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (double& v : g) v *= scale;
  return g;
}

bool covers(const PhotonWavepacket& pkt, const FrequencyGrid& grid) {
  const double half = kCoverageSigmas / pkt.sigma;
  return grid.omega_min <= pkt.omega_in - half && grid.omega_max >= pkt.omega_in + half;
}

Complex unit_phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace

void PhotonWavepacket::validate() const {
  if (!(sigma > 0.0)) throw DomainError("photon wavepacket requires sigma > 0");
  if (!(omega_in > 0.0)) throw DomainError("photon wavepacket requires omega_in > 0");
  if (port != 1 && port != 2) throw DomainError("photon wavepacket port must be 1 or 2");
}

void FrequencyGrid::validate() const {
  if (!(omega_min < omega_max)) throw DomainError("frequency grid requires omega_min < omega_max");
  if (n_bins < 2) throw DomainError("frequency grid requires n_bins >= 2");
}

double FrequencyGrid::period() const { return constants::two_pi / spacing(); }

SpectralWeights spectral_weights(const PhotonWavepacket& pkt, const FrequencyGrid& grid, double t_ref) {
  pkt.validate();
  grid.validate();
  const std::vector<double> g = envelope(pkt, grid);
  SpectralWeights out;
  out.truncated = !covers(pkt, grid);
  out.w.resize(g.size());
  for (int m = 0; m < grid.n_bins; ++m) out.w[m] = g[m] * unit_phase(grid.node(m) * t_ref);
  return out;
}

double HomTerms::g2() const {
  const double denom = b * c;
  if (!(denom > 0.0)) {
    throw UndefinedCorrelationError("g2 undefined: a detector receives no photon flux");
  }
  return a / denom;
}

HomTerms hom_terms(const ScatteringResponse& resp, const PhotonWavepacket& pkt1,
                   const PhotonWavepacket& pkt2, double tau, const FrequencyGrid& grid, double t0) {
  pkt1.validate();
  pkt2.validate();
  grid.validate();
  if (pkt1.port != 1 || pkt2.port != 2) {
    throw DomainError("hom_terms expects the first photon on port 1 and the second on port 2");
  }
  const std::vector<double> env1 = envelope(pkt1, grid);
  const std::vector<double> env2 = envelope(pkt2, grid);

  // Every sum pairs a weight phase exp(i w t_a) with a detection phase exp(-i w t_b);
  // the double sums of A factor into products of these single sums. Phases are
  // taken relative to omega_min: the common factor exp(i omega_min (t_a - t_b))
  // cancels between the two transmitted sums and inside every modulus.
  Complex refl1{}, refl2{}, trans_to_1{}, trans_to_2{};
  double norm1 = 0.0, norm2 = 0.0;
  const double t2 = t0 + tau;
  for (int m = 0; m < grid.n_bins; ++m) {
    const double w = grid.node(m);
    const double base = w - grid.omega_min;
    const Eigen::Matrix2cd s = transfer_functions(resp, w);
    const Complex w1 = env1[m] * unit_phase(base * t0);
    const Complex w2 = env2[m] * unit_phase(base * t2);
    const Complex at_t0 = unit_phase(-base * t0);
    const Complex at_t2 = unit_phase(-base * t2);
    refl1 += w1 * s(0, 0) * at_t0;       // photon 1 reflected into detector 1 at t0
    refl2 += w2 * s(1, 1) * at_t2;       // photon 2 reflected into detector 2 at t0 + tau
    trans_to_1 += w2 * s(0, 1) * at_t0;  // photon 2 transmitted into detector 1 at t0
    trans_to_2 += w1 * s(1, 0) * at_t2;  // photon 1 transmitted into detector 2 at t0 + tau
    norm1 += std::norm(w1);
    norm2 += std::norm(w2);
  }

  HomTerms out;
  out.a = std::norm(refl1 * refl2 + trans_to_1 * trans_to_2);
  out.b = std::norm(trans_to_1) * norm1 + std::norm(refl1) * norm2;
  out.c = std::norm(trans_to_2) * norm2 + std::norm(refl2) * norm1;
  out.truncated = !covers(pkt1, grid) || !covers(pkt2, grid);
  return out;
}

double g2(const ScatteringResponse& resp, const PhotonWavepacket& pkt1, const PhotonWavepacket& pkt2,
          double tau, const FrequencyGrid& grid) {
  return hom_terms(resp, pkt1, pkt2, tau, grid).g2();
}

HomCurve hom_curve(const ScatteringResponse& resp, const PhotonWavepacket& pkt1,
                   const PhotonWavepacket& pkt2, const std::vector<double>& taus,
                   const FrequencyGrid& grid) {
  HomCurve curve;
  curve.taus = taus;
  curve.g2_values.reserve(taus.size());
  for (double tau : taus) {
    try {
      curve.g2_values.emplace_back(g2(resp, pkt1, pkt2, tau, grid));
    } catch (const UndefinedCorrelationError&) {
      curve.g2_values.emplace_back(std::nullopt);
    }
  }
  return curve;
}

FrequencyGrid default_frequency_grid(const ScatteringResponse& resp, const PhotonWavepacket& pkt1,
                                     const PhotonWavepacket& pkt2, double max_abs_tau) {
  resp.validate();
  pkt1.validate();
  pkt2.validate();
  const double gamma_half = resp.half_linewidth();
  if (!(gamma_half > 0.0)) {
    throw DegenerateResponseError("frequency grid undefined: both port couplings are zero");
  }
  const double sigma_min = std::min(pkt1.sigma, pkt2.sigma);
  const double sigma_max = std::max(pkt1.sigma, pkt2.sigma);
  const double half_width = std::max(20.0 / sigma_min, 40.0 * gamma_half);

  FrequencyGrid grid;
  grid.omega_min = resp.omega0 - half_width;
  grid.omega_max = resp.omega0 + half_width;
  for (const auto& pkt : {pkt1, pkt2}) {
    const double reach = 8.0 / pkt.sigma;
    grid.omega_min = std::min(grid.omega_min, pkt.omega_in - reach);
    grid.omega_max = std::max(grid.omega_max, pkt.omega_in + reach);
  }

  // Images of the sums repeat every 2 pi / spacing in time: keep them beyond the
  // largest delay plus the pulse width and the cavity ring-down.
  const double period = std::abs(max_abs_tau) + 10.0 * sigma_max + 20.0 / gamma_half;
  const double max_spacing = constants::two_pi / period;
  const double needed = std::ceil((grid.omega_max - grid.omega_min) / max_spacing) + 1.0;
  if (needed > static_cast<double>(1 << 24)) {
    throw DomainError("default frequency grid would exceed 2^24 bins");
  }
  grid.n_bins = std::max(2048, static_cast<int>(std::bit_ceil(static_cast<unsigned>(needed))));
  return grid;
}

double balanced_center_frequency(const ScatteringResponse& resp) {
  resp.validate();
  if (resp.g1 == 0.0 || resp.g2 == 0.0) {
    throw DegenerateResponseError("balanced frequency needs both port couplings nonzero");
  }
  const double g1s = resp.g1 * resp.g1;
  const double g2s = resp.g2 * resp.g2;
  const double diff = g1s - g2s;
  const double disc = 4.0 * g1s * g2s - diff * diff;
  return resp.omega0 + constants::pi * std::sqrt(std::max(0.0, disc));
}

double scan_balanced_center_frequency(const ScatteringResponse& resp, double sigma1, double sigma2,
                                      double omega_lo, double omega_hi, int n_points) {
  if (n_points < 2 || !(omega_lo < omega_hi)) {
    throw DomainError("center frequency scan needs n_points >= 2 and omega_lo < omega_hi");
  }
  double best_omega = omega_lo;
  double best_g2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_points; ++i) {
    const double w = omega_lo + (omega_hi - omega_lo) * i / (n_points - 1);
    const PhotonWavepacket p1{w, sigma1, 1};
    const PhotonWavepacket p2{w, sigma2, 2};
    const FrequencyGrid grid = default_frequency_grid(resp, p1, p2, 0.0);
    const double value = g2(resp, p1, p2, 0.0, grid);
    if (value < best_g2) {
      best_g2 = value;
      best_omega = w;
    }
  }
  return best_omega;
}

}  // namespace cavityqed
