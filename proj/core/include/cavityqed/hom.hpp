#pragma once

// Hong-Ou-Mandel interference of two single photons scattered by the two-port
// cavity. The continuum is discretized on a uniform frequency grid and the
// second-order correlation is evaluated as g2(tau) = A / (B C), where
//
//   A = |<0| a_out,2(t0 + tau) a_out,1(t0) |psi>|^2
//   B = <psi| a_out,1^dag(t0) a_out,1(t0) |psi>
//   C = <psi| a_out,2^dag(t0 + tau) a_out,2(t0 + tau) |psi>
//
// for the product input state of one photon per port.

#include <optional>
#include <vector>

#include "cavityqed/port_io.hpp"

namespace cavityqed {

/// Modulated-Gaussian single photon incident on port 1 or 2.
struct PhotonWavepacket {
  double omega_in = 0.0;  // rad/s
  double sigma = 0.0;     // s, temporal standard deviation
  int port = 1;

  void validate() const;
};

/// Uniform grid omega_m = omega_min + m (omega_max - omega_min) / (n_bins - 1).
struct FrequencyGrid {
  double omega_min = 0.0;
  double omega_max = 0.0;
  int n_bins = 0;

  void validate() const;
  double spacing() const { return (omega_max - omega_min) / (n_bins - 1); }
  double node(int m) const { return omega_min + m * spacing(); }
  /// Period in time of the discrete Fourier sums, 2 pi / spacing.
  double period() const;
};

struct SpectralWeights {
  std::vector<Complex> w;
  /// Set when the grid does not span omega_in +- 6 / sigma.
  bool truncated = false;
};

/// W(omega_m) = exp(-(sigma (omega_m - omega_in))^2 / 2) exp(i omega_m t_ref),
/// scaled so that sum |W|^2 = 1.
SpectralWeights spectral_weights(const PhotonWavepacket& pkt, const FrequencyGrid& grid, double t_ref);

struct HomTerms {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  bool truncated = false;

  /// Throws UndefinedCorrelationError when B C = 0.
  double g2() const;
};

/// A, B and C at delay tau. `t0` is the global reference time; the result does
/// not depend on it.
HomTerms hom_terms(const ScatteringResponse& resp, const PhotonWavepacket& pkt1,
                   const PhotonWavepacket& pkt2, double tau, const FrequencyGrid& grid,
                   double t0 = 0.0);

double g2(const ScatteringResponse& resp, const PhotonWavepacket& pkt1, const PhotonWavepacket& pkt2,
          double tau, const FrequencyGrid& grid);

struct HomCurve {
  std::vector<double> taus;
  /// Empty where g2 was undefined at that delay.
  std::vector<std::optional<double>> g2_values;
};

HomCurve hom_curve(const ScatteringResponse& resp, const PhotonWavepacket& pkt1,
                   const PhotonWavepacket& pkt2, const std::vector<double>& taus,
                   const FrequencyGrid& grid);

/// Grid spanning omega0 +- max(20 / sigma, 40 pi (g1^2 + g2^2)), widened if needed
/// to hold both packets, with at least 2048 bins and enough density that the
/// periodic images of the discrete sums stay clear of |tau| <= max_abs_tau.
FrequencyGrid default_frequency_grid(const ScatteringResponse& resp, const PhotonWavepacket& pkt1,
                                     const PhotonWavepacket& pkt2, double max_abs_tau);

/// Center frequency at which |R1| = |T12| (the 50/50 beam-splitter point):
/// omega0 + pi sqrt(4 g1^2 g2^2 - (g1^2 - g2^2)^2), which is omega0 + pi (g1^2 + g2^2)
/// for |g1| = |g2|. Falls back to omega0 when the couplings are too unbalanced
/// for |R1| = |T12| to be reached.
double balanced_center_frequency(const ScatteringResponse& resp);

/// Brute-force cross-check: scans a common center frequency for both packets over
/// [omega_lo, omega_hi] and returns the point minimizing g2(0).
double scan_balanced_center_frequency(const ScatteringResponse& resp, double sigma1, double sigma2,
                                      double omega_lo, double omega_hi, int n_points);

}  // namespace cavityqed
