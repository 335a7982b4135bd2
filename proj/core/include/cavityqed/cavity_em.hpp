#pragma once

// Analytic eigenmodes of an air-filled (or uniformly filled) rectangular PEC
// cavity and the TEM continuum mode of a semi-infinite coaxial feed.
//
// Coordinates: x in [0, a] (broad dimension), y in [0, b] (narrow dimension),
// z in [0, d] (longitudinal). Coaxial feeds enter through the broad wall at
// y = b and protrude toward y = 0.
//
// Mode functions are normalized so that  integral eps_r E_k . E_k dV = 1  and
// integral H_k . H_k dV = 1, with H_k = curl(E_k) / k0. All quantities are SI.

#include <compare>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace cavityqed {

using Vec3 = Eigen::Vector3d;

struct CavityGeometry {
  double a = 0.0;  // m
  double b = 0.0;  // m
  double d = 0.0;  // m
  double eps_r = 1.0;

  void validate() const;
  /// True when r lies inside the closed box, with a relative slack of `rel_tol`.
  bool contains(const Vec3& r, double rel_tol = 1e-12) const;
  double volume() const { return a * b * d; }
};

struct CoaxProbe {
  double x0 = 0.0;       // m, position on the y = b wall
  double z0 = 0.0;       // m
  double r_inner = 0.0;  // m
  double r_outer = 0.0;  // m
  double h = 0.0;        // m, protrusion of the inner conductor into the cavity

  void validate(const CavityGeometry& geom) const;
  /// Free end of the inner conductor on its axis.
  Vec3 tip(const CavityGeometry& geom) const;
  /// Volume of the protruding inner conductor.
  double volume() const;
};

enum class ModeFamily { TE, TM };

struct ModeIndex {
  ModeFamily family = ModeFamily::TE;
  int m = 0;
  int n = 0;
  int p = 0;

  /// Throws DomainError naming the violated index rule.
  void validate() const;
  bool is_valid() const noexcept;
  /// "TE101", "TM110", ...
  std::string label() const;

  auto operator<=>(const ModeIndex&) const = default;
};

/// Parses labels of the form "TE101" or "TM1,1,0" (comma form for indices > 9).
ModeIndex parse_mode_label(const std::string& label);

/// Unperturbed resonance (rad/s) of the indexed mode.
double resonant_frequency(const ModeIndex& index, const CavityGeometry& geom);

struct ModeFields {
  Vec3 e;
  Vec3 h;
};

/// One normalized standing-wave eigenmode of the cavity.
class CavityMode {
 public:
  CavityMode(const ModeIndex& index, const CavityGeometry& geom);

  const ModeIndex& index() const noexcept { return index_; }
  const CavityGeometry& geometry() const noexcept { return geom_; }
  double omega() const noexcept { return omega_; }
  /// Amplitude of the normalized E pattern (m^-3/2). Equals max |E| for TEm0p modes.
  double norm_e() const noexcept { return norm_e_; }
  /// Amplitude of the normalized H pattern (m^-3/2); norm_h = norm_e * sqrt(eps_r).
  double norm_h() const noexcept { return norm_h_; }

  /// Normalized spatial fields at r. Throws DomainError outside the cavity.
  ModeFields fields(const Vec3& r) const;
  Vec3 e_field(const Vec3& r) const { return fields(r).e; }
  Vec3 h_field(const Vec3& r) const { return fields(r).h; }

  /// Closed-form  integral eps_r |E|^2 dV  (1 up to rounding).
  double electric_norm_integral() const;
  /// Closed-form  integral |H|^2 dV  (1 up to rounding).
  double magnetic_norm_integral() const;

 private:
  ModeFields fields_unchecked(const Vec3& r) const;

  ModeIndex index_;
  CavityGeometry geom_;
  double kx_ = 0.0, ky_ = 0.0, kz_ = 0.0, k0_ = 0.0;
  double amplitude_ = 0.0;  // raw coefficient of the trig pattern
  double omega_ = 0.0;
  double norm_e_ = 0.0;
  double norm_h_ = 0.0;
};

ModeFields eval_fields(const CavityMode& mode, const Vec3& r);

/// All valid TE/TM modes with resonance <= f_max (Hz), ascending in frequency,
/// ties broken by (family, m, n, p).
std::vector<CavityMode> mode_list(const CavityGeometry& geom, double f_max_hz);

/// Transverse E of the delta-normalized TEM standing wave of the coaxial feed,
/// evaluated in the aperture plane y = b. Units s^(1/2) m^(-3/2).
///
/// E(omega, r) = sqrt(2 / (pi c)) e_T(rho) cos(omega s / c), with s the distance
/// along the line from the PMC-terminated aperture and
/// e_T = rho_hat / (rho sqrt(2 pi ln(r_outer / r_inner))) the unit-norm profile.
/// phi is measured from +x toward +z around the probe axis.
Vec3 coax_tem_profile(const CoaxProbe& probe, double rho, double phi);

/// eps0 * integral over the annulus of |E_T|^2, i.e. 2 eps0 / (pi c0).
double coax_line_normalization();

}  // namespace cavityqed
