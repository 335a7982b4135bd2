#include "cavityqed/cavity_em.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <tuple>
#include <utility>

#include "cavityqed/constants.hpp"
#include "cavityqed/errors.hpp"

namespace cavityqed {

namespace {

using constants::pi;

// integral_0^L cos^2(m pi x / L) dx and integral_0^L sin^2(m pi x / L) dx
double cos2_integral(int m, double length) { return m == 0 ? length : 0.5 * length; }
double sin2_integral(int m, double length) { return m == 0 ? 0.0 : 0.5 * length; }

}  // namespace

void CavityGeometry::validate() const {
  if (!(a > 0.0) || !(b > 0.0) || !(d > 0.0)) {
    throw DomainError("cavity dimensions a, b, d must be positive");
  }
  if (!(eps_r >= 1.0)) {
    throw DomainError("cavity relative permittivity must be >= 1");
  }
}

bool CavityGeometry::contains(const Vec3& r, double rel_tol) const {
  const auto inside = [rel_tol](double v, double len) {
    const double slack = rel_tol * len;
    return v >= -slack && v <= len + slack;
  };
  return inside(r.x(), a) && inside(r.y(), b) && inside(r.z(), d);
}

void CoaxProbe::validate(const CavityGeometry& geom) const {
  if (!(r_inner > 0.0) || !(r_outer > r_inner)) {
    throw DomainError("coax probe radii must satisfy 0 < r_inner < r_outer");
  }
  if (!(h >= 0.0) || !(h < geom.b)) {
    throw DomainError("coax probe protrusion must satisfy 0 <= h < b");
  }
  if (x0 - r_outer < 0.0 || x0 + r_outer > geom.a || z0 - r_outer < 0.0 ||
      z0 + r_outer > geom.d) {
    throw DomainError("coax probe aperture extends outside the cavity wall");
  }
}

Vec3 CoaxProbe::tip(const CavityGeometry& geom) const { return {x0, geom.b - h, z0}; }

double CoaxProbe::volume() const { return pi * r_inner * r_inner * h; }

bool ModeIndex::is_valid() const noexcept {
  if (m < 0 || n < 0 || p < 0) return false;
  if (family == ModeFamily::TE) return !(m == 0 && n == 0) && p >= 1;
  return m >= 1 && n >= 1;
}

void ModeIndex::validate() const {
  if (m < 0 || n < 0 || p < 0) {
    throw DomainError("mode indices must be non-negative: " + label());
  }
  if (family == ModeFamily::TE) {
    if (m == 0 && n == 0) throw DomainError("TE modes require m and n not both zero: " + label());
    if (p < 1) throw DomainError("TE modes require p >= 1: " + label());
  } else if (m < 1 || n < 1) {
    throw DomainError("TM modes require m >= 1 and n >= 1: " + label());
  }
}

std::string ModeIndex::label() const {
  std::ostringstream os;
  os << (family == ModeFamily::TE ? "TE" : "TM");
  if (m > 9 || n > 9 || p > 9) {
    os << m << ',' << n << ',' << p;
  } else {
    os << m << n << p;
  }
  return os.str();
}

ModeIndex parse_mode_label(const std::string& label) {
  if (label.size() < 5) throw DomainError("malformed mode label '" + label + "'");
  ModeIndex idx;
  const std::string fam = label.substr(0, 2);
  if (fam == "TE") {
    idx.family = ModeFamily::TE;
  } else if (fam == "TM") {
    idx.family = ModeFamily::TM;
  } else {
    throw DomainError("mode label must start with TE or TM: '" + label + "'");
  }
  const std::string rest = label.substr(2);
  if (rest.find(',') != std::string::npos) {
    std::istringstream is(rest);
    char c1 = 0, c2 = 0;
    if (!(is >> idx.m >> c1 >> idx.n >> c2 >> idx.p) || c1 != ',' || c2 != ',' || !is.eof()) {
      throw DomainError("malformed mode label '" + label + "'");
    }
  } else {
    if (rest.size() != 3 ||
        !std::all_of(rest.begin(), rest.end(), [](unsigned char c) { return std::isdigit(c); })) {
      throw DomainError("malformed mode label '" + label + "'");
    }
    idx.m = rest[0] - '0';
    idx.n = rest[1] - '0';
    idx.p = rest[2] - '0';
  }
  idx.validate();
  return idx;
}

double resonant_frequency(const ModeIndex& index, const CavityGeometry& geom) {
  index.validate();
  geom.validate();
  const double sx = index.m / geom.a;
  const double sy = index.n / geom.b;
  const double sz = index.p / geom.d;
  return constants::c0 / std::sqrt(geom.eps_r) * pi * std::sqrt(sx * sx + sy * sy + sz * sz);
}

CavityMode::CavityMode(const ModeIndex& index, const CavityGeometry& geom)
    : index_(index), geom_(geom) {
  index_.validate();
  geom_.validate();
  kx_ = index_.m * pi / geom_.a;
  ky_ = index_.n * pi / geom_.b;
  kz_ = index_.p * pi / geom_.d;
  const double kc2 = kx_ * kx_ + ky_ * ky_;
  const double k2 = kc2 + kz_ * kz_;
  const double k = std::sqrt(k2);
  omega_ = resonant_frequency(index_, geom_);
  k0_ = omega_ / constants::c0;

  const auto [m, n, p] = std::tuple{index_.m, index_.n, index_.p};
  const double a = geom_.a, b = geom_.b, d = geom_.d;
  double pattern = 0.0;
  if (index_.family == ModeFamily::TE) {
    pattern = ky_ * ky_ * cos2_integral(m, a) * sin2_integral(n, b) * sin2_integral(p, d) +
              kx_ * kx_ * sin2_integral(m, a) * cos2_integral(n, b) * sin2_integral(p, d);
  } else {
    pattern = kx_ * kx_ * kz_ * kz_ * cos2_integral(m, a) * sin2_integral(n, b) * sin2_integral(p, d) +
              ky_ * ky_ * kz_ * kz_ * sin2_integral(m, a) * cos2_integral(n, b) * sin2_integral(p, d) +
              kc2 * kc2 * sin2_integral(m, a) * sin2_integral(n, b) * cos2_integral(p, d);
  }
  amplitude_ = 1.0 / std::sqrt(geom_.eps_r * pattern);
  norm_e_ = index_.family == ModeFamily::TE ? amplitude_ * std::sqrt(kc2)
                                            : amplitude_ * std::sqrt(kc2) * k;
  norm_h_ = norm_e_ * k / k0_;
}

ModeFields CavityMode::fields_unchecked(const Vec3& r) const {
  const double cx = std::cos(kx_ * r.x()), sx = std::sin(kx_ * r.x());
  const double cy = std::cos(ky_ * r.y()), sy = std::sin(ky_ * r.y());
  const double cz = std::cos(kz_ * r.z()), sz = std::sin(kz_ * r.z());
  const double A = amplitude_;
  ModeFields f;
  if (index_.family == ModeFamily::TE) {
    const double kc2 = kx_ * kx_ + ky_ * ky_;
    f.e = Vec3(-A * ky_ * cx * sy * sz, A * kx_ * sx * cy * sz, 0.0);
    f.h = Vec3(-A * kx_ * kz_ * sx * cy * cz, -A * ky_ * kz_ * cx * sy * cz, A * kc2 * cx * cy * sz) / k0_;
  } else {
    const double kc2 = kx_ * kx_ + ky_ * ky_;
    const double k2 = kc2 + kz_ * kz_;
    f.e = Vec3(-A * kx_ * kz_ * cx * sy * sz, -A * ky_ * kz_ * sx * cy * sz, A * kc2 * sx * sy * cz);
    f.h = Vec3(A * ky_ * k2 * sx * cy * cz, -A * kx_ * k2 * cx * sy * cz, 0.0) / k0_;
  }
  return f;
}

ModeFields CavityMode::fields(const Vec3& r) const {
  if (!geom_.contains(r)) {
    std::ostringstream os;
    os << "field point (" << r.x() << ", " << r.y() << ", " << r.z() << ") m lies outside the cavity";
    throw DomainError(os.str());
  }
  return fields_unchecked(r);
}

double CavityMode::electric_norm_integral() const {
  const auto [m, n, p] = std::tuple{index_.m, index_.n, index_.p};
  const double a = geom_.a, b = geom_.b, d = geom_.d;
  const double A2 = amplitude_ * amplitude_;
  const double kc2 = kx_ * kx_ + ky_ * ky_;
  if (index_.family == ModeFamily::TE) {
    return geom_.eps_r * A2 *
           (ky_ * ky_ * cos2_integral(m, a) * sin2_integral(n, b) * sin2_integral(p, d) +
            kx_ * kx_ * sin2_integral(m, a) * cos2_integral(n, b) * sin2_integral(p, d));
  }
  return geom_.eps_r * A2 *
         (kx_ * kx_ * kz_ * kz_ * cos2_integral(m, a) * sin2_integral(n, b) * sin2_integral(p, d) +
          ky_ * ky_ * kz_ * kz_ * sin2_integral(m, a) * cos2_integral(n, b) * sin2_integral(p, d) +
          kc2 * kc2 * sin2_integral(m, a) * sin2_integral(n, b) * cos2_integral(p, d));
}

double CavityMode::magnetic_norm_integral() const {
  const auto [m, n, p] = std::tuple{index_.m, index_.n, index_.p};
  const double a = geom_.a, b = geom_.b, d = geom_.d;
  const double scale = amplitude_ * amplitude_ / (k0_ * k0_);
  const double kc2 = kx_ * kx_ + ky_ * ky_;
  if (index_.family == ModeFamily::TE) {
    return scale *
           (kx_ * kx_ * kz_ * kz_ * sin2_integral(m, a) * cos2_integral(n, b) * cos2_integral(p, d) +
            ky_ * ky_ * kz_ * kz_ * cos2_integral(m, a) * sin2_integral(n, b) * cos2_integral(p, d) +
            kc2 * kc2 * cos2_integral(m, a) * cos2_integral(n, b) * sin2_integral(p, d));
  }
  const double k2 = kc2 + kz_ * kz_;
  return scale * k2 * k2 *
         (ky_ * ky_ * sin2_integral(m, a) * cos2_integral(n, b) * cos2_integral(p, d) +
          kx_ * kx_ * cos2_integral(m, a) * sin2_integral(n, b) * cos2_integral(p, d));
}

ModeFields eval_fields(const CavityMode& mode, const Vec3& r) { return mode.fields(r); }

std::vector<CavityMode> mode_list(const CavityGeometry& geom, double f_max_hz) {
  geom.validate();
  if (!(f_max_hz > 0.0)) throw DomainError("mode_list requires f_max > 0");
  const double omega_max = constants::two_pi * f_max_hz;
  // k = omega sqrt(eps_r) / c0 bounds each index separately.
  const double k_max = omega_max * std::sqrt(geom.eps_r) / constants::c0;
  const int m_max = static_cast<int>(std::floor(k_max * geom.a / pi));
  const int n_max = static_cast<int>(std::floor(k_max * geom.b / pi));
  const int p_max = static_cast<int>(std::floor(k_max * geom.d / pi));

  std::vector<std::pair<double, ModeIndex>> found;
  for (ModeFamily fam : {ModeFamily::TE, ModeFamily::TM}) {
    for (int m = 0; m <= m_max; ++m) {
      for (int n = 0; n <= n_max; ++n) {
        for (int p = 0; p <= p_max; ++p) {
          const ModeIndex idx{fam, m, n, p};
          if (!idx.is_valid()) continue;
          const double w = resonant_frequency(idx, geom);
          if (w <= omega_max) found.emplace_back(w, idx);
        }
      }
    }
  }
  std::sort(found.begin(), found.end());

  std::vector<CavityMode> modes;
  modes.reserve(found.size());
  for (const auto& [w, idx] : found) modes.emplace_back(idx, geom);
  return modes;
}

Vec3 coax_tem_profile(const CoaxProbe& probe, double rho, double phi) {
  if (!(probe.r_inner > 0.0) || !(probe.r_outer > probe.r_inner)) {
    throw DomainError("coax probe radii must satisfy 0 < r_inner < r_outer");
  }
  if (rho < probe.r_inner || rho > probe.r_outer) {
    throw DomainError("coax field radius lies outside the annulus [r_inner, r_outer]");
  }
  const double log_ratio = std::log(probe.r_outer / probe.r_inner);
  const double magnitude = std::sqrt(2.0 / (pi * constants::c0)) /
                           (rho * std::sqrt(constants::two_pi * log_ratio));
  return magnitude * Vec3(std::cos(phi), 0.0, std::sin(phi));
}

double coax_line_normalization() { return 2.0 * constants::eps0 / (pi * constants::c0); }

}  // namespace cavityqed
