#pragma once
// Coefficient algebra for a three-parameter family of four-coefficient
// dispersive systems modelling internal waves at the interface of a two-layer
// fluid.  gamma = density ratio (lower over upper... rho_upper/rho_lower < 1),
// delta = depth ratio.  The modelling parameters (alpha1, alpha2, beta) select
// one member (a, b, c, d) of the family; every member satisfies the sum rule
//   (delta+gamma)*a + b + c + d = (1+gamma*delta) / (3*delta*(gamma+delta)).

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bblab {

// Tolerance for degeneracy / on-curve decisions in the classifiers.
inline constexpr double kClassifyTol = 1e-12;

struct PhysicalParams {
  double gamma{};   // density ratio, 0 <= gamma < 1
  double delta{};   // depth ratio, delta > 0
  double alpha1{};  // >= 0
  double alpha2{};  // <= 1
  double beta{};    // >= 0
};

struct ModelCoeffs {
  double gamma{}, delta{};
  double a{}, b{}, c{}, d{};
  double beta{};          // scale of the regularized velocity v = (1 - beta*dxx)^{-1} u
  double sum_residual{};  // (delta+gamma)*a + b + c + d - sum_required()

  double kappa1() const { return 1.0 / (delta + gamma); }
  double kappa2() const { return 1.0 - gamma; }
  // Scale factor of the quadratic terms.
  double lambda() const {
    const double s = delta + gamma;
    return (delta * delta - gamma) / (s * s);
  }
  // Long-wave speed limit.
  double cgd() const { return std::sqrt(kappa1() * kappa2()); }
  double sum_required() const {
    return (1.0 + gamma * delta) / (3.0 * delta * (gamma + delta));
  }
};

inline void validate_ratios(double gamma, double delta) {
  if (!(gamma >= 0.0) || !(gamma < 1.0))
    throw std::domain_error("density ratio gamma must lie in [0,1)");
  if (!(delta > 0.0))
    throw std::domain_error("depth ratio delta must be positive");
}

// Coefficients from the modelling parameters; satisfies the sum rule exactly.
inline ModelCoeffs derive_coeffs(const PhysicalParams& p) {
  validate_ratios(p.gamma, p.delta);
  if (!(p.alpha1 >= 0.0)) throw std::domain_error("alpha1 must be >= 0");
  if (!(p.alpha2 <= 1.0)) throw std::domain_error("alpha2 must be <= 1");
  if (!(p.beta >= 0.0)) throw std::domain_error("beta must be >= 0");
  const double g = p.gamma, dl = p.delta;
  const double s = dl + g;
  ModelCoeffs m;
  m.gamma = g;
  m.delta = dl;
  m.a = ((1.0 - p.alpha1) * (1.0 + g * dl) - 3.0 * dl * p.beta * s) /
        (3.0 * dl * s * s);
  m.b = p.alpha1 * (1.0 + g * dl) / (3.0 * dl * s);
  m.c = p.beta * p.alpha2;
  m.d = p.beta * (1.0 - p.alpha2);
  m.beta = p.beta;
  m.sum_residual = s * m.a + m.b + m.c + m.d - m.sum_required();
  return m;
}

// Coefficients given directly.  The sum-rule residual is recorded, never
// rejected (callers may warn).  beta defaults to c+d, its value in the
// derived family, clamped at zero since c+d can be negative here.
inline ModelCoeffs coeffs_from_quadruple(double gamma, double delta, double a,
                                         double b, double c, double d,
                                         std::optional<double> beta = {}) {
  validate_ratios(gamma, delta);
  ModelCoeffs m;
  m.gamma = gamma;
  m.delta = delta;
  m.a = a;
  m.b = b;
  m.c = c;
  m.d = d;
  m.beta = beta.value_or(std::max(c + d, 0.0));
  if (!(m.beta >= 0.0))
    throw std::domain_error("velocity regularization scale beta must be >= 0");
  m.sum_residual = (delta + gamma) * a + b + c + d - m.sum_required();
  return m;
}

// Recovered modelling parameters (inverse map; requires c+d != 0 for alpha2).
inline PhysicalParams modelling_params(const ModelCoeffs& m) {
  PhysicalParams p;
  p.gamma = m.gamma;
  p.delta = m.delta;
  p.alpha1 = 3.0 * m.delta * (m.delta + m.gamma) * m.b / (1.0 + m.gamma * m.delta);
  p.beta = m.c + m.d;
  p.alpha2 = p.beta != 0.0 ? m.c / p.beta : 0.0;
  return p;
}

inline double sound_speed(double gamma, double delta) {
  validate_ratios(gamma, delta);
  return std::sqrt((1.0 - gamma) / (delta + gamma));
}

// ---------------------------------------------------------------------------
// Linear admissibility: the symbol ratio must be pole- and zero-free on R.
enum class LinearCase { C1, C2, C3, None };

inline const char* to_string(LinearCase c) {
  switch (c) {
    case LinearCase::C1: return "C1";
    case LinearCase::C2: return "C2";
    case LinearCase::C3: return "C3";
    default: return "none";
  }
}

inline LinearCase classify_linear(const ModelCoeffs& m) {
  if (m.a <= 0.0 && m.c <= 0.0 && m.b >= 0.0 && m.d >= 0.0)
    return LinearCase::C1;
  const double scaled_a = m.a * (m.delta + m.gamma);
  const bool tied = std::abs(m.c - scaled_a) <=
                    kClassifyTol * std::max(1.0, std::abs(m.c));
  if (tied && m.c > 0.0) {
    if (m.b >= 0.0 && m.d >= 0.0) return LinearCase::C2;
    if (m.b == m.d && m.b < 0.0) return LinearCase::C3;
  }
  return LinearCase::None;
}

// ---------------------------------------------------------------------------
// Nonlinear local well-posedness catalogue (sign patterns, exact tests).
enum class WellposedCase { I, II, III, IV, V, VI, VII, None };

inline const char* to_string(WellposedCase c) {
  switch (c) {
    case WellposedCase::I: return "i";
    case WellposedCase::II: return "ii";
    case WellposedCase::III: return "iii";
    case WellposedCase::IV: return "iv";
    case WellposedCase::V: return "v";
    case WellposedCase::VI: return "vi";
    case WellposedCase::VII: return "vii";
    default: return "none";
  }
}

inline WellposedCase classify_wellposed(const ModelCoeffs& m) {
  const double a = m.a, b = m.b, c = m.c, d = m.d;
  if (b > 0.0 && d > 0.0) {
    if (a == 0.0 && c == 0.0) return WellposedCase::I;
    if (a < 0.0 && c < 0.0) return WellposedCase::II;
    if ((a == 0.0 && c < 0.0) || (a < 0.0 && c == 0.0)) return WellposedCase::V;
  } else if (b == 0.0 && d > 0.0) {
    if (a < 0.0 && c < 0.0) return WellposedCase::III;
    if (a == 0.0 && c == 0.0) return WellposedCase::IV;
    if (a < 0.0 && c == 0.0) return WellposedCase::VI;
    if (a == 0.0 && c < 0.0) return WellposedCase::VII;
  } else if (b > 0.0 && d == 0.0) {
    if (a == 0.0 && c == 0.0) return WellposedCase::IV;
    if (a < 0.0 && c == 0.0) return WellposedCase::VII;
  }
  return WellposedCase::None;
}

// ---------------------------------------------------------------------------
// Solitary-wave taxonomy.  The label A1..A6 depends only on sign patterns
// within the admissible set a,c <= 0, b,d >= 0 (A2 vs A3 via the sign of
// bd - a*c*(delta+gamma)); the quartic data and region need a speed.
enum class NftCase { A1, A2, A3, A4, A5, A6, None };

inline const char* to_string(NftCase c) {
  switch (c) {
    case NftCase::A1: return "A1";
    case NftCase::A2: return "A2";
    case NftCase::A3: return "A3";
    case NftCase::A4: return "A4";
    case NftCase::A5: return "A5";
    case NftCase::A6: return "A6";
    default: return "none";
  }
}

// bd - ac/kappa1: separates oscillatory-tail from monotone-tail classes when
// a,c < 0 and b,d > 0.
inline double nft_witness(const ModelCoeffs& m) {
  return m.b * m.d - m.a * m.c * (m.delta + m.gamma);
}

inline NftCase classify_nft(const ModelCoeffs& m) {
  const double a = m.a, b = m.b, c = m.c, d = m.d;
  if (a < 0.0 && c < 0.0 && b == 0.0 && d > 0.0) return NftCase::A1;
  if (a < 0.0 && c < 0.0 && b > 0.0 && d > 0.0)
    return nft_witness(m) < 0.0 ? NftCase::A2 : NftCase::A3;
  if (a == 0.0 && c < 0.0 && b > 0.0 && d > 0.0) return NftCase::A4;
  if (a < 0.0 && c == 0.0 && b > 0.0 && d > 0.0) return NftCase::A5;
  if (a == 0.0 && c == 0.0 && b > 0.0 && d > 0.0) return NftCase::A6;
  return NftCase::None;
}

// Coefficients of the characteristic quartic  d2*r^4 - d1*r^2 + d0 = 0
// satisfied by the decay rates of travelling waves of speed c_s.
struct DeltaPolynomial {
  double d0{}, d1{}, d2{};
};

inline DeltaPolynomial delta_polynomial(const ModelCoeffs& m, double c_s) {
  const double cs2 = c_s * c_s;
  const double cgd2 = m.kappa1() * m.kappa2();
  DeltaPolynomial p;
  p.d0 = cs2 - cgd2;
  p.d1 = cs2 * (m.b + m.d) + cgd2 * (m.c + m.a * (m.delta + m.gamma));
  p.d2 = m.b * m.d * cs2 - (1.0 - m.gamma) * m.a * m.c;
  return p;
}

// Roots of the characteristic quartic, symmetric under r -> -r.  Size 4, or 2
// in the degenerate case |d2| <= tol (quartic collapses to a quadratic).
inline std::vector<std::complex<double>> characteristic_roots(
    const ModelCoeffs& m, double c_s) {
  const auto [d0, d1, d2] = delta_polynomial(m, c_s);
  std::vector<std::complex<double>> roots;
  if (std::abs(d2) <= kClassifyTol) {
    // d1*r^2 = d0
    const std::complex<double> r = std::sqrt(std::complex<double>(d0 / d1, 0.0));
    roots = {r, -r};
    return roots;
  }
  const std::complex<double> disc =
      std::sqrt(std::complex<double>(d1 * d1 - 4.0 * d0 * d2, 0.0));
  for (const auto& s2 : {(d1 + disc) / (2.0 * d2), (d1 - disc) / (2.0 * d2)}) {
    const std::complex<double> r = std::sqrt(s2);
    roots.push_back(r);
    roots.push_back(-r);
  }
  return roots;
}

// Classification of (B, A) for the normalized quartic r^4 - B r^2 + A = 0:
// boundary curves as labelled in the source family of systems, and the four
// open regions between them.
struct NftInfo {
  NftCase label = NftCase::None;
  double witness{};      // bd - ac*(delta+gamma)
  double D{};            // normalizing factor b*d*c_s^2 - (1-gamma)*a*c
  bool d_degenerate{};   // |D| <= tol: quartic collapses (no A, B, region)
  double A{}, B{};
  int region = 0;        // 1..4; 0 when degenerate or on a boundary curve
  std::string curve;     // "C0".."C3" when on a boundary curve, else empty
};

inline NftInfo classify_nft(const ModelCoeffs& m, double c_s) {
  NftInfo info;
  info.label = classify_nft(m);
  info.witness = nft_witness(m);
  const auto [d0, d1, d2] = delta_polynomial(m, c_s);
  info.D = d2;
  info.d_degenerate = std::abs(d2) <= kClassifyTol;
  if (info.d_degenerate) return info;
  info.A = d0 / d2;
  info.B = d1 / d2;
  const double A = info.A, B = info.B;
  if (std::abs(A) <= kClassifyTol) {
    info.curve = B > 0.0 ? "C0" : "C1";
    return info;
  }
  if (A > 0.0) {
    const double rtA = std::sqrt(A);
    if (std::abs(B + rtA) <= kClassifyTol) {
      info.curve = "C2";
      return info;
    }
    if (std::abs(B - rtA) <= kClassifyTol) {
      info.curve = "C3";
      return info;
    }
    if (B > rtA)
      info.region = 2;
    else if (B < -rtA)
      info.region = 4;
    else
      info.region = 1;
  } else {
    info.region = 3;
  }
  return info;
}

// ---------------------------------------------------------------------------
// Linearized phase structure.  With x = k^2,
//   phi(x) = sqrt( (1 - at*x)(1 - c*x) / ((1 + b*x)(1 + d*x)) ),  at = a*(delta+gamma),
// the two linear-mode speeds are -c_s +/- cgd*phi(k^2) in the moving frame,
// and the group speeds use psi = 2x*phi' + phi.
struct DispersionProfile {
  double at{}, b{}, c{}, d{};
  double p1{}, p2{}, p3{};               // phi' numerator P(x) = p1 x^2 + p2 x - p3
  double cgd{};
  bool unbounded{};                      // phi -> infinity (fewer denominator zeros)
  std::optional<double> phi_infty;       // finite large-x limit, when it exists
  std::optional<double> x_star;          // interior positive critical point of phi

  double phi(double x) const {
    return std::sqrt((1.0 - at * x) * (1.0 - c * x) /
                     ((1.0 + b * x) * (1.0 + d * x)));
  }
  double P(double x) const { return (p1 * x + p2) * x - p3; }
  double dphi(double x) const {
    const double qb = 1.0 + b * x, qd = 1.0 + d * x;
    return P(x) / (2.0 * phi(x) * qb * qb * qd * qd);
  }
  double psi(double x) const { return 2.0 * x * dphi(x) + phi(x); }
  double phase_speed(double c_s, double k, int sign) const {
    return -c_s + (sign >= 0 ? 1.0 : -1.0) * cgd * phi(k * k);
  }
  double group_speed(double c_s, double k, int sign) const {
    return -c_s + (sign >= 0 ? 1.0 : -1.0) * cgd * psi(k * k);
  }
};

inline DispersionProfile dispersion_profile(const ModelCoeffs& m) {
  DispersionProfile p;
  p.at = m.a * (m.delta + m.gamma);
  p.b = m.b;
  p.c = m.c;
  p.d = m.d;
  p.cgd = m.cgd();
  p.p1 = p.at * p.c * (p.b + p.d) + p.b * p.d * (p.at + p.c);
  p.p2 = 2.0 * (p.at * p.c - p.b * p.d);
  p.p3 = m.sum_required();
  const int num_deg = (p.at != 0.0) + (p.c != 0.0);
  const int den_deg = (p.b != 0.0) + (p.d != 0.0);
  if (num_deg > den_deg) {
    p.unbounded = true;
  } else if (num_deg < den_deg) {
    p.phi_infty = 0.0;
  } else if (num_deg == 2) {
    p.phi_infty = std::sqrt(p.at * p.c / (p.b * p.d));
  } else if (num_deg == 1) {
    const double num = p.at != 0.0 ? -p.at : -p.c;
    const double den = p.b != 0.0 ? p.b : p.d;
    p.phi_infty = std::sqrt(num / den);
  } else {
    p.phi_infty = 1.0;
  }
  // Positive zero of P (phi decreases from phi(0)=1, so a sign change of P
  // marks the interior minimum).
  if (p.p1 != 0.0) {
    const double disc = p.p2 * p.p2 + 4.0 * p.p1 * p.p3;
    if (disc >= 0.0) {
      const double xs = (-p.p2 + std::sqrt(disc)) / (2.0 * p.p1);
      if (xs > 0.0) p.x_star = xs;
    }
  } else if (p.p2 > 0.0) {
    p.x_star = p.p3 / p.p2;
  }
  return p;
}

// Sufficient speed window for waves obtained by constrained minimization:
// for b=d>0 and a,c<0, speeds with 0 < |c_s| - cgd < M qualify.
inline std::optional<double> cc_speed_bound(const ModelCoeffs& m) {
  if (!(m.b == m.d && m.b > 0.0 && m.a < 0.0 && m.c < 0.0)) return std::nullopt;
  return std::min(m.kappa2() * std::abs(m.c) / m.b,
                  std::abs(m.a) / (2.0 * m.b));
}

}  // namespace bblab
