#pragma once
// Closed-form sech^2 solitary-wave branch.  For coefficient sets with
// kappa1*(b-2d) - a != 0 the system admits the exact travelling pair
//   zeta(x,t) = 3*mu1 * sech^2( r*(x - c_s t - x0) ),   r = sqrt(mu1/mu2)/2,
//   u = B * (zeta - beta * zeta_xx)   (equivalently v = B * zeta),
// with B, c_s determined by the coefficients and mu1, mu2 by B.  In the
// degenerate case (requires c = a*(delta+gamma)) B is free and fixes c_s.

#include <cmath>
#include <optional>
#include <stdexcept>

#include "bblab/grid.hpp"
#include "bblab/model.hpp"

namespace bblab {

struct ExactSech2 {
  ModelCoeffs coeffs;
  double B{};    // velocity scale: u = B (zeta - beta zeta_xx)
  double c_s{};
  double mu1{}, mu2{};

  double amplitude() const { return 3.0 * mu1; }
  double decay_rate() const { return 0.5 * std::sqrt(mu1 / mu2); }

  double zeta(double x) const {
    const double s = 1.0 / std::cosh(decay_rate() * x);
    return 3.0 * mu1 * s * s;
  }
  // zeta'' = (mu1*zeta - zeta^2/2) / mu2
  double zeta_xx(double x) const {
    const double z = zeta(x);
    return (mu1 * z - 0.5 * z * z) / mu2;
  }
  double v_beta(double x) const { return B * zeta(x); }
  double u(double x) const { return B * (zeta(x) - coeffs.beta * zeta_xx(x)); }
};

// Construct the branch.  branch selects the sign of B (and with it of c_s).
// free_B must be supplied in the degenerate case and is ignored otherwise.
inline ExactSech2 exact_sech2(const ModelCoeffs& m, int branch = +1,
                              std::optional<double> free_B = {}) {
  const double k1 = m.kappa1(), k2 = m.kappa2(), lam = m.lambda();
  if (lam == 0.0)
    throw std::domain_error("quadratic-term scale vanishes: no sech^2 branch");
  const double den = k1 * (m.b - 2.0 * m.d) - m.a;
  ExactSech2 w;
  w.coeffs = m;
  if (std::abs(den) > kClassifyTol) {
    const double B2 = 2.0 * k2 * (m.b - 2.0 * m.d - m.c) / den;
    if (!(B2 > 0.0))
      throw std::domain_error("sech^2 branch requires a positive squared velocity scale");
    w.B = (branch >= 0 ? 1.0 : -1.0) * std::sqrt(B2);
    w.c_s = (2.0 * k2 * (m.c * k1 - m.a) / den) / w.B;
  } else {
    // degenerate: consistency needs c = a*(delta+gamma); B is free
    if (std::abs(m.c - m.a * (m.delta + m.gamma)) >
        kClassifyTol * std::max(1.0, std::abs(m.c)))
      throw std::domain_error("degenerate sech^2 branch is inconsistent for these coefficients");
    if (!free_B)
      throw std::domain_error("degenerate sech^2 branch: velocity scale must be chosen");
    w.B = (branch >= 0 ? 1.0 : -1.0) * std::abs(*free_B);
    w.c_s = (2.0 * k2 - k1 * w.B * w.B) / w.B;
  }
  const double B2 = w.B * w.B;
  w.mu1 = (k2 - k1 * B2) / (lam * B2);
  w.mu2 = ((m.a - m.b * k1) * B2 + 2.0 * m.b * k2) / (2.0 * lam * B2);
  if (!(w.mu1 * w.mu2 > 0.0))
    throw std::domain_error("sech^2 branch has no real width for these coefficients");
  return w;
}

struct SampledWave {
  RealField zeta, v_beta, u;
  bool wrap_warning{};  // profile not negligible at the periodic boundary
};

// Sample the exact pair on a grid, centered at x0.  Warns (flag) when the
// half-domain holds fewer than 20 e-foldings of the tail.
inline SampledWave sample_exact(const Grid& g, const ExactSech2& w,
                                double x0 = 0.0) {
  SampledWave s;
  s.zeta.resize(g.size());
  s.v_beta.resize(g.size());
  s.u.resize(g.size());
  for (int j = 0; j < g.size(); ++j) {
    const double x = g.node(j) - x0;
    s.zeta[j] = w.zeta(x);
    s.v_beta[j] = w.v_beta(x);
    s.u[j] = w.u(x);
  }
  s.wrap_warning = w.decay_rate() * g.half_length() < 20.0;
  return s;
}

}  // namespace bblab
