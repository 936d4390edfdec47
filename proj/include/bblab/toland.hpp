#pragma once
// Phase-plane machinery for classical solitary waves in the symmetric case
// b = d, a, c <= 0.  Travelling-wave orbits in the (v, zeta) plane start on
// the cubic curve {f = 0}; its arc between the two points P1, P2 where the
// tangent is parallel to a null direction of the kinetic quadratic form Q
// brackets the admissible crest states.  The crest itself satisfies f = 0,
// equivalently the speed-amplitude relation crest_speed below.

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "bblab/model.hpp"

namespace bblab {

struct TolandCurve {
  double kappa1{}, kappa2{}, lambda{}, cs{};

  // f(v, zeta): zero on the curve of admissible crest states.
  double f(double v, double z) const {
    return (-kappa1 * v * v - lambda * v * v * z - kappa2 * z * z +
            2.0 * cs * v * z) /
           cs;
  }
  std::array<double, 2> grad(double v, double z) const {
    return {(-2.0 * kappa1 * v - 2.0 * lambda * v * z + 2.0 * cs * z) / cs,
            (-lambda * v * v - 2.0 * kappa2 * z + 2.0 * cs * v) / cs};
  }
};

inline TolandCurve toland_curve(const ModelCoeffs& m, double c_s) {
  if (c_s == 0.0) throw std::domain_error("travelling speed must be nonzero");
  return TolandCurve{m.kappa1(), m.kappa2(), m.lambda(), c_s};
}

// Speed required for a crest (v0, z0) with mu = z0/v0 to lie on {f=0}.
inline double crest_speed(const ModelCoeffs& m, double z0, double mu) {
  return (m.kappa1() + m.lambda() * z0 + m.kappa2() * mu * mu) / (2.0 * mu);
}

// Move a crest pair onto {f=0} along the line through (v, z) with direction
// (g1, g2).  f restricted to that line is a cubic whose coefficients are
// exact, so the nearest root is found by a bracketed bisection (robust for
// crests far from the curve, where an undamped Newton step can escape).
// Throws when the line misses the curve entirely.
inline std::array<double, 2> project_along(const TolandCurve& c, double v,
                                           double z, double g1, double g2,
                                           double tol = 1e-12,
                                           int max_iter = 200) {
  // f(v + t g1, z + t g2) = A3 t^3 + A2 t^2 + A1 t + A0
  const double A0 = c.f(v, z);
  if (std::abs(A0) <= tol) return {v, z};
  const double A1 = (-2.0 * c.kappa1 * v * g1 -
                     c.lambda * (v * v * g2 + 2.0 * v * g1 * z) -
                     2.0 * c.kappa2 * z * g2 + 2.0 * c.cs * (v * g2 + g1 * z)) /
                    c.cs;
  const double A2 = (-c.kappa1 * g1 * g1 -
                     c.lambda * (2.0 * v * g1 * g2 + g1 * g1 * z) -
                     c.kappa2 * g2 * g2 + 2.0 * c.cs * g1 * g2) /
                    c.cs;
  const double A3 = -c.lambda * g1 * g1 * g2 / c.cs;
  const auto poly = [&](double t) { return ((A3 * t + A2) * t + A1) * t + A0; };
  const double t0 = std::abs(A0) / std::max(std::abs(A1), 1e-30);
  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  for (int k = 0; k <= 80 && !bracketed; ++k) {
    const double step = t0 * std::ldexp(1.0, k);
    for (double cand : {step, -step}) {
      if (poly(cand) * A0 <= 0.0) {
        lo = 0.0;
        hi = cand;
        bracketed = true;
        break;
      }
    }
  }
  if (!bracketed) throw std::runtime_error("curve projection found no crossing");
  for (int it = 0; it < max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double pm = poly(mid);
    if (std::abs(pm) <= tol || mid == lo || mid == hi) {
      return {v + mid * g1, z + mid * g2};
    }
    if (pm * A0 <= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  const double t = 0.5 * (lo + hi);
  return {v + t * g1, z + t * g2};
}

// Gradient-direction projection: the nearest point of {f=0} along grad f.
inline std::array<double, 2> project_to_curve(const TolandCurve& c, double v,
                                              double z, double tol = 1e-12,
                                              int max_iter = 200) {
  const auto g = c.grad(v, z);
  return project_along(c, v, z, g[0], g[1], tol, max_iter);
}

struct TolandSegment {
  TolandCurve curve{};
  int q_case = 0;        // 1: a<0;  2: a=0, c<0;  3: a=c=0
  bool degenerate{};     // lambda == 0: no quadratic term, no segment
  bool elevation{};      // crest polarity implied by the speed
  double D{};            // b^2 cs^2 - (1-gamma) a c; must be positive
  std::array<double, 2> slopes{};          // null directions zeta = slope * v
  std::array<double, 2> p1{}, p2{};        // tangency points (v, zeta)
  bool p1_valid{}, p2_valid{};
};

namespace detail {

// Point of {f=0} where the tangent is parallel to (1, slope): parameterize the
// curve by zeta between 0 and the extreme value where the two v-branches
// meet, scan for a sign change of <grad f, (1, slope)>, then bisect.
inline std::optional<std::array<double, 2>> tangency_point(
    const TolandCurve& c, double slope) {
  if (std::abs(c.lambda) <= kClassifyTol) return std::nullopt;
  const double cgd2 = c.kappa1 * c.kappa2;
  const double z_ext = (c.cs * c.cs - cgd2) / (c.kappa2 * c.lambda);
  if (z_ext == 0.0) return std::nullopt;
  const auto v_branch = [&](double z, int br) -> std::optional<double> {
    const double q = c.kappa1 + c.lambda * z;
    const double disc = c.cs * c.cs - c.kappa2 * q;
    if (disc < 0.0 || q == 0.0) return std::nullopt;
    return z * (c.cs + br * std::sqrt(disc)) / q;
  };
  const auto h = [&](double z, int br) -> std::optional<double> {
    const auto v = v_branch(z, br);
    if (!v) return std::nullopt;
    const auto g = c.grad(*v, z);
    return g[0] + slope * g[1];
  };
  constexpr int kScan = 4000;
  for (int br : {+1, -1}) {
    double z_prev = z_ext / kScan;
    auto h_prev = h(z_prev, br);
    for (int i = 2; i <= kScan; ++i) {
      const double z = z_ext * i / kScan;
      const auto h_cur = h(z, br);
      if (h_prev && h_cur && *h_prev * *h_cur <= 0.0) {
        double lo = z_prev, hi = z;
        for (int it = 0; it < 100; ++it) {
          const double mid = 0.5 * (lo + hi);
          const auto h_mid = h(mid, br);
          if (!h_mid) break;
          if (*h_mid * *h_prev <= 0.0)
            hi = mid;
          else
            lo = mid;
        }
        const double z_root = 0.5 * (lo + hi);
        const auto v_root = v_branch(z_root, br);
        if (v_root) return std::array<double, 2>{*v_root, z_root};
      }
      z_prev = z;
      h_prev = h_cur;
    }
  }
  return std::nullopt;
}

}  // namespace detail

inline TolandSegment toland_segment(const ModelCoeffs& m, double c_s) {
  if (!(m.b == m.d && m.b >= 0.0 && m.a <= 0.0 && m.c <= 0.0))
    throw std::domain_error("segment construction requires b = d >= 0 and a, c <= 0");
  TolandSegment seg;
  seg.curve = toland_curve(m, c_s);
  const double lam = m.lambda();
  seg.degenerate = std::abs(lam) <= kClassifyTol;
  seg.elevation = (std::abs(c_s) - m.cgd()) * lam > 0.0;
  seg.D = m.b * m.d * c_s * c_s - (1.0 - m.gamma) * m.a * m.c;
  if (seg.degenerate) return seg;
  if (m.a < 0.0) {
    seg.q_case = 1;
    const double rtD = std::sqrt(seg.D);
    const double bcs = m.b * c_s;
    seg.slopes = {m.a / (rtD - bcs), -m.a / (rtD + bcs)};
  } else if (m.c < 0.0) {
    seg.q_case = 2;
    const double rb = std::sqrt(m.b);
    const double q = m.c * (1.0 - m.gamma) / (c_s * rb);
    seg.slopes = {-q / (1.0 + rb), q / (1.0 - rb)};
  } else {
    seg.q_case = 3;
    seg.slopes = {0.0, std::numeric_limits<double>::infinity()};
    // closed forms: tangent parallel to the v-axis at P1, to the zeta-axis
    // image direction at P2
    if (c_s > 0.0) {
      const double cgd2 = m.kappa1() * m.kappa2();
      const double u1 = (c_s * c_s - cgd2) / (c_s * lam);
      seg.p1 = {u1, c_s * u1 / m.kappa2()};
      seg.p1_valid = true;
    } else {
      seg.p1 = {0.0, 0.0};
      seg.p1_valid = false;
    }
    const double u1p = 2.0 * (c_s - m.cgd()) / lam;
    seg.p2 = {u1p, std::sqrt(m.kappa1() / m.kappa2()) * u1p};
    seg.p2_valid = true;
    return seg;
  }
  if (const auto p = detail::tangency_point(seg.curve, seg.slopes[0])) {
    seg.p1 = *p;
    seg.p1_valid = true;
  }
  if (const auto p = detail::tangency_point(seg.curve, seg.slopes[1])) {
    seg.p2 = *p;
    seg.p2_valid = true;
  }
  return seg;
}

}  // namespace bblab
