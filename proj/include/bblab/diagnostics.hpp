#pragma once
// Run-time diagnostics: discrete invariants, sub-grid peak tracking, exact-
// solution errors, and convergence-rate tables.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "bblab/evolve.hpp"
#include "bblab/grid.hpp"
#include "bblab/model.hpp"

namespace bblab {

struct Invariants {
  double I{}, E{};
};

// Discrete conserved quantities of the evolution, evaluated on the node
// values of U = zeta and the evolving velocity V = v:
//   I = h * sum( U V + b * DU DV )
//   E = h/2 * sum( k2 U^2 + k1 V^2 - a DV^2 - k2 c DU^2 + lambda U V^2 )
inline Invariants invariants(const Grid& g, const ModelCoeffs& m,
                             const SpectralField& zeta_hat,
                             const SpectralField& v_hat) {
  const int n = g.size();
  const RealField U = g.from_spectral(zeta_hat);
  const RealField V = g.from_spectral(v_hat);
  const RealField DU = g.from_spectral(g.diff(zeta_hat));
  const RealField DV = g.from_spectral(g.diff(v_hat));
  const double k1 = m.kappa1(), k2 = m.kappa2(), lam = m.lambda();
  double I = 0.0, E = 0.0;
  for (int j = 0; j < n; ++j) {
    I += U[j] * V[j] + m.b * DU[j] * DV[j];
    E += 0.5 * (k2 * U[j] * U[j] + k1 * V[j] * V[j] - m.a * DV[j] * DV[j] -
                k2 * m.c * DU[j] * DU[j] + lam * U[j] * V[j] * V[j]);
  }
  return {g.spacing() * I, g.spacing() * E};
}

// ---------------------------------------------------------------------------
struct Peak {
  double location{};
  double amplitude{};   // signed (parabolic fit through the extremum)
  bool multi_peak{};    // a second extremum within a tenth of the main one
};

// Sub-grid extremum by a three-point parabola through the largest node of
// polarity * zeta.  multi_peak is raised when the strongest local extremum
// outside the half-height window of the main peak exceeds a tenth of it.
inline Peak track_peak(const Grid& g, const RealField& zeta, int polarity = +1) {
  const int n = g.size();
  const double p = polarity >= 0 ? 1.0 : -1.0;
  int jmax = 0;
  for (int j = 1; j < n; ++j)
    if (p * zeta[j] > p * zeta[jmax]) jmax = j;
  const auto at = [&](int j) { return p * zeta[(j % n + n) % n]; };
  const double ym = at(jmax - 1), y0 = at(jmax), yp = at(jmax + 1);
  const double curv = ym - 2.0 * y0 + yp;
  Peak peak;
  double off = 0.0;
  if (curv != 0.0) off = 0.5 * (ym - yp) / curv;
  peak.location = g.node(jmax) + off * g.spacing();
  peak.amplitude = p * (y0 - 0.125 * (ym - yp) * (ym - yp) / (curv != 0.0 ? curv : 1.0));
  // half-height window half-width
  const double half = 0.5 * y0;
  int w = 1;
  while (w < n / 2 && (at(jmax + w) > half || at(jmax - w) > half)) ++w;
  double second = 0.0;
  for (int j = 0; j < n; ++j) {
    int dist = std::abs(j - jmax);
    dist = std::min(dist, n - dist);
    if (dist <= w) continue;
    if (at(j) > at(j - 1) && at(j) >= at(j + 1)) second = std::max(second, at(j));
  }
  peak.multi_peak = second > 0.0 && y0 < 10.0 * second;
  return peak;
}

// The count largest local maxima of polarity * zeta, separated pairwise by at
// least min_sep nodes; ordered by decreasing height.
inline std::vector<Peak> find_peaks(const Grid& g, const RealField& zeta,
                                    int polarity, int count, int min_sep) {
  const int n = g.size();
  const double p = polarity >= 0 ? 1.0 : -1.0;
  const auto at = [&](int j) { return p * zeta[(j % n + n) % n]; };
  std::vector<int> candidates;
  for (int j = 0; j < n; ++j)
    if (at(j) > at(j - 1) && at(j) >= at(j + 1)) candidates.push_back(j);
  std::sort(candidates.begin(), candidates.end(),
            [&](int a, int b) { return at(a) > at(b); });
  std::vector<int> chosen;
  for (int j : candidates) {
    bool clash = false;
    for (int k : chosen) {
      int dist = std::abs(j - k);
      dist = std::min(dist, n - dist);
      if (dist < min_sep) clash = true;
    }
    if (!clash) chosen.push_back(j);
    if (static_cast<int>(chosen.size()) == count) break;
  }
  std::vector<Peak> out;
  for (int j : chosen) {
    const double ym = at(j - 1), y0 = at(j), yp = at(j + 1);
    const double curv = ym - 2.0 * y0 + yp;
    Peak pk;
    const double off = curv != 0.0 ? 0.5 * (ym - yp) / curv : 0.0;
    pk.location = g.node(j) + off * g.spacing();
    pk.amplitude = p * (y0 - 0.125 * (ym - yp) * (ym - yp) / (curv != 0.0 ? curv : 1.0));
    out.push_back(pk);
  }
  return out;
}

struct PeakSample {
  double t{};
  double location{};   // unwrapped (continuous across the periodic seam)
  double amplitude{};
  double speed{};      // backward difference; zero at the first sample
  double phase_error{};  // against location(0) + reference_speed * (t - t0)
  bool multi_peak{};
};

class PeakTracker {
 public:
  PeakTracker(const Grid& g, int polarity,
              std::optional<double> reference_speed = {})
      : g_(g), polarity_(polarity), c_ref_(reference_speed) {}

  PeakSample update(double t, const RealField& zeta) {
    const Peak p = track_peak(g_, zeta, polarity_);
    PeakSample s;
    s.t = t;
    s.amplitude = p.amplitude;
    s.multi_peak = p.multi_peak;
    double loc = p.location;
    if (prev_) {
      const double L = g_.half_length();
      while (loc - prev_->location > L) loc -= 2.0 * L;
      while (loc - prev_->location < -L) loc += 2.0 * L;
      s.location = loc;
      s.speed = t > prev_->t ? (loc - prev_->location) / (t - prev_->t) : 0.0;
    } else {
      s.location = loc;
      t0_ = t;
      loc0_ = loc;
    }
    if (c_ref_) s.phase_error = s.location - (loc0_ + *c_ref_ * (s.t - t0_));
    prev_ = s;
    return s;
  }

 private:
  const Grid& g_;
  int polarity_;
  std::optional<double> c_ref_;
  std::optional<PeakSample> prev_;
  double t0_{}, loc0_{};
};

// ---------------------------------------------------------------------------
// Normalized discrete L2 distance.
inline double error_vs_exact(const Grid& g, const RealField& numeric,
                             const RealField& reference) {
  double num = 0.0, den = 0.0;
  for (int j = 0; j < g.size(); ++j) {
    const double diff = numeric[j] - reference[j];
    num += diff * diff;
    den += reference[j] * reference[j];
  }
  return std::sqrt(num / den);
}

struct ConvergenceRow {
  double dt{};
  double err_zeta{}, err_v{};
  double rate_zeta{}, rate_v{};  // vs the previous row; zero on the first
};

// Fill successive observed orders  log(e_prev/e)/log(dt_prev/dt).
inline void fill_rates(std::vector<ConvergenceRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double r = std::log(rows[i - 1].dt / rows[i].dt);
    rows[i].rate_zeta = std::log(rows[i - 1].err_zeta / rows[i].err_zeta) / r;
    rows[i].rate_v = std::log(rows[i - 1].err_v / rows[i].err_v) / r;
  }
}

}  // namespace bblab
