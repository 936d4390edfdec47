#pragma once
// Time integration of the evolution system in spectral variables (zeta^, v^),
// where v is the regularized layer velocity (the same unknown the solitary-
// wave solver produces as v_beta; the output velocity u = (1+beta kh^2) v^ is
// derived, not evolved):
//   zeta^' = ik/(1+b kh^2) * [ (-kappa1 + a kh^2) v^ - lambda (zeta v)^ ]
//   v^'    = ik/(1+d kh^2) * [ -kappa2 (1 - c kh^2) zeta^ - lambda/2 (v^2)^ ]
// advanced by the fourth-order triple-jump composition of the implicit
// midpoint rule: three chained substeps with weights w1 = 1/(2-2^(1/3)),
// w2 = 1-2*w1, w3 = w1, each solved by fixed-point iteration.  The scheme is
// time-reversible, which underlies its invariant-preservation behaviour.

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "bblab/grid.hpp"
#include "bblab/model.hpp"

namespace bblab {

struct WaveState {
  double t{};
  SpectralField zeta_hat, v_hat;
};

class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(int step_index, double time)
      : std::runtime_error("solution lost finiteness at step " +
                           std::to_string(step_index)),
        step(step_index),
        t(time) {}
  int step;
  double t;
};

class FixedPointError : public std::runtime_error {
 public:
  explicit FixedPointError(double time)
      : std::runtime_error("midpoint fixed-point iteration failed to converge"),
        t(time) {}
  double t;
};

struct StepperConfig {
  double dt{};
  double fp_tolerance = 1e-12;  // relative change between sweeps
  int fp_max_iters = 200;
  std::optional<double> cfl_alpha;  // advisory bound on N*dt (warn only)
  int observer_stride = 0;          // 0: about 400 observations per run
};

struct RunInfo {
  int steps{};
  double dt_used{};
  bool dt_adjusted{};
  double cfl_product{};
  bool cfl_exceeded{};
};

class Evolver {
 public:
  Evolver(const Grid& g, const ModelCoeffs& m) : g_(g), lam_(m.lambda()) {
    const int n = g.size();
    gz_.resize(n);
    gu_.resize(n);
    az_.resize(n);
    au_.resize(n);
    const double k1 = m.kappa1(), k2 = m.kappa2();
    for (int i = 0; i < n; ++i) {
      const double kh = g.khat(i);
      const double kh2 = kh * kh;
      gz_[i] = Complex(0.0, kh / (1.0 + m.b * kh2));
      gu_[i] = Complex(0.0, kh / (1.0 + m.d * kh2));
      az_[i] = -k1 + m.a * kh2;        // acts on v^ in the zeta equation
      au_[i] = -k2 * (1.0 - m.c * kh2);  // acts on zeta^ in the u equation
    }
    gz_[n / 2] = gu_[n / 2] = Complex(0.0, 0.0);  // unpaired mode carries no odd operator
  }

  const Grid& grid() const { return g_; }

  void rhs(const SpectralField& zh, const SpectralField& vh, SpectralField& dzh,
           SpectralField& dvh) const {
    const SpectralField zv = g_.dealiased_product(zh, vh);
    const SpectralField vv = g_.dealiased_product(vh, vh);
    const int n = g_.size();
    dzh.resize(n);
    dvh.resize(n);
    for (int i = 0; i < n; ++i) {
      dzh[i] = gz_[i] * (az_[i] * vh[i] - lam_ * zv[i]);
      dvh[i] = gu_[i] * (au_[i] * zh[i] - 0.5 * lam_ * vv[i]);
    }
  }

  // One midpoint substep of width h: y <- y + h f((y + y+)/2).
  void imr_substep(WaveState& s, double h, const StepperConfig& cfg) const {
    const int n = g_.size();
    SpectralField Yz = s.zeta_hat, Yv = s.v_hat;  // current sweep iterate
    SpectralField mz(n), mv(n), fz, fv;
    for (int it = 0; it < cfg.fp_max_iters; ++it) {
      for (int i = 0; i < n; ++i) {
        mz[i] = 0.5 * (s.zeta_hat[i] + Yz[i]);
        mv[i] = 0.5 * (s.v_hat[i] + Yv[i]);
      }
      rhs(mz, mv, fz, fv);
      double change = 0.0, scale = 0.0;
      for (int i = 0; i < n; ++i) {
        const Complex nz = s.zeta_hat[i] + h * fz[i];
        const Complex nv = s.v_hat[i] + h * fv[i];
        change += std::norm(nz - Yz[i]) + std::norm(nv - Yv[i]);
        scale += std::norm(nz) + std::norm(nv);
        Yz[i] = nz;
        Yv[i] = nv;
      }
      if (change <= cfg.fp_tolerance * cfg.fp_tolerance * std::max(scale, 1e-300)) {
        s.zeta_hat = std::move(Yz);
        s.v_hat = std::move(Yv);
        s.t += h;
        return;
      }
    }
    throw FixedPointError(s.t);
  }

  void composition_step(WaveState& s, double dt, const StepperConfig& cfg) const {
    constexpr double w1 = 1.3512071919596578;  // 1/(2 - cbrt(2))
    constexpr double w2 = 1.0 - 2.0 * w1;
    imr_substep(s, w1 * dt, cfg);
    imr_substep(s, w2 * dt, cfg);
    imr_substep(s, w1 * dt, cfg);
  }

  // Advance to t + T in equal steps; dt is reduced to divide T exactly when
  // needed.  The observer receives (state, step_index) at start, on the
  // stride, and at the end.
  template <class Observer>
  RunInfo run(WaveState& s, double T, const StepperConfig& cfg,
              Observer&& observe) const {
    if (!(cfg.dt > 0.0) || !(T > 0.0))
      throw std::domain_error("time step and horizon must be positive");
    RunInfo info;
    const int steps = static_cast<int>(std::ceil(T / cfg.dt - 1e-9));
    info.steps = steps;
    info.dt_used = T / steps;
    info.dt_adjusted = std::abs(info.dt_used - cfg.dt) > 1e-14 * cfg.dt;
    info.cfl_product = g_.size() * info.dt_used;
    info.cfl_exceeded = cfg.cfl_alpha && info.cfl_product > *cfg.cfl_alpha;
    const int stride =
        cfg.observer_stride > 0 ? cfg.observer_stride : std::max(1, (steps + 399) / 400);
    const double t0 = s.t;
    double mass0 = 0.0;
    for (const auto& z : s.zeta_hat) mass0 += std::norm(z);
    for (const auto& z : s.v_hat) mass0 += std::norm(z);
    if (!std::isfinite(mass0)) throw BlowUpError(0, t0);
    observe(const_cast<const WaveState&>(s), 0);
    for (int step = 1; step <= steps; ++step) {
      composition_step(s, info.dt_used, cfg);
      s.t = t0 + step * info.dt_used;  // avoid drift in the reported time
      double mass = 0.0;
      for (const auto& z : s.zeta_hat) mass += std::norm(z);
      for (const auto& z : s.v_hat) mass += std::norm(z);
      if (!std::isfinite(mass)) throw BlowUpError(step, s.t);
      if (step % stride == 0 || step == steps)
        observe(const_cast<const WaveState&>(s), step);
    }
    return info;
  }

 private:
  const Grid& g_;
  double lam_;
  SpectralField gz_, gu_;
  std::vector<double> az_, au_;
};

}  // namespace bblab
