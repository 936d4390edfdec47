#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "bblab/evolve.hpp"
#include "bblab/exact.hpp"
#include "bblab/grid.hpp"
#include "bblab/model.hpp"
#include "expected_values.hpp"

using namespace bblab;
namespace ex = bblab::expected;
using Catch::Approx;

namespace {

ModelCoeffs benchmark() {
  return coeffs_from_quadruple(ex::kGamma, ex::kDelta, ex::kBmA, ex::kBmBD,
                               ex::kBmC, ex::kBmBD);
}

// gamma = delta^2 makes the quadratic-term scale vanish: the evolution is
// linear and every mode follows a closed-form 2x2 rotation.
ModelCoeffs quadratic_free() {
  return coeffs_from_quadruple(0.25, 0.5, 0.0, 0.5, 0.0, 0.5);
}

WaveState gaussian_state(const Grid& g, double a_zeta = 1.0, double a_u = -0.4) {
  WaveState s;
  s.zeta_hat = g.to_spectral(
      g.sample([&](double x) { return a_zeta * std::exp(-0.5 * x * x); }));
  s.v_hat = g.to_spectral(g.sample(
      [&](double x) { return a_u * std::exp(-0.5 * (x - 1.0) * (x - 1.0)); }));
  return s;
}

struct ModeFlow {
  double az, au, om;
};

// Per-mode generator of the linearized system: d/dt (z, u) = (i az u, i au z).
std::vector<ModeFlow> mode_flows(const Grid& g, const ModelCoeffs& m) {
  std::vector<ModeFlow> v(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double kh = g.khat(i), kh2 = kh * kh;
    double az = kh * (-m.kappa1() + m.a * kh2) / (1.0 + m.b * kh2);
    double au = kh * (-m.kappa2() * (1.0 - m.c * kh2)) / (1.0 + m.d * kh2);
    if (i == g.size() / 2) az = au = 0.0;  // unpaired mode is frozen
    v[i] = {az, au, std::sqrt(std::max(az * au, 0.0))};
  }
  return v;
}

}  // namespace

TEST_CASE("a member without quadratic terms conserves every mode pair") {
  const auto m = quadratic_free();
  REQUIRE(m.lambda() == Approx(0.0).margin(1e-15));
  Grid g(16.0, 128);
  Evolver ev(g, m);
  WaveState s = gaussian_state(g);
  const auto flows = mode_flows(g, m);
  // Q = |z|^2/az + |u|^2/au is constant along each oscillatory mode, and the
  // midpoint update preserves quadratic invariants exactly.  az is odd in the
  // wavenumber, so the check runs over the positive half-spectrum.
  const auto mode_q = [&](const WaveState& w, int i) {
    return std::norm(w.zeta_hat[i]) / flows[i].az +
           std::norm(w.v_hat[i]) / flows[i].au;
  };
  std::vector<double> q0;
  double q_scale = 0.0;
  for (int i = 1; i < g.size() / 2; ++i) {
    q0.push_back(mode_q(s, i));
    q_scale = std::max(q_scale, std::abs(q0.back()));
  }
  REQUIRE(q_scale > 0.0);
  StepperConfig cfg;
  cfg.dt = 0.05;
  cfg.fp_tolerance = 1e-14;
  ev.run(s, 25.0, cfg, [](const WaveState&, int) {});
  double drift = 0.0;
  for (int i = 1; i < g.size() / 2; ++i)
    drift = std::max(drift, std::abs(mode_q(s, i) - q0[i - 1]));
  CHECK(drift <= 1e-10 * q_scale);
}

TEST_CASE("fourth-order accuracy against the closed-form mode rotation") {
  const auto m = quadratic_free();
  Grid g(16.0, 128);
  Evolver ev(g, m);
  const auto flows = mode_flows(g, m);
  const WaveState init = gaussian_state(g);
  const double T = 4.0;

  const auto exact_at = [&](double t) {
    WaveState w = init;
    for (int i = 0; i < g.size(); ++i) {
      const auto& f = flows[i];
      if (f.om == 0.0) continue;
      const Complex z0 = init.zeta_hat[i], u0 = init.v_hat[i];
      const double cs = std::cos(f.om * t), sn = std::sin(f.om * t);
      w.zeta_hat[i] = cs * z0 + Complex(0.0, f.az / f.om * sn) * u0;
      w.v_hat[i] = Complex(0.0, f.au / f.om * sn) * z0 + cs * u0;
    }
    return w;
  };
  const WaveState ref = exact_at(T);

  std::vector<double> errs;
  for (const double dt : {0.2, 0.1, 0.05}) {
    WaveState s = init;
    StepperConfig cfg;
    cfg.dt = dt;
    cfg.fp_tolerance = 1e-13;
    ev.run(s, T, cfg, [](const WaveState&, int) {});
    double e = 0.0;
    for (int i = 0; i < g.size(); ++i)
      e = std::max(e, std::abs(s.zeta_hat[i] - ref.zeta_hat[i]) +
                          std::abs(s.v_hat[i] - ref.v_hat[i]));
    errs.push_back(e);
  }
  const double r1 = std::log2(errs[0] / errs[1]);
  const double r2 = std::log2(errs[1] / errs[2]);
  CHECK(r1 == Approx(4.0).margin(0.1));
  CHECK(r2 == Approx(4.0).margin(0.1));
  CHECK(errs[2] < 1e-5);
}

TEST_CASE("composition steps are time-reversible") {
  const auto m = benchmark();
  Grid g(32.0, 256);
  Evolver ev(g, m);
  const WaveState init = gaussian_state(g, 1.5, -0.6);
  WaveState s = init;
  StepperConfig cfg;
  cfg.dt = 0.05;
  cfg.fp_tolerance = 1e-14;
  cfg.fp_max_iters = 500;
  for (int j = 0; j < 100; ++j) ev.composition_step(s, cfg.dt, cfg);
  for (int j = 0; j < 100; ++j) ev.composition_step(s, -cfg.dt, cfg);
  CHECK(s.t == Approx(0.0).margin(1e-10));
  double e = 0.0;
  for (int i = 0; i < g.size(); ++i)
    e = std::max(e, std::abs(s.zeta_hat[i] - init.zeta_hat[i]) +
                        std::abs(s.v_hat[i] - init.v_hat[i]));
  CHECK(e <= 1e-9);
}

TEST_CASE("real data stays real over long runs") {
  const auto m = benchmark();
  Grid g(32.0, 256);
  Evolver ev(g, m);
  WaveState s = gaussian_state(g, 1.2, -0.5);
  StepperConfig cfg;
  cfg.dt = 0.02;
  ev.run(s, 20.0, cfg, [](const WaveState&, int) {});  // 1000 steps
  CHECK(g.hermitian_defect(s.zeta_hat) <= 1e-12);
  CHECK(g.hermitian_defect(s.v_hat) <= 1e-12);
}

TEST_CASE("the closed-form wave translates at its speed") {
  const auto m = benchmark();
  const auto w = exact_sech2(m);
  REQUIRE(w.c_s == Approx(ex::kBmSpeed).epsilon(1e-13));
  Grid g(256.0, 2048);
  const auto sw = sample_exact(g, w);
  REQUIRE_FALSE(sw.wrap_warning);
  WaveState s;
  s.zeta_hat = g.to_spectral(sw.zeta);
  s.v_hat = g.to_spectral(sw.v_beta);
  const SpectralField z0 = s.zeta_hat, v0 = s.v_hat;
  const double T = 5.0;
  StepperConfig cfg;
  cfg.dt = 1.0 / 80.0;
  Evolver ev(g, m);
  ev.run(s, T, cfg, [](const WaveState&, int) {});
  const RealField zs = g.from_spectral(g.shift(z0, w.c_s * T));
  const RealField vs = g.from_spectral(g.shift(v0, w.c_s * T));
  const RealField z = g.from_spectral(s.zeta_hat);
  const RealField v = g.from_spectral(s.v_hat);
  double e = 0.0;
  for (int j = 0; j < g.size(); ++j)
    e = std::max(e, std::abs(z[j] - zs[j]) + std::abs(v[j] - vs[j]));
  CHECK(e <= 2e-7);
}

TEST_CASE("the time step is adjusted to divide the horizon") {
  const auto m = quadratic_free();
  Grid g(16.0, 64);
  Evolver ev(g, m);
  StepperConfig cfg;
  cfg.fp_tolerance = 1e-13;

  SECTION("a non-dividing step is shrunk") {
    WaveState s = gaussian_state(g, 0.1, 0.0);
    cfg.dt = 0.3;
    double t_end = -1.0;
    const RunInfo info =
        ev.run(s, 1.0, cfg, [&](const WaveState& w, int) { t_end = w.t; });
    CHECK(info.steps == 4);
    CHECK(info.dt_used == Approx(0.25).margin(1e-15));
    CHECK(info.dt_adjusted);
    CHECK(t_end == Approx(1.0).margin(1e-12));
  }

  SECTION("a dividing step is kept, also when the quotient rounds badly") {
    WaveState s = gaussian_state(g, 0.1, 0.0);
    cfg.dt = 1.0 / 3.0;
    const RunInfo info = ev.run(s, 1.0, cfg, [](const WaveState&, int) {});
    CHECK(info.steps == 3);
    CHECK_FALSE(info.dt_adjusted);
  }

  SECTION("the advisory resolution product is reported") {
    WaveState s = gaussian_state(g, 0.1, 0.0);
    cfg.dt = 0.25;
    cfg.cfl_alpha = 10.0;
    const RunInfo info = ev.run(s, 1.0, cfg, [](const WaveState&, int) {});
    CHECK(info.cfl_product == Approx(64 * 0.25));
    CHECK(info.cfl_exceeded);  // 16 > 10
  }

  SECTION("non-positive steps or horizons are rejected") {
    WaveState s = gaussian_state(g, 0.1, 0.0);
    cfg.dt = 0.0;
    CHECK_THROWS_AS(ev.run(s, 1.0, cfg, [](const WaveState&, int) {}),
                    std::domain_error);
    cfg.dt = 0.1;
    CHECK_THROWS_AS(ev.run(s, -1.0, cfg, [](const WaveState&, int) {}),
                    std::domain_error);
  }
}

TEST_CASE("the observer sees the start, the stride, and the end") {
  const auto m = quadratic_free();
  Grid g(16.0, 64);
  Evolver ev(g, m);
  WaveState s = gaussian_state(g, 0.1, 0.0);
  StepperConfig cfg;
  cfg.dt = 0.1;
  cfg.fp_tolerance = 1e-13;
  cfg.observer_stride = 3;
  std::vector<int> seen;
  ev.run(s, 1.0, cfg, [&](const WaveState&, int j) { seen.push_back(j); });
  CHECK(seen == std::vector<int>{0, 3, 6, 9, 10});
}

TEST_CASE("oversized steps fail the midpoint iteration") {
  const auto m = benchmark();
  Grid g(64.0, 512);
  const auto sw = sample_exact(g, exact_sech2(m));
  WaveState s;
  s.zeta_hat = g.to_spectral(sw.zeta);
  s.v_hat = g.to_spectral(sw.v_beta);
  Evolver ev(g, m);
  StepperConfig cfg;
  cfg.dt = 1.0;
  CHECK_THROWS_AS(ev.run(s, 5.0, cfg, [](const WaveState&, int) {}),
                  FixedPointError);
}

TEST_CASE("non-finite data aborts the run immediately") {
  const auto m = benchmark();
  Grid g(16.0, 64);
  Evolver ev(g, m);
  WaveState s = gaussian_state(g, 1.0, -0.4);
  s.zeta_hat[3] = Complex(std::numeric_limits<double>::infinity(), 0.0);
  StepperConfig cfg;
  cfg.dt = 0.1;
  try {
    ev.run(s, 1.0, cfg, [](const WaveState&, int) {});
    FAIL("expected the run to abort");
  } catch (const BlowUpError& e) {
    CHECK(e.step == 0);
  }
}
