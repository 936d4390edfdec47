#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "bblab/diagnostics.hpp"
#include "bblab/evolve.hpp"
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

RealField bump(const Grid& g, double amp, double rate, double x0) {
  return g.sample([&](double x) {
    const double s = 1.0 / std::cosh(rate * (x - x0));
    return amp * s * s;
  });
}

}  // namespace

TEST_CASE("invariants take their closed-form values on trigonometric data") {
  const auto m = benchmark();
  const double L = 10.0;
  Grid g(L, 256);
  const double om = 3.0 * std::numbers::pi / L;
  const double p = 0.7, q = 1.3, r = -0.8;
  const auto zh = g.to_spectral(
      g.sample([&](double x) { return p + q * std::cos(om * x); }));
  const auto vh =
      g.to_spectral(g.sample([&](double x) { return r * std::cos(om * x); }));

  const auto iv = invariants(g, m, zh, vh);
  const double k1 = m.kappa1(), k2 = m.kappa2(), lam = m.lambda();
  const double I_exact = q * r * L * (1.0 + m.b * om * om);
  const double E_exact =
      0.5 * (k2 * (2.0 * L * p * p + L * q * q) + k1 * L * r * r -
             m.a * L * r * r * om * om - k2 * m.c * L * q * q * om * om +
             lam * p * r * r * L);
  CHECK(iv.I == Approx(I_exact).epsilon(1e-12));
  CHECK(iv.E == Approx(E_exact).epsilon(1e-12));

  SECTION("translation leaves both invariants unchanged") {
    const auto iv2 = invariants(g, m, g.shift(zh, 3.7), g.shift(vh, 3.7));
    CHECK(iv2.I == Approx(iv.I).epsilon(1e-12));
    CHECK(iv2.E == Approx(iv.E).epsilon(1e-12));
  }
}

TEST_CASE("both invariants hold along a nonlinear run") {
  const auto m = benchmark();
  Grid g(32.0, 512);
  WaveState s;
  s.zeta_hat = g.to_spectral(
      g.sample([](double x) { return 1.5 * std::exp(-0.5 * x * x); }));
  s.v_hat = g.to_spectral(g.sample(
      [](double x) { return -0.6 * std::exp(-0.5 * (x - 1.0) * (x - 1.0)); }));
  const auto inv0 = invariants(g, m, s.zeta_hat, s.v_hat);
  Evolver ev(g, m);
  StepperConfig cfg;
  cfg.dt = 0.05;
  double drift_i = 0.0, drift_e = 0.0;
  ev.run(s, 10.0, cfg, [&](const WaveState& w, int) {
    const auto iv = invariants(g, m, w.zeta_hat, w.v_hat);
    drift_i = std::max(drift_i, std::abs(iv.I / inv0.I - 1.0));
    drift_e = std::max(drift_e, std::abs(iv.E / inv0.E - 1.0));
  });
  // I is quadratic, so the midpoint composition conserves it to rounding; E
  // has a cubic part and oscillates at the step-size-to-the-fourth level.
  CHECK(drift_i <= 1e-11);
  CHECK(drift_e <= 2e-8);
}

TEST_CASE("peak tracking resolves locations between nodes") {
  Grid g(64.0, 1024);  // spacing 0.125
  const auto z = bump(g, 3.0, 0.9, 17.3);
  const Peak p = track_peak(g, z);
  CHECK(std::abs(p.location - 17.3) <= 0.01);
  CHECK(std::abs(p.amplitude - 3.0) <= 0.02);
  CHECK_FALSE(p.multi_peak);
}

TEST_CASE("polarity selects troughs") {
  Grid g(64.0, 1024);
  auto z = bump(g, -2.5, 0.8, -9.15);
  // add a small positive bump that must not distract the trough tracker
  const auto other = bump(g, 0.6, 0.8, 20.0);
  for (int j = 0; j < g.size(); ++j) z[j] += other[j];
  const Peak p = track_peak(g, z, -1);
  CHECK(std::abs(p.location + 9.15) <= 0.01);
  CHECK(std::abs(p.amplitude + 2.5) <= 0.02);
}

TEST_CASE("the tracker unwraps motion across the periodic seam") {
  Grid g(32.0, 512);
  const auto zh0 = g.to_spectral(bump(g, 3.0, 0.9, 0.0));
  PeakTracker tr(g, +1, 2.0);
  const auto s0 = tr.update(0.0, g.from_spectral(g.shift(zh0, 31.0)));
  CHECK(s0.location == Approx(31.0).margin(0.01));
  CHECK(s0.speed == 0.0);
  CHECK(std::abs(s0.phase_error) <= 0.01);
  const auto s1 = tr.update(1.0, g.from_spectral(g.shift(zh0, 33.0)));
  CHECK(s1.location == Approx(33.0).margin(0.01));  // not the wrapped -31
  CHECK(s1.speed == Approx(2.0).margin(0.01));
  CHECK(std::abs(s1.phase_error) <= 0.01);

  PeakTracker slow(g, +1, 1.5);
  slow.update(0.0, g.from_spectral(g.shift(zh0, 31.0)));
  const auto s2 = slow.update(1.0, g.from_spectral(g.shift(zh0, 33.0)));
  CHECK(s2.phase_error == Approx(0.5).margin(0.01));
}

TEST_CASE("secondary structures raise the multi-peak flag") {
  Grid g(32.0, 512);
  auto one = bump(g, 3.0, 0.9, 0.0);
  CHECK_FALSE(track_peak(g, one).multi_peak);
  const auto side = bump(g, 1.0, 0.9, 15.0);
  for (int j = 0; j < g.size(); ++j) one[j] += side[j];
  CHECK(track_peak(g, one).multi_peak);
}

TEST_CASE("the strongest separated peaks are listed in height order") {
  Grid g(32.0, 512);
  auto z = bump(g, 3.0, 0.9, 0.0);
  const auto side = bump(g, 1.0, 0.9, 15.0);
  for (int j = 0; j < g.size(); ++j) z[j] += side[j];
  const auto peaks = find_peaks(g, z, +1, 2, 40);
  REQUIRE(peaks.size() == 2);
  CHECK(peaks[0].location == Approx(0.0).margin(0.01));
  CHECK(peaks[0].amplitude == Approx(3.0).margin(0.05));
  CHECK(peaks[1].location == Approx(15.0).margin(0.01));
  CHECK(peaks[1].amplitude == Approx(1.0).margin(0.05));
}

TEST_CASE("field distance is normalized by the reference") {
  Grid g(8.0, 128);
  const double om = std::numbers::pi / 4.0;
  const auto ref = g.sample([&](double x) { return std::cos(om * x); });
  CHECK(error_vs_exact(g, ref, ref) == 0.0);
  auto num = ref;
  const auto pert = g.sample([&](double x) { return std::sin(om * x); });
  for (int j = 0; j < g.size(); ++j) num[j] += 0.01 * pert[j];
  // equal norms of the two modes make the relative error exactly the factor
  CHECK(error_vs_exact(g, num, ref) == Approx(0.01).epsilon(1e-10));
}

TEST_CASE("observed orders follow from successive rows") {
  std::vector<ConvergenceRow> rows;
  for (const double dt : {0.4, 0.2, 0.1}) {
    ConvergenceRow r;
    r.dt = dt;
    r.err_zeta = 7.0 * dt * dt * dt * dt;
    r.err_v = 3.0 * dt * dt * dt;
    rows.push_back(r);
  }
  fill_rates(rows);
  CHECK(rows[0].rate_zeta == 0.0);
  CHECK(rows[0].rate_v == 0.0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].rate_zeta == Approx(4.0).epsilon(1e-12));
    CHECK(rows[i].rate_v == Approx(3.0).epsilon(1e-12));
  }
}
