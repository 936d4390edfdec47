#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "bblab/exact.hpp"
#include "bblab/grid.hpp"
#include "bblab/model.hpp"
#include "bblab/petviashvili.hpp"
#include "bblab/toland.hpp"
#include "expected_values.hpp"

using namespace bblab;
namespace ex = bblab::expected;
using Catch::Approx;

namespace {

ModelCoeffs benchmark() {
  return coeffs_from_quadruple(ex::kGamma, ex::kDelta, ex::kBmA, ex::kBmBD,
                               ex::kBmC, ex::kBmBD);
}

ModelCoeffs reference_elevation() {
  return coeffs_from_quadruple(ex::kGamma, ex::kDelta, -1.0 / 3, 1.0 / 3,
                               -2.0 / 3, ex::kA3d);
}

ModelCoeffs hamiltonian_equal() {
  return coeffs_from_quadruple(ex::kGamma, ex::kDelta, 0.0, ex::kA6HamBD, 0.0,
                               ex::kA6HamBD);
}

}  // namespace

TEST_CASE("sampling the closed-form wave") {
  const auto w = exact_sech2(benchmark());
  Grid g(256.0, 2048);
  const auto s = sample_exact(g, w);
  CHECK_FALSE(s.wrap_warning);
  CHECK(s.zeta[g.center_index()] == Approx(ex::kBmAmplitude).epsilon(1e-13));
  CHECK(s.v_beta[g.center_index()] ==
        Approx(ex::kBmB * ex::kBmAmplitude).epsilon(1e-13));
  // u = B (zeta - beta zeta_xx); at the crest zeta_xx < 0 so u exceeds B zeta
  CHECK(s.u[g.center_index()] > s.v_beta[g.center_index()]);
  Grid tiny(16.0, 128);
  CHECK(sample_exact(tiny, w).wrap_warning);
}

TEST_CASE("closed-form wave annihilates the travelling-wave residual") {
  const auto m = benchmark();
  const auto w = exact_sech2(m);
  Grid g(128.0, 1024);
  const auto s = sample_exact(g, w);
  PetviashviliOptions opts;
  opts.max_iters = 3;
  const auto sol = petviashvili_solve(g, m, w.c_s, {s.zeta, s.v_beta}, opts);
  CHECK(sol.iterations <= 3);
  CHECK(sol.residual_history.front() <= 1e-10);
  CHECK(std::abs(sol.mh_history.back() - 1.0) <= 1e-10);
  CHECK(sol.amplitude == Approx(ex::kBmAmplitude).epsilon(1e-10));
  CHECK(sol.wave_type == WaveType::Csw);
  CHECK(sol.boundary_clean);
}

TEST_CASE("cold start converges to the closed-form wave") {
  const auto m = benchmark();
  Grid g(128.0, 1024);
  const auto guess = sech2_guess(g, m, ex::kBmSpeed, 1.0, 0.5);
  const auto sol = petviashvili_solve(g, m, ex::kBmSpeed, guess);
  CHECK(sol.amplitude == Approx(ex::kBmAmplitude).margin(1e-6));
  CHECK(sol.residual_history.back() <= 1e-10);
  const auto w = exact_sech2(m);
  const auto s = sample_exact(g, w);
  double max_err = 0.0;
  for (int j = 0; j < g.size(); ++j)
    max_err = std::max(max_err, std::abs(sol.zeta[j] - s.zeta[j]));
  CHECK(max_err <= 1e-7);
  // iteration preserves evenness of the seed
  const int c0 = g.center_index();
  for (int j = 1; j < 100; ++j)
    CHECK(sol.zeta[c0 - j] == Approx(sol.zeta[c0 + j]).margin(1e-8));
}

TEST_CASE("elevation wave of the reference coefficient set") {
  const auto m = reference_elevation();
  Grid g(128.0, 1024);
  const double cs = ex::kCgd + 0.5;
  const auto sol = petviashvili_solve(g, m, cs, sech2_guess(g, m, cs));
  CHECK(sol.amplitude > 0.0);
  CHECK(sol.wave_type == WaveType::Csw);
  CHECK(sol.boundary_clean);
  CHECK(sol.residual_history.back() <= 1e-10);
  CHECK(std::abs(sol.mh_history.back() - 1.0) <= 1e-8);
  // residual decreases monotonically once the transient has passed
  const auto& h = sol.residual_history;
  for (std::size_t i = 5; i + 1 < h.size(); ++i) CHECK(h[i + 1] <= h[i]);
}

TEST_CASE("depression wave below the linear band") {
  const auto m = coeffs_from_quadruple(ex::kGamma, ex::kDelta, -1.0 / 3,
                                       ex::kA3DepBD, -2.0 / 3, ex::kA3DepBD);
  Grid g(64.0, 2048);
  const double cs = ex::kCgd - 0.25;
  const auto sol =
      petviashvili_solve(g, m, cs, sech2_guess(g, m, cs, -1.0, 1.0));
  CHECK(sol.amplitude < 0.0);
  CHECK(sol.wave_type == WaveType::Csw);
  CHECK(sol.residual_history.back() <= 1e-10);
}

TEST_CASE("minimal-polynomial extrapolation needs no more accepted steps") {
  const auto m = reference_elevation();
  Grid g(128.0, 1024);
  const double cs = ex::kCgd + 0.5;
  const auto guess = sech2_guess(g, m, cs);
  const auto plain = petviashvili_solve(g, m, cs, guess);
  PetviashviliOptions opts;
  opts.mpe_cycle_width = 5;
  const auto accel = petviashvili_solve(g, m, cs, guess, opts);
  CHECK(accel.residual_history.back() <= 1e-10);
  CHECK(accel.iterations <= plain.iterations);
  double amax = 0.0;
  for (int j = 0; j < g.size(); ++j)
    amax = std::max(amax, std::abs(accel.zeta[j] - plain.zeta[j]));
  CHECK(amax <= 1e-7);
}

TEST_CASE("extrapolation recovers the fixed point of a linear iteration") {
  // x+ = G x + r with G = diag(0.5, -0.3), fixed point (2, -1)
  std::vector<std::vector<double>> xs;
  std::vector<double> x{0.0, 0.0};
  const auto step = [](const std::vector<double>& v) {
    return std::vector<double>{0.5 * v[0] + 1.0, -0.3 * v[1] - 1.3};
  };
  xs.push_back(x);
  for (int i = 0; i < 3; ++i) {
    x = step(x);
    xs.push_back(x);
  }
  const auto comb = detail::mpe_combine(xs);
  REQUIRE(comb.has_value());
  CHECK((*comb)[0] == Approx(2.0).margin(1e-10));
  CHECK((*comb)[1] == Approx(-1.0).margin(1e-10));
}

TEST_CASE("crest projection pins the wave onto the admissible curve") {
  const auto m = hamiltonian_equal();
  Grid g(64.0, 2048);
  const double cs = ex::kTolSpeed;
  PetviashviliOptions opts;
  opts.project_toland = true;
  opts.mpe_cycle_width = 5;
  const auto sol = petviashvili_solve(
      g, m, cs, sech2_guess(g, m, cs, 8.0, 1.0), opts);
  CHECK(sol.amplitude == Approx(ex::kTolAmp).margin(1e-8));
  CHECK(sol.residual_history.back() <= 1e-10);
  const auto curve = toland_curve(m, cs);
  const int c0 = g.center_index();
  CHECK(sol.v_beta[c0] == Approx(ex::kTolVmax).margin(1e-8));
  double umax = 0.0;
  for (int j = 0; j < g.size(); ++j) umax = std::max(umax, sol.u[j]);
  CHECK(umax == Approx(ex::kTolUmax).margin(1e-8));
  CHECK(std::abs(curve.f(sol.v_beta[c0], sol.zeta[c0])) <= 1e-9);
  // crest sits on the arc between the two tangency points
  const auto seg = toland_segment(m, cs);
  CHECK(sol.zeta[c0] > seg.p2[1]);
  CHECK(sol.zeta[c0] < seg.p1[1]);
  CHECK(sol.wave_type == WaveType::Csw);
  // the crest relation is conserved along any travelling wave, so the
  // projected and unprojected iterations share their limit
  const auto bare = petviashvili_solve(g, m, cs, sech2_guess(g, m, cs, 8.0, 1.0));
  CHECK(bare.amplitude == Approx(sol.amplitude).margin(1e-7));
}

TEST_CASE("plain iteration holds the conjugate-symmetric subspace") {
  // long plain runs once lost a spurious non-real component that the
  // stabilizing factor cannot damp; the iteration must stay clean for many
  // steps beyond convergence
  const auto m = hamiltonian_equal();
  Grid g(64.0, 1024);
  const double cs = ex::kTolSpeed;
  PetviashviliOptions opts;
  opts.max_iters = 200;
  opts.tolerance = 1e-30;  // unreachable: force the full budget
  try {
    petviashvili_solve(g, m, cs, sech2_guess(g, m, cs, 8.0, 1.0), opts);
    FAIL("tolerance 1e-30 should not be reachable");
  } catch (const SolverError& e) {
    CHECK(e.kind == SolverError::Kind::MaxItersExceeded);
    const auto& h = e.best_iterate.residual_history;
    REQUIRE(h.size() == 201);
    CHECK(h.back() <= 1e-9);  // still at the floor, not regrowing
  }
}

TEST_CASE("speed-amplitude curve is monotone") {
  const auto m = hamiltonian_equal();
  Grid g(64.0, 512);
  PetviashviliOptions opts;
  opts.project_toland = true;
  double prev = 0.0;
  for (int j = 1; j <= 10; ++j) {
    const double cs = ex::kCgd + 0.05 * j;
    const auto sol =
        petviashvili_solve(g, m, cs, sech2_guess(g, m, cs, prev > 0 ? prev : 0.5, 0.6), opts);
    CHECK(sol.amplitude > prev);
    CHECK(sol.amplitude > 0.0);
    prev = sol.amplitude;
  }
}

TEST_CASE("iteration budget exhaustion reports the best iterate") {
  const auto m = reference_elevation();
  Grid g(64.0, 512);
  const double cs = ex::kCgd + 0.5;
  PetviashviliOptions opts;
  opts.max_iters = 3;
  opts.tolerance = 1e-14;
  try {
    petviashvili_solve(g, m, cs, sech2_guess(g, m, cs), opts);
    FAIL("expected the iteration budget to be exhausted");
  } catch (const SolverError& e) {
    CHECK(e.kind == SolverError::Kind::MaxItersExceeded);
    CHECK(e.best_iterate.residual_history.size() == 4);
    CHECK_FALSE(e.best_iterate.zeta.empty());
  }
}

TEST_CASE("near-resonant speeds abort instead of wandering") {
  const auto m = hamiltonian_equal();
  Grid g(64.0, 512);
  const double cs = 0.3;  // inside the linear band: some modes are resonant
  PetviashviliOptions opts;
  opts.max_iters = 200;
  CHECK_THROWS_AS(petviashvili_solve(g, m, cs, sech2_guess(g, m, cs), opts),
                  SolverError);
}

TEST_CASE("symbol matrix flags resonant modes") {
  const auto m = hamiltonian_equal();
  Grid g(32.0, 256);
  const double kh = g.khat(10);
  const double cs = m.cgd() / (1.0 + m.b * kh * kh);
  const auto s = build_symbol_matrix(g, m, cs, 1e-12);
  REQUIRE_FALSE(s.singular_modes.empty());
  bool has10 = false;
  for (int idx : s.singular_modes) has10 |= (idx == 10 || idx == 246);
  CHECK(has10);
  const auto clean = build_symbol_matrix(g, m, ex::kCgd + 0.5, 1e-12);
  CHECK(clean.singular_modes.empty());
}

TEST_CASE("profile taxonomy from tail behaviour") {
  Grid g(32.0, 512);
  const auto bump = g.sample([](double x) {
    const double s = 1.0 / std::cosh(0.5 * x);
    return s * s;
  });
  CHECK(classify_profile(g, bump).type == WaveType::Csw);
  CHECK(classify_profile(g, bump).boundary_clean);

  const auto ripple = g.sample(
      [](double x) { return std::cos(20.0 * std::numbers::pi * x / 32.0); });
  CHECK(classify_profile(g, ripple).type == WaveType::PeriodicTw);

  auto tailed = bump;
  for (int j = 0; j < g.size(); ++j)
    tailed[j] += 1e-4 * std::cos(20.0 * std::numbers::pi * g.node(j) / 32.0);
  const auto gsw = classify_profile(g, tailed);
  CHECK(gsw.type == WaveType::Gsw);
  CHECK_FALSE(gsw.boundary_clean);

  const auto damped = g.sample(
      [](double x) { return std::exp(-0.5 * std::abs(x)) * std::cos(2.0 * x); });
  CHECK(classify_profile(g, damped).type == WaveType::CswNonmonotone);
  CHECK(classify_profile(g, damped).sign_changes >= 2);
}

TEST_CASE("initial guess has the linearized velocity response") {
  const auto m = reference_elevation();
  Grid g(64.0, 512);
  const auto guess = sech2_guess(g, m, 1.1, 2.0, 0.5, 5.0);
  const int c0 = g.center_index();
  // bump is centered at x0 = 5 with the requested height
  int peak = 0;
  for (int j = 1; j < g.size(); ++j)
    if (guess.zeta[j] > guess.zeta[peak]) peak = j;
  CHECK(g.node(peak) == Approx(5.0).margin(g.spacing()));
  CHECK(guess.zeta[peak] == Approx(2.0).epsilon(1e-6));
  CHECK(guess.v_beta[peak] > 0.0);
  CHECK(guess.v_beta[c0] < guess.v_beta[peak]);
}
