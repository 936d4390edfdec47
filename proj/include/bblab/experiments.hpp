#pragma once
// Experiment drivers: one function per CLI subcommand.  Each builds its
// inputs from an ExperimentConfig, runs the computation, and writes CSV
// data plus a run.json metadata sidecar into the output directory.  CSV
// content is deterministic; timings appear only in run.json.

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bblab/config.hpp"
#include "bblab/diagnostics.hpp"
#include "bblab/evolve.hpp"
#include "bblab/exact.hpp"
#include "bblab/grid.hpp"
#include "bblab/io.hpp"
#include "bblab/model.hpp"
#include "bblab/petviashvili.hpp"

namespace bblab {

struct RunReport {
  Json echo;
  std::vector<std::string> files;
  std::vector<std::string> warnings;
  Json summary;
  double wall_ms = 0.0;
  long steps = 0;
};

struct RunContext {
  std::filesystem::path outdir = "out";
  int jobs = 1;
  bool quiet = false;
};

namespace detail {

inline Json coeffs_json(const ModelCoeffs& m) {
  return {{"gamma", m.gamma}, {"delta", m.delta}, {"a", m.a}, {"b", m.b},
          {"c", m.c},         {"d", m.d},         {"beta", m.beta}};
}

inline Json derived_json(const ModelCoeffs& m) {
  return {{"kappa1", m.kappa1()},
          {"kappa2", m.kappa2()},
          {"lambda", m.lambda()},
          {"sound_speed", m.cgd()},
          {"sum_residual", m.sum_residual}};
}

inline void warn_sum_residual(const ModelCoeffs& m, RunReport& rep) {
  if (std::abs(m.sum_residual) > 1e-8)
    rep.warnings.push_back(
        "quadruple misses the dispersion sum identity by " +
        format_value(m.sum_residual));
}

inline std::string artifact(RunReport& rep, const RunContext& ctx,
                            const std::string& name) {
  std::string path = (ctx.outdir / name).string();
  rep.files.push_back(path);
  return path;
}

inline void write_run_json(const RunReport& rep, const RunContext& ctx) {
  Json j;
  j["echo"] = rep.echo;
  j["summary"] = rep.summary;
  j["files"] = rep.files;
  j["warnings"] = rep.warnings;
  j["timings"] = {{"wall_ms", rep.wall_ms}, {"steps", rep.steps}};
  j["versions"] = {{"compiler", __VERSION__}};
  std::ofstream out(ctx.outdir / "run.json");
  if (!out) throw IoError("cannot open " + (ctx.outdir / "run.json").string());
  out << j.dump(2) << "\n";
}

class Stopwatch {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(clock::now() - t0_).count();
  }

 private:
  using clock = std::chrono::steady_clock;
  clock::time_point t0_ = clock::now();
};

// Residual of the travelling-wave system at (zeta, v): per-mode symbol times
// the unknowns minus the quadratic terms, measured as a node-space L2 norm.
inline double operator_residual(const Grid& g, const ModelCoeffs& m,
                                double c_s, const RealField& zeta,
                                const RealField& v) {
  const int n = g.size();
  const double k1 = m.kappa1(), k2 = m.kappa2(), lam = m.lambda();
  const auto zh = g.to_spectral(zeta);
  const auto vh = g.to_spectral(v);
  const auto zv = g.dealiased_product(zh, vh);
  const auto vv = g.dealiased_product(vh, vh);
  SpectralField r1(n), r2(n);
  for (int j = 0; j < n; ++j) {
    const double kh = g.khat(j), kh2 = kh * kh;
    r1[j] = c_s * (1.0 + m.b * kh2) * zh[j] - (k1 - m.a * kh2) * vh[j] -
            lam * zv[j];
    r2[j] = -k2 * (1.0 - m.c * kh2) * zh[j] + c_s * (1.0 + m.d * kh2) * vh[j] -
            0.5 * lam * vv[j];
  }
  const double a2 = g.l2_norm(r1), b2 = g.l2_norm(r2);
  return std::sqrt(a2 * a2 + b2 * b2);
}

// A wave prepared as evolve initial data: fields on the grid plus the signed
// phase speed used for tracking references.
struct BuiltWave {
  RealField zeta, v_beta;
  double c_s = 0.0;
  std::string wave_type = "unknown";
  double residual = 0.0;
};

inline void shift_fields(const Grid& g, RealField& zeta, RealField& v,
                         double s) {
  if (s == 0.0) return;
  zeta = g.from_spectral(g.shift(g.to_spectral(zeta), s));
  v = g.from_spectral(g.shift(g.to_spectral(v), s));
}

inline BuiltWave build_wave(const Grid& g, const ModelCoeffs& m,
                            const WaveRequest& req, const SolverBlock& sb,
                            double cgd, RunReport& rep) {
  BuiltWave out;
  if (req.source == "exact") {
    ExactSech2 w;
    try {
      w = exact_sech2(m, +1);
    } catch (const std::domain_error& e) {
      throw ConfigError(std::string("no closed-form wave: ") + e.what());
    }
    auto s = sample_exact(g, w, req.center);
    if (s.wrap_warning)
      rep.warnings.push_back("wave tail is not negligible at the periodic boundary");
    out.zeta = std::move(s.zeta);
    out.v_beta = std::move(s.v_beta);
    out.c_s = w.c_s;
    out.wave_type = "CSW";
  } else if (req.source == "profile") {
    ProfileData p = load_profile_csv(*req.profile);
    if (static_cast<int>(p.x.size()) != g.size())
      throw ConfigError("profile " + *req.profile + " has " +
                        std::to_string(p.x.size()) + " rows but the grid has " +
                        std::to_string(g.size()) + " nodes");
    for (int j = 0; j < g.size(); ++j)
      if (std::abs(p.x[j] - g.node(j)) > 1e-9 * std::max(1.0, g.half_length()))
        throw ConfigError("profile " + *req.profile +
                          " was sampled on a different grid");
    out.zeta = std::move(p.zeta);
    out.v_beta = std::move(p.v_beta);
    out.c_s = req.c_s || req.c_s_offset ? req.resolved_speed(cgd) : 0.0;
    shift_fields(g, out.zeta, out.v_beta, req.center);
  } else {  // solitary
    const double cs = req.resolved_speed(cgd);
    PetviashviliOptions opt;
    opt.max_iters = sb.max_iters;
    opt.tolerance = sb.tolerance;
    opt.mpe_cycle_width = sb.mpe_cycle_width;
    opt.exponent = sb.exponent;
    opt.project_toland = sb.project_toland;
    const auto guess = sech2_guess(g, m, cs, req.guess.amplitude,
                                   req.guess.rate, req.guess.x0);
    SolitaryWave sw = petviashvili_solve(g, m, cs, guess, opt);
    if (!sw.boundary_clean)
      rep.warnings.push_back("wave tail is not negligible at the periodic boundary");
    out.zeta = std::move(sw.zeta);
    out.v_beta = std::move(sw.v_beta);
    out.c_s = cs;
    out.wave_type = to_string(sw.wave_type);
    out.residual = sw.residual_history.empty() ? 0.0 : sw.residual_history.back();
    shift_fields(g, out.zeta, out.v_beta, req.center);
  }
  if (req.direction < 0) {
    for (auto& v : out.v_beta) v = -v;
    out.c_s = -out.c_s;
  }
  return out;
}

inline RealField velocity_output(const Grid& g, const ModelCoeffs& m,
                                 const SpectralField& v_hat) {
  SpectralField uh(v_hat.size());
  for (int j = 0; j < static_cast<int>(v_hat.size()); ++j) {
    const double kh = g.khat(j);
    uh[j] = (1.0 + m.beta * kh * kh) * v_hat[j];
  }
  return g.from_spectral(uh);
}

}  // namespace detail

// ---------------------------------------------------------------- derive-params
inline RunReport run_derive_params(const ExperimentConfig& cfg,
                                   const RunContext& ctx) {
  detail::Stopwatch clock;
  RunReport rep;
  rep.echo = cfg.echo;
  detail::warn_sum_residual(cfg.coeffs, rep);
  Json j;
  j["quadruple"] = detail::coeffs_json(cfg.coeffs);
  j["derived"] = detail::derived_json(cfg.coeffs);
  try {
    const PhysicalParams p = modelling_params(cfg.coeffs);
    j["physical"] = {{"gamma", p.gamma},   {"delta", p.delta},
                     {"alpha1", p.alpha1}, {"alpha2", p.alpha2},
                     {"beta", p.beta}};
  } catch (const std::domain_error& e) {
    j["physical"] = nullptr;
    rep.warnings.push_back(std::string("no modelling parameters: ") + e.what());
  }
  std::ofstream out(detail::artifact(rep, ctx, "derived.json"));
  out << j.dump(2) << "\n";
  rep.summary = j;
  rep.wall_ms = clock.ms();
  detail::write_run_json(rep, ctx);
  return rep;
}

// --------------------------------------------------------------------- classify
inline RunReport run_classify(const ExperimentConfig& cfg,
                              const RunContext& ctx) {
  detail::Stopwatch clock;
  RunReport rep;
  rep.echo = cfg.echo;
  detail::warn_sum_residual(cfg.coeffs, rep);
  const ModelCoeffs& m = cfg.coeffs;
  Json j;
  j["quadruple"] = detail::coeffs_json(m);
  j["derived"] = detail::derived_json(m);
  j["linear_case"] = to_string(classify_linear(m));
  j["wellposed_case"] = to_string(classify_wellposed(m));
  j["nft"] = {{"label", to_string(classify_nft(m))},
              {"witness", nft_witness(m)}};
  if (auto bound = cc_speed_bound(m)) j["cc_speed_bound"] = *bound;
  if (cfg.wave.request.c_s || cfg.wave.request.c_s_offset) {
    const double cs = cfg.wave.request.resolved_speed(cfg.sound_speed);
    const NftInfo info = classify_nft(m, cs);
    Json at;
    at["c_s"] = cs;
    at["D"] = info.D;
    at["degenerate"] = info.d_degenerate;
    if (!info.d_degenerate) {
      at["A"] = info.A;
      at["B"] = info.B;
      at["region"] = info.region;
      if (!info.curve.empty()) at["curve"] = info.curve;
    }
    Json roots = Json::array();
    for (const auto& r : characteristic_roots(m, cs))
      roots.push_back({{"re", r.real()}, {"im", r.imag()}});
    at["characteristic_roots"] = roots;
    j["at_speed"] = at;
  }
  std::ofstream out(detail::artifact(rep, ctx, "classification.json"));
  out << j.dump(2) << "\n";
  rep.summary = j;
  rep.wall_ms = clock.ms();
  detail::write_run_json(rep, ctx);
  return rep;
}

// ------------------------------------------------------------------- dispersion
inline RunReport run_dispersion(const ExperimentConfig& cfg,
                                const RunContext& ctx) {
  detail::Stopwatch clock;
  RunReport rep;
  rep.echo = cfg.echo;
  detail::warn_sum_residual(cfg.coeffs, rep);
  const DispersionProfile p = dispersion_profile(cfg.coeffs);
  const Grid g(cfg.grid.L, cfg.grid.N);
  const double cs = (cfg.wave.request.c_s || cfg.wave.request.c_s_offset)
                        ? cfg.wave.request.resolved_speed(cfg.sound_speed)
                        : cfg.sound_speed;
  std::vector<RealField> cols(7);
  for (int j = 0; j <= g.size() / 2; ++j) {
    const double k = g.khat(j), x = k * k;
    cols[0].push_back(k);
    cols[1].push_back(x);
    cols[2].push_back(p.phi(x));
    cols[3].push_back(p.P(x));
    cols[4].push_back(p.dphi(x));
    cols[5].push_back(p.phase_speed(cs, k, +1));
    cols[6].push_back(p.group_speed(cs, k, +1));
  }
  write_csv(detail::artifact(rep, ctx, "dispersion.csv"),
            {"khat", "x", "phi", "P", "dphi", "phase_speed", "group_speed"},
            cols);
  Json j;
  j["p1"] = p.p1;
  j["p2"] = p.p2;
  j["p3"] = p.p3;
  j["cgd"] = p.cgd;
  j["c_s"] = cs;
  j["unbounded"] = p.unbounded;
  if (p.phi_infty) j["phi_infty"] = *p.phi_infty;
  if (p.x_star) {
    j["x_star"] = *p.x_star;
    j["phi_star"] = p.phi(*p.x_star);
  }
  std::ofstream out(detail::artifact(rep, ctx, "dispersion.json"));
  out << j.dump(2) << "\n";
  rep.summary = j;
  rep.wall_ms = clock.ms();
  detail::write_run_json(rep, ctx);
  return rep;
}

// ------------------------------------------------------------------------ exact
inline RunReport run_exact(const ExperimentConfig& cfg, const RunContext& ctx) {
  detail::Stopwatch clock;
  RunReport rep;
  rep.echo = cfg.echo;
  detail::warn_sum_residual(cfg.coeffs, rep);
  ExactSech2 w;
  try {
    w = exact_sech2(cfg.coeffs, cfg.wave.request.direction);
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("no closed-form wave: ") + e.what());
  }
  const Grid g(cfg.grid.L, cfg.grid.N);
  auto s = sample_exact(g, w, cfg.wave.request.center);
  if (s.wrap_warning)
    rep.warnings.push_back("wave tail is not negligible at the periodic boundary");
  write_profile_csv(detail::artifact(rep, ctx, "profile.csv"), g, s.zeta,
                    s.v_beta, s.u);
  const double res = detail::operator_residual(g, cfg.coeffs, w.c_s, s.zeta,
                                               s.v_beta);
  Json j;
  j["quadruple"] = detail::coeffs_json(cfg.coeffs);
  j["c_s"] = w.c_s;
  j["B"] = w.B;
  j["mu1"] = w.mu1;
  j["mu2"] = w.mu2;
  j["amplitude"] = w.amplitude();
  j["decay_rate"] = w.decay_rate();
  j["residual"] = res;
  j["wave_type"] = "CSW";
  std::ofstream out(detail::artifact(rep, ctx, "exact.json"));
  out << j.dump(2) << "\n";
  rep.summary = j;
  rep.wall_ms = clock.ms();
  detail::write_run_json(rep, ctx);
  return rep;
}

// --------------------------------------------------------------------- solitary
inline RunReport run_solitary(const ExperimentConfig& cfg,
                              const RunContext& ctx) {
  detail::Stopwatch clock;
  RunReport rep;
  rep.echo = cfg.echo;
  detail::warn_sum_residual(cfg.coeffs, rep);
  const ModelCoeffs& m = cfg.coeffs;
  const Grid g(cfg.grid.L, cfg.grid.N);
  const WaveRequest& req = cfg.wave.request;
  const double cs = req.resolved_speed(cfg.sound_speed);

  WaveGuess guess;
  if (req.source == "exact") {
    ExactSech2 w;
    try {
      w = exact_sech2(m, req.direction);
    } catch (const std::domain_error& e) {
      throw ConfigError(std::string("no closed-form seed: ") + e.what());
    }
    auto s = sample_exact(g, w, req.guess.x0);
    guess.zeta = std::move(s.zeta);
    guess.v_beta = std::move(s.v_beta);
  } else if (req.source == "profile") {
    ProfileData p = load_profile_csv(*req.profile);
    if (static_cast<int>(p.x.size()) != g.size())
      throw ConfigError("seed profile does not match the configured grid");
    guess.zeta = std::move(p.zeta);
    guess.v_beta = std::move(p.v_beta);
  } else {
    guess = sech2_guess(g, m, cs, req.guess.amplitude, req.guess.rate,
                        req.guess.x0);
  }

  PetviashviliOptions opt;
  opt.max_iters = cfg.wave.solver.max_iters;
  opt.tolerance = cfg.wave.solver.tolerance;
  opt.mpe_cycle_width = cfg.wave.solver.mpe_cycle_width;
  opt.exponent = cfg.wave.solver.exponent;
  opt.project_toland = cfg.wave.solver.project_toland;

  const auto write_wave = [&](const SolitaryWave& sw, bool converged) {
    RealField z = sw.zeta, v = sw.v_beta, u = sw.u;
    if (req.center != 0.0) {
      detail::shift_fields(g, z, v, req.center);
      u = g.from_spectral(g.shift(g.to_spectral(u), req.center));
    }
    write_profile_csv(detail::artifact(rep, ctx, "profile.csv"), g, z, v, u);

    std::vector<RealField> hist(3);
    for (std::size_t i = 0; i < sw.residual_history.size(); ++i) {
      hist[0].push_back(static_cast<double>(i + 1));
      hist[1].push_back(sw.residual_history[i]);
      hist[2].push_back(i < sw.mh_history.size() ? sw.mh_history[i] : 0.0);
    }
    write_csv(detail::artifact(rep, ctx, "residuals.csv"),
              {"iteration", "residual", "mh"}, hist);

    const auto dz = g.from_spectral(g.diff(g.to_spectral(z)));
    const auto dv = g.from_spectral(g.diff(g.to_spectral(v)));
    const auto du = g.from_spectral(g.diff(g.to_spectral(u)));
    RealField xs(g.size());
    for (int j = 0; j < g.size(); ++j) xs[j] = g.node(j);
    write_csv(detail::artifact(rep, ctx, "phase.csv"),
              {"x", "zeta", "dzeta", "v_beta", "dv_beta", "u", "du"},
              {xs, z, dz, v, dv, u, du});

    Json j;
    j["quadruple"] = detail::coeffs_json(m);
    j["c_s"] = cs;
    j["residual"] =
        sw.residual_history.empty() ? 0.0 : sw.residual_history.back();
    j["wave_type"] = to_string(sw.wave_type);
    j["amplitude"] = sw.amplitude;
    j["iterations"] = sw.iterations;
    j["converged"] = converged;
    j["boundary_clean"] = sw.boundary_clean;
    j["nft_label"] = to_string(classify_nft(m));
    std::ofstream out(detail::artifact(rep, ctx, "solitary.json"));
    out << j.dump(2) << "\n";
    rep.summary = j;
    if (!sw.boundary_clean)
      rep.warnings.push_back("wave tail is not negligible at the periodic boundary");
    rep.steps = sw.iterations;
  };

  try {
    SolitaryWave sw = petviashvili_solve(g, m, cs, guess, opt);
    write_wave(sw, true);
  } catch (const SolverError& e) {
    // keep the history and the best iterate on disk, then propagate
    write_wave(e.best_iterate, false);
    rep.warnings.push_back(std::string("solver stopped early: ") + e.what());
    rep.wall_ms = clock.ms();
    detail::write_run_json(rep, ctx);
    throw;
  }
  rep.wall_ms = clock.ms();
  detail::write_run_json(rep, ctx);
  return rep;
}

// --------------------------------------------- evolve / perturb / collide / resolve
inline RunReport run_evolve_family(const ExperimentConfig& cfg,
                                   const RunContext& ctx) {
  detail::Stopwatch clock;
  RunReport rep;
  rep.echo = cfg.echo;
  detail::warn_sum_residual(cfg.coeffs, rep);
  const ModelCoeffs& m = cfg.coeffs;
  const std::string& kind = cfg.experiment;
  if (!(cfg.stepper.dt > 0.0))
    throw ConfigError("stepper.dt must be positive for " + kind);
  if (!(cfg.stepper.T > 0.0))
    throw ConfigError("stepper.T must be positive for " + kind);
  const Grid g(cfg.grid.L, cfg.grid.N);

  // ----- initial data -----
  RealField zeta(g.size(), 0.0), v(g.size(), 0.0);
  std::optional<double> reference_speed;
  Json waves = Json::array();
  if (kind == "resolve") {
    if (!cfg.gaussian)
      throw ConfigError("resolve requires a gaussian block");
    const double A = cfg.gaussian->amplitude, tau = cfg.gaussian->tau;
    zeta = g.sample([&](double x) { return A * std::exp(-tau * x * x); });
    v = zeta;  // the evolved velocity starts equal to the elevation
    waves.push_back({{"source", "gaussian"}, {"amplitude", A}, {"tau", tau}});
  } else {
    std::vector<WaveRequest> reqs = cfg.superpose;
    if (reqs.empty()) reqs.push_back(cfg.wave.request);
    if (kind == "collide" && reqs.size() < 2)
      throw ConfigError("collide requires a superpose list with >= 2 waves");
    for (const auto& r : reqs) {
      auto w = detail::build_wave(g, m, r, cfg.wave.solver, cfg.sound_speed, rep);
      for (int j = 0; j < g.size(); ++j) {
        zeta[j] += w.zeta[j];
        v[j] += w.v_beta[j];
      }
      if (!reference_speed) reference_speed = w.c_s;
      waves.push_back({{"source", r.source},
                       {"c_s", w.c_s},
                       {"center", r.center},
                       {"wave_type", w.wave_type},
                       {"residual", w.residual}});
    }
    if (kind == "perturb") {
      if (!cfg.perturb) throw ConfigError("perturb requires a perturb block");
      const double A = cfg.perturb->factor;
      for (int j = 0; j < g.size(); ++j) {
        zeta[j] *= A;
        v[j] *= A;
      }
    }
  }

  WaveState s;
  s.t = 0.0;
  s.zeta_hat = g.to_spectral(zeta);
  s.v_hat = g.to_spectral(v);

  StepperConfig sc;
  sc.dt = cfg.stepper.dt;
  sc.fp_tolerance = cfg.stepper.fp_tolerance;
  sc.fp_max_iters = cfg.stepper.fp_max_iters;
  sc.cfl_alpha = cfg.stepper.cfl_alpha;
  sc.observer_stride = cfg.stepper.observer_stride;

  // ----- observers -----
  double amp0 = 0.0;
  for (double z : zeta)
    if (std::abs(z) > std::abs(amp0)) amp0 = z;
  const int polarity = amp0 < 0.0 ? -1 : +1;
  const bool two_peaks = kind == "collide";
  if (kind == "resolve") reference_speed.reset();
  PeakTracker tracker(g, polarity, reference_speed);
  const Invariants inv0 = invariants(g, m, s.zeta_hat, s.v_hat);
  const double l2z0 = g.l2_norm(s.zeta_hat);

  std::vector<RealField> inv_rows(6);
  std::vector<RealField> peak_rows(two_peaks ? 5 : 6);
  int observations = 0, snapshots = 0;
  const Evolver evolver(g, m);
  const auto observe = [&](const WaveState& st, int) {
    const Invariants iv = invariants(g, m, st.zeta_hat, st.v_hat);
    inv_rows[0].push_back(st.t);
    inv_rows[1].push_back(iv.I);
    inv_rows[2].push_back(iv.E);
    inv_rows[3].push_back(inv0.I != 0.0 ? (iv.I - inv0.I) / inv0.I : iv.I);
    inv_rows[4].push_back(inv0.E != 0.0 ? (iv.E - inv0.E) / inv0.E : iv.E);
    inv_rows[5].push_back(g.l2_norm(st.zeta_hat));
    const RealField z = g.from_spectral(st.zeta_hat);
    if (two_peaks) {
      const auto ps = find_peaks(g, z, polarity, 2, g.size() / 16);
      peak_rows[0].push_back(st.t);
      peak_rows[1].push_back(ps.empty() ? 0.0 : ps[0].location);
      peak_rows[2].push_back(ps.empty() ? 0.0 : ps[0].amplitude);
      peak_rows[3].push_back(ps.size() < 2 ? 0.0 : ps[1].location);
      peak_rows[4].push_back(ps.size() < 2 ? 0.0 : ps[1].amplitude);
    } else {
      const PeakSample p = tracker.update(st.t, z);
      peak_rows[0].push_back(p.t);
      peak_rows[1].push_back(p.location);
      peak_rows[2].push_back(p.amplitude);
      peak_rows[3].push_back(p.speed);
      peak_rows[4].push_back(p.phase_error);
      peak_rows[5].push_back(p.multi_peak ? 1.0 : 0.0);
    }
    if (cfg.output.stride > 0 && observations % cfg.output.stride == 0) {
      char name[32];
      std::snprintf(name, sizeof name, "snapshot_%04d.csv", snapshots++);
      const RealField vb = g.from_spectral(st.v_hat);
      write_profile_csv(detail::artifact(rep, ctx, name), g, z, vb,
                        detail::velocity_output(g, m, st.v_hat));
    }
    ++observations;
  };

  const auto flush = [&](const WaveState& st) {
    write_csv(detail::artifact(rep, ctx, "invariants.csv"),
              {"t", "I", "E", "rel_dI", "rel_dE", "l2_zeta"}, inv_rows);
    if (two_peaks)
      write_csv(detail::artifact(rep, ctx, "peaks.csv"),
                {"t", "loc1", "amp1", "loc2", "amp2"}, peak_rows);
    else
      write_csv(detail::artifact(rep, ctx, "peaks.csv"),
                {"t", "location", "amplitude", "speed", "phase_error",
                 "multi_peak"},
                peak_rows);
    if (cfg.output.final_state) {
      const RealField z = g.from_spectral(st.zeta_hat);
      const RealField vb = g.from_spectral(st.v_hat);
      write_profile_csv(detail::artifact(rep, ctx, "final_state.csv"), g, z, vb,
                        detail::velocity_output(g, m, st.v_hat));
    }
  };

  RunInfo info;
  try {
    info = evolver.run(s, cfg.stepper.T, sc, observe);
  } catch (const BlowUpError&) {
    flush(s);
    rep.wall_ms = clock.ms();
    detail::write_run_json(rep, ctx);
    throw;
  } catch (const FixedPointError&) {
    flush(s);
    rep.wall_ms = clock.ms();
    detail::write_run_json(rep, ctx);
    throw;
  }
  flush(s);

  if (info.cfl_exceeded)
    rep.warnings.push_back("advisory stability product " +
                           format_value(info.cfl_product) +
                           " exceeds the configured bound");
  if (info.dt_adjusted)
    rep.warnings.push_back("dt adjusted to " + format_value(info.dt_used) +
                           " to divide the horizon evenly");

  Json sum;
  sum["kind"] = kind;
  sum["waves"] = waves;
  sum["steps"] = info.steps;
  sum["dt_used"] = info.dt_used;
  sum["final_t"] = s.t;
  sum["I0"] = inv0.I;
  sum["E0"] = inv0.E;
  sum["rel_dI"] = inv_rows[3].back();
  sum["rel_dE"] = inv_rows[4].back();
  sum["l2_zeta_initial"] = l2z0;
  sum["l2_zeta_final"] = inv_rows[5].back();
  sum["l2_zeta_rel_drift"] = (inv_rows[5].back() - l2z0) / l2z0;
  if (two_peaks) {
    sum["peak1"] = {{"location", peak_rows[1].back()},
                    {"amplitude", peak_rows[2].back()}};
    sum["peak2"] = {{"location", peak_rows[3].back()},
                    {"amplitude", peak_rows[4].back()}};
  } else {
    sum["peak"] = {{"location", peak_rows[1].back()},
                   {"amplitude", peak_rows[2].back()},
                   {"speed", peak_rows[3].back()},
                   {"phase_error", peak_rows[4].back()}};
  }
  sum["cfl_product"] = info.cfl_product;
  rep.summary = sum;
  rep.steps = info.steps;
  rep.wall_ms = clock.ms();
  detail::write_run_json(rep, ctx);
  return rep;
}

// ------------------------------------------------------------------ convergence
inline RunReport run_convergence(const ExperimentConfig& cfg,
                                 const RunContext& ctx) {
  detail::Stopwatch clock;
  RunReport rep;
  rep.echo = cfg.echo;
  detail::warn_sum_residual(cfg.coeffs, rep);
  const ModelCoeffs& m = cfg.coeffs;
  if (cfg.convergence.dts.empty())
    throw ConfigError("convergence requires a non-empty dts list");
  if (!(cfg.stepper.T > 0.0))
    throw ConfigError("stepper.T must be positive for convergence");
  ExactSech2 w;
  try {
    w = exact_sech2(m, +1);
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("no closed-form wave: ") + e.what());
  }
  const double T = cfg.convergence.ci ? std::min(cfg.stepper.T, 10.0)
                                      : cfg.stepper.T;
  std::vector<int> Ns = cfg.convergence.Ns;
  if (Ns.empty()) Ns.push_back(cfg.grid.N);

  struct Cell {
    int N;
    double dt;
    double err_zeta, err_v;
  };
  std::vector<Cell> cells;
  for (int N : Ns)
    for (double dt : cfg.convergence.dts) cells.push_back({N, dt, 0.0, 0.0});

  const auto run_cell = [&](Cell& cell) {
    const Grid g(cfg.grid.L, cell.N);
    auto s0 = sample_exact(g, w);
    WaveState s;
    s.t = 0.0;
    s.zeta_hat = g.to_spectral(s0.zeta);
    s.v_hat = g.to_spectral(s0.v_beta);
    StepperConfig sc;
    sc.dt = cell.dt;
    sc.fp_tolerance = cfg.stepper.fp_tolerance;
    sc.fp_max_iters = cfg.stepper.fp_max_iters;
    const Evolver ev(g, m);
    ev.run(s, T, sc, [](const WaveState&, int) {});
    const auto z_ref =
        g.from_spectral(g.shift(g.to_spectral(s0.zeta), w.c_s * s.t));
    const auto v_ref =
        g.from_spectral(g.shift(g.to_spectral(s0.v_beta), w.c_s * s.t));
    cell.err_zeta = error_vs_exact(g, g.from_spectral(s.zeta_hat), z_ref);
    cell.err_v = error_vs_exact(g, g.from_spectral(s.v_hat), v_ref);
  };

  const int jobs = std::max(1, ctx.jobs);
  if (jobs == 1 || cells.size() == 1) {
    for (auto& cell : cells) run_cell(cell);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int nw = std::min<std::size_t>(jobs, cells.size());
    pool.reserve(nw);
    for (int t = 0; t < nw; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++)
          run_cell(cells[i]);
      });
    for (auto& th : pool) th.join();
  }

  // rates along dt within each N block
  std::vector<RealField> cols(6);
  Json rows = Json::array();
  for (int N : Ns) {
    std::vector<ConvergenceRow> block;
    for (const auto& cell : cells)
      if (cell.N == N)
        block.push_back({cell.dt, cell.err_zeta, cell.err_v, 0.0, 0.0});
    fill_rates(block);
    for (const auto& r : block) {
      cols[0].push_back(static_cast<double>(N));
      cols[1].push_back(r.dt);
      cols[2].push_back(r.err_zeta);
      cols[3].push_back(r.rate_zeta);
      cols[4].push_back(r.err_v);
      cols[5].push_back(r.rate_v);
      rows.push_back({{"N", N},
                      {"dt", r.dt},
                      {"err_zeta", r.err_zeta},
                      {"rate_zeta", r.rate_zeta},
                      {"err_v", r.err_v},
                      {"rate_v", r.rate_v}});
    }
  }
  write_csv(detail::artifact(rep, ctx, "table.csv"),
            {"N", "dt", "err_zeta", "rate_zeta", "err_v", "rate_v"}, cols);
  rep.summary = {{"T", T}, {"c_s", w.c_s}, {"rows", rows}};
  rep.wall_ms = clock.ms();
  detail::write_run_json(rep, ctx);
  return rep;
}

// ------------------------------------------------------------------- dispatcher
inline RunReport run_experiment(const ExperimentConfig& cfg,
                                const RunContext& ctx) {
  std::filesystem::create_directories(ctx.outdir);
  const std::string& k = cfg.experiment;
  if (k == "derive-params") return run_derive_params(cfg, ctx);
  if (k == "classify") return run_classify(cfg, ctx);
  if (k == "dispersion") return run_dispersion(cfg, ctx);
  if (k == "exact") return run_exact(cfg, ctx);
  if (k == "solitary") return run_solitary(cfg, ctx);
  if (k == "evolve" || k == "perturb" || k == "collide" || k == "resolve")
    return run_evolve_family(cfg, ctx);
  if (k == "convergence") return run_convergence(cfg, ctx);
  throw ConfigError("config does not name an experiment kind");
}

}  // namespace bblab
