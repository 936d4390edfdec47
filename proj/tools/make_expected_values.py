#!/usr/bin/env python3
"""Generate tests/expected_values.hpp.

Recomputes, with 40-digit arithmetic, every closed-form quantity the C++ test
suite checks against: coefficient-family constants, solitary-wave speed and
amplitude formulas, Toland phase-plane points, dispersion extrema, and the
characteristic decay rates.  Values that cannot be obtained in closed form
(iteratively generated waves, time-integration errors) are carried as fixed
regression literals in REGRESSION below.

Run from the repository root:  python3 tools/make_expected_values.py
"""

from mpmath import mp, mpf, sqrt

mp.dps = 40

OUT = "tests/expected_values.hpp"


def kappa1(gamma, delta):
    return 1 / (delta + gamma)


def kappa2(gamma):
    return 1 - gamma


def kappa_gd(gamma, delta):
    return (delta * delta - gamma) / (delta + gamma) ** 2


def c_gd(gamma, delta):
    return sqrt(kappa1(gamma, delta) * kappa2(gamma))


def coeff_sum(gamma, delta):
    # required value of (delta+gamma)*a + b + c + d
    return (1 + gamma * delta) / (3 * delta * (gamma + delta))


def solve_d(gamma, delta, a, b, c):
    return coeff_sum(gamma, delta) - (delta + gamma) * a - b - c


def solve_a(gamma, delta, b, c, d):
    return (coeff_sum(gamma, delta) - b - c - d) / (delta + gamma)


def solve_b(gamma, delta, a, c, d):
    return coeff_sum(gamma, delta) - (delta + gamma) * a - c - d


def sech2_exact(gamma, delta, a, b, c, d):
    """Closed-form sech^2 branch: returns (B, c_s, mu1, mu2)."""
    k1 = kappa1(gamma, delta)
    k2 = kappa2(gamma)
    lam = kappa_gd(gamma, delta)
    den = k1 * (b - 2 * d) - a
    B2 = 2 * k2 * (b - 2 * d - c) / den
    B = sqrt(B2)
    cs = (2 * k2 * (c * k1 - a) / den) / B
    mu1 = (k2 - k1 * B2) / (lam * B2)
    mu2 = ((a - b * k1) * B2 + 2 * b * k2) / (2 * lam * B2)
    return B, cs, mu1, mu2


def toland_points(gamma, delta, cs):
    """P1 (tangency of {f=0} with the u2-axis image) and P2 (symmetric point)."""
    k1 = kappa1(gamma, delta)
    k2 = kappa2(gamma)
    lam = kappa_gd(gamma, delta)
    cgd = c_gd(gamma, delta)
    p1x = (cs * cs - cgd * cgd) / (cs * lam)
    p1y = cs * p1x / k2
    p2x = 2 * (cs - cgd) / lam
    p2y = sqrt(k1 / k2) * p2x
    return p1x, p1y, p2x, p2y


def delta_poly(gamma, delta, a, b, c, d, cs):
    cgd2 = kappa1(gamma, delta) * kappa2(gamma)
    d0 = cs * cs - cgd2
    d1 = cs * cs * (b + d) + cgd2 * (c + a * (delta + gamma))
    d2 = b * d * cs * cs - (1 - gamma) * a * c
    return d0, d1, d2


def char_rates(gamma, delta, a, b, c, d, cs):
    d0, d1, d2 = delta_poly(gamma, delta, a, b, c, d, cs)
    disc = sqrt(d1 * d1 - 4 * d0 * d2)
    rp = sqrt((d1 + disc) / (2 * d2))
    rm = sqrt((d1 - disc) / (2 * d2))
    return rm, rp


def dispersion_extremum(gamma, delta, a, b, c, d):
    """Interior critical point x* of phi and phi(x*); at = a/kappa1."""
    k1 = kappa1(gamma, delta)
    at = a / k1
    p1 = at * c * (b + d) + b * d * (at + c)
    p2 = 2 * (at * c - b * d)
    p3 = coeff_sum(gamma, delta)
    if p1 == 0:
        xs = p3 / p2
    else:
        xs = (-p2 + sqrt(p2 * p2 + 4 * p1 * p3)) / (2 * p1)
    phi = sqrt((1 - at * xs) * (1 - c * xs) / ((1 + b * xs) * (1 + d * xs)))
    return xs, phi


entries = []       # (name, mpf value, comment or None)
sections = []      # (header comment, start index)


def sec(title):
    sections.append((title, len(entries)))


def put(name, value, comment=None):
    entries.append((name, mpf(value), comment))


# ---------------------------------------------------------------- base scales
g09, d09 = mpf("0.5"), mpf("0.9")
g05, d05 = mpf("0.5"), mpf("0.5")

sec("family scales at gamma=1/2, delta=9/10")
put("kGamma", g09)
put("kDelta", d09)
put("kKappa1", kappa1(g09, d09))
put("kKappa2", kappa2(g09))
put("kKappaGd", kappa_gd(g09, d09))
put("kCgd", c_gd(g09, d09))
put("kCoeffSum", coeff_sum(g09, d09), "required (delta+gamma)a+b+c+d")

sec("family scales at gamma=delta=1/2")
put("kKappa1Eq", kappa1(g05, d05))
put("kKappaGdEq", kappa_gd(g05, d05), "negative: depression-wave regime")
put("kCgdEq", c_gd(g05, d05))
put("kCoeffSumEq", coeff_sum(g05, d05))

# --------------------------------------------------- validation benchmark set
sec("validation benchmark: a=-1/3, c=-2/3, b=d=0.758466, gamma=1/2, delta=9/10")
a_bm, c_bm = mpf(-1) / 3, mpf(-2) / 3
bd_bm = mpf("0.758466")
B_bm, cs_bm, mu1_bm, mu2_bm = sech2_exact(g09, d09, a_bm, bd_bm, c_bm, bd_bm)
put("kBmA", a_bm)
put("kBmC", c_bm)
put("kBmBD", bd_bm)
put("kBmBeta", c_bm + bd_bm, "default beta = c+d")
put("kBmB", B_bm, "layer-velocity scale factor u = B(zeta - beta zeta_xx)")
put("kBmB2", B_bm * B_bm)
put("kBmSpeed", cs_bm)
put("kBmMu1", mu1_bm)
put("kBmAmplitude", 3 * mu1_bm, "crest height 3*mu1")
put("kBmMu2", mu2_bm)
put("kBmHalfWidth", sqrt(mu1_bm / mu2_bm) / 2, "decay rate of sech^2 argument")
put("kBmSumRuleResidual",
    (d09 + g09) * a_bm + 2 * bd_bm + c_bm - coeff_sum(g09, d09),
    "rounded 6-digit literal leaves ~8e-7")
put("kBmCcBound", min(kappa2(g09) * abs(c_bm) / bd_bm, abs(a_bm) / (2 * bd_bm)),
    "constrained-minimization speed window half-length")
rm_bm, rp_bm = char_rates(g09, d09, a_bm, bd_bm, c_bm, bd_bm, cs_bm)
put("kBmDecayMinus", rm_bm)
put("kBmDecayPlus", rp_bm)

# -------------------------------------------------------------- fixture table
sec("fixture quadruples: the coefficient left free is fixed by the sum rule")
put("kA1a", solve_a(g09, d09, mpf(0), mpf(-1) / 3, mpf(1)),
    "b=0, c=-1/3, d=1")
put("kA2d", solve_d(g09, d09, mpf(-1) / 3, mpf(1) / 9, mpf(-2) / 3),
    "a=-1/3, b=1/9, c=-2/3")
put("kA3d", solve_d(g09, d09, mpf(-1) / 3, mpf(1) / 3, mpf(-2) / 3),
    "a=-1/3, b=1/3, c=-2/3 (reference elevation wave)")
put("kA3DepBD", (coeff_sum(g09, d09) - (d09 + g09) * (mpf(-1) / 3) - mpf(-2) / 3) / 2,
    "b=d branch of the same a,c")
put("kA4BonaSmithD", solve_d(g05, d05, mpf(0), mpf(1), mpf(-1) / 3),
    "gamma=delta=1/2, a=0, b=1, c=-1/3")
put("kA4d", solve_d(g09, d09, mpf(0), mpf(1) / 3, mpf(-1) / 3),
    "a=0, b=1/3, c=-1/3 (equals the sum-rule constant)")
put("kA5d", solve_d(g09, d09, mpf(-2) / 3, mpf(1) / 3, mpf(0)))
put("kA6BonaSmithD", solve_d(g05, d05, mpf(0), mpf(1) / 3, mpf(0)),
    "gamma=delta=1/2, a=c=0, b=1/3")
put("kA6HamBD", coeff_sum(g09, d09) / 2, "a=c=0, b=d: Hamiltonian pair")
put("kDz1d", solve_d(g09, d09, mpf(-1) / 3, mpf(0), mpf(0)),
    "a=-1/3, b=c=0: degenerate D=0")
put("kDz2b", solve_b(g09, d09, mpf(-2) / 3, mpf(0), mpf(0)),
    "a=-2/3, c=d=0: degenerate D=0")
put("kNm1d", solve_d(g09, d09, mpf(-1) / 9, mpf(0), mpf(-1) / 6),
    "a=-1/9, b=0, c=-1/6: nonmonotone tails")
put("kNm2d", solve_d(g09, d09, mpf(-1) / 3, mpf(1) / 9, mpf(-1) / 3))
put("kPtwD", solve_d(g09, d09, mpf(0), mpf(1) / 6, mpf(0)),
    "a=c=0, b=1/6: region-3 periodic case")
put("kGswA1d", solve_d(g09, d09, mpf(-1) / 3, mpf(0), mpf(-1) / 3),
    "a=c=-1/3, b=0: generalized-wave study")

# ------------------------------------------------- second parameter set (GSW)
sec("second parameter set: delta = (gamma+sqrt(gamma^2+8))/2, gamma=1/2")
d53 = (g09 + sqrt(g09 * g09 + 8)) / 2
a53 = solve_a(g09, d53, mpf(1) / 9, mpf(-1) / 6, mpf(4) / 3)
put("kGsw2Delta", d53)
put("kGsw2Kappa1", kappa1(g09, d53))
put("kGsw2KappaGd", kappa_gd(g09, d53))
put("kGsw2Cgd", c_gd(g09, d53))
put("kGsw2CoeffSum", coeff_sum(g09, d53), "equals 1/6 by construction")
put("kGsw2a", a53, "b=1/9, c=-1/6, d=4/3")
put("kGsw2Witness", mpf(1) / 9 * mpf(4) / 3 - a53 * (mpf(-1) / 6) * (d53 + g09),
    "bd - ac/kappa1; negative selects the oscillatory-tail class")

# ------------------------------------------------------------------ dispersion
sec("dispersion profile, reference elevation quadruple")
a52, b52, c52 = mpf(-1) / 3, mpf(1) / 3, mpf(-2) / 3
dd52 = solve_d(g09, d09, a52, b52, c52)
xs52, phi52 = dispersion_extremum(g09, d09, a52, b52, c52, dd52)
put("kDispPhiInfty", sqrt(a52 / kappa1(g09, d09) * c52 / (b52 * dd52)),
    "limit of phi at infinity")
put("kDispXstar", xs52, "interior minimum of phi")
put("kDispPhiMin", phi52)

cs52 = c_gd(g09, d09) + mpf("0.5")
d0, d1, d2 = delta_poly(g09, d09, a52, b52, c52, dd52, cs52)
rm52, rp52 = char_rates(g09, d09, a52, b52, c52, dd52, cs52)
sec("characteristic-rate quartic for the reference wave at speed c_gd + 1/2")
put("kChar52Speed", cs52)
put("kChar52D0", d0)
put("kChar52D1", d1)
put("kChar52D2", d2)
put("kChar52A", d0 / d2, "constant term of r^4 - B r^2 + A")
put("kChar52B", d1 / d2)
put("kChar52DecayMinus", rm52)
put("kChar52DecayPlus", rp52)

# --------------------------------------------------------------------- Toland
sec("Toland construction: a=c=0, b=d = half the sum-rule constant")
bt = coeff_sum(g09, d09) / 2
cst = c_gd(g09, d09) + mpf("0.5")
p1x, p1y, p2x, p2y = toland_points(g09, d09, cst)
put("kTolSpeed", cst)
put("kTolBD", bt)
put("kTolP1x", p1x)
put("kTolP1y", p1y)
put("kTolP2x", p2x)
put("kTolP2y", p2y)
put("kTolDecay", sqrt((1 - c_gd(g09, d09) / cst) / bt),
    "a=c=0 closed-form decay rate")

# ---------------------------------------------------------------- regressions
sec("regression literals: iteratively generated / time-integration references")
REGRESSION = [
    ("kRefErrZeta40", "1.1028e-5", "surface-error at dt=1/40, N=2048, T=100"),
    ("kRefErrZeta80", "6.8977e-7", None),
    ("kRefErrZeta160", "4.3076e-8", None),
    ("kRefErrV40", "7.3309e-6", None),
    ("kRefErrV80", "4.5852e-7", None),
    ("kRefErrV160", "2.8635e-8", None),
    ("kRefDriftI", "1.0198e-10", "relative invariant drifts at dt=1/160"),
    ("kRefDriftE", "5.1366e-9", None),
    ("kRefTolandAmp", "9.7566", "crest height of the projected-iteration wave"),
    ("kRefGsw2Amp", "4.5728e-2", "second-parameter-set generalized wave"),
    ("kRefGsw2Speed", "4.8824e-1", None),
    ("kRefTwoPulseAmp", "1.6055", "cleaned two-pulse rerun amplitude"),
    ("kRefTwoPulseSpeed", "6.9761e-1", None),
    ("kRefGswA1Amp", "1.5764e-1", "b=0 generalized wave amplitude"),
    ("kRefGswA1Norm", "4.578916177071256e-1", "discrete L2 norm held by that wave"),
    ("kRefResolveAmp", "4.1790", "leading wave resolved from a Gaussian"),
    ("kRefResolveSpeed", "8.1779e-1", None),
    ("kRefNmExcursion", "-2.8740", "nonmonotone-wave main trough"),
    ("kRefNm2Excursion", "-3.1614", "perturbed (1.1x) trough at start"),
    ("kRefNm2Emerged", "-3.1376", "trough of the re-emerged wave"),
    ("kRefNm2Speed", "3.832e-1", None),
]
for name, val, comment in REGRESSION:
    put(name, mpf(val), comment)


def emit():
    lines = []
    lines.append("// Generated by tools/make_expected_values.py -- do not edit by hand.")
    lines.append("// Reference constants for the test suite, recomputed independently")
    lines.append("// with 40-digit arithmetic from the closed-form relations.")
    lines.append("#pragma once")
    lines.append("")
    lines.append("namespace bblab::expected {")
    sec_starts = {idx: title for title, idx in sections}
    for i, (name, value, comment) in enumerate(entries):
        if i in sec_starts:
            lines.append("")
            lines.append(f"// --- {sec_starts[i]}")
        lit = mp.nstr(value, 17, strip_zeros=False)
        if "e" not in lit and "." not in lit:
            lit += ".0"
        row = f"inline constexpr double {name} = {lit};"
        if comment:
            row += f"  // {comment}"
        lines.append(row)
    lines.append("")
    lines.append("}  // namespace bblab::expected")
    lines.append("")
    with open(OUT, "w") as f:
        f.write("\n".join(lines))
    print(f"wrote {OUT} ({len(entries)} constants)")
    for i, (name, value, _) in enumerate(entries):
        if i in sec_starts:
            print(f"\n# {sec_starts[i]}")
        print(f"  {name:24s} = {mp.nstr(value, 17)}")


if __name__ == "__main__":
    emit()
