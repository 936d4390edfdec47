// Generated by tools/make_expected_values.py -- do not edit by hand.
// Reference constants for the test suite, recomputed independently
// with 40-digit arithmetic from the closed-form relations.
#pragma once

namespace bblab::expected {

// --- family scales at gamma=1/2, delta=9/10
inline constexpr double kGamma = 0.50000000000000000;
inline constexpr double kDelta = 0.90000000000000000;
inline constexpr double kKappa1 = 0.71428571428571429;
inline constexpr double kKappa2 = 0.50000000000000000;
inline constexpr double kKappaGd = 0.15816326530612245;
inline constexpr double kCgd = 0.59761430466719682;
inline constexpr double kCoeffSum = 0.38359788359788360;  // required (delta+gamma)a+b+c+d

// --- family scales at gamma=delta=1/2
inline constexpr double kKappa1Eq = 1.0000000000000000;
inline constexpr double kKappaGdEq = -0.25000000000000000;  // negative: depression-wave regime
inline constexpr double kCgdEq = 0.70710678118654752;
inline constexpr double kCoeffSumEq = 0.83333333333333333;

// --- validation benchmark: a=-1/3, c=-2/3, b=d=0.758466, gamma=1/2, delta=9/10
inline constexpr double kBmA = -0.33333333333333333;
inline constexpr double kBmC = -0.66666666666666667;
inline constexpr double kBmBD = 0.75846600000000000;
inline constexpr double kBmBeta = 0.091799333333333333;  // default beta = c+d
inline constexpr double kBmB = 0.66365387388926282;  // layer-velocity scale factor u = B(zeta - beta zeta_xx)
inline constexpr double kBmB2 = 0.44043646432822556;
inline constexpr double kBmSpeed = 1.0327710760778367;
inline constexpr double kBmMu1 = 2.6615017467974209;
inline constexpr double kBmAmplitude = 7.9845052403922628;  // crest height 3*mu1
inline constexpr double kBmMu2 = 2.6775603043165602;
inline constexpr double kBmHalfWidth = 0.49849838044716979;  // decay rate of sech^2 argument
inline constexpr double kBmSumRuleResidual = 7.8306878306878307e-7;  // rounded 6-digit literal leaves ~8e-7
inline constexpr double kBmCcBound = 0.21974177704296128;  // constrained-minimization speed window half-length
inline constexpr double kBmDecayMinus = 0.99699676089433959;
inline constexpr double kBmDecayPlus = 1.1918293411654345;

// --- fixture quadruples: the coefficient left free is fixed by the sum rule
inline constexpr double kA1a = -0.20219198790627362;  // b=0, c=-1/3, d=1
inline constexpr double kA2d = 1.4058201058201058;  // a=-1/3, b=1/9, c=-2/3
inline constexpr double kA3d = 1.1835978835978836;  // a=-1/3, b=1/3, c=-2/3 (reference elevation wave)
inline constexpr double kA3DepBD = 0.75846560846560847;  // b=d branch of the same a,c
inline constexpr double kA4BonaSmithD = 0.16666666666666667;  // gamma=delta=1/2, a=0, b=1, c=-1/3
inline constexpr double kA4d = 0.38359788359788360;  // a=0, b=1/3, c=-1/3 (equals the sum-rule constant)
inline constexpr double kA5d = 0.98359788359788360;
inline constexpr double kA6BonaSmithD = 0.50000000000000000;  // gamma=delta=1/2, a=c=0, b=1/3
inline constexpr double kA6HamBD = 0.19179894179894180;  // a=c=0, b=d: Hamiltonian pair
inline constexpr double kDz1d = 0.85026455026455026;  // a=-1/3, b=c=0: degenerate D=0
inline constexpr double kDz2b = 1.3169312169312169;  // a=-2/3, c=d=0: degenerate D=0
inline constexpr double kNm1d = 0.70582010582010582;  // a=-1/9, b=0, c=-1/6: nonmonotone tails
inline constexpr double kNm2d = 1.0724867724867725;
inline constexpr double kPtwD = 0.21693121693121693;  // a=c=0, b=1/6: region-3 periodic case
inline constexpr double kGswA1d = 1.1835978835978836;  // a=c=-1/3, b=0: generalized-wave study

// --- second parameter set: delta = (gamma+sqrt(gamma^2+8))/2, gamma=1/2
inline constexpr double kGsw2Delta = 1.6861406616345072;
inline constexpr double kGsw2Kappa1 = 0.45742710775633811;
inline constexpr double kGsw2KappaGd = 0.49026300251607975;
inline constexpr double kGsw2Cgd = 0.47824005883883154;
inline constexpr double kGsw2CoeffSum = 0.16666666666666667;  // equals 1/6 by construction
inline constexpr double kGsw2a = -0.50825234195148679;  // b=1/9, c=-1/6, d=4/3
inline constexpr double kGsw2Witness = -0.037037037037037037;  // bd - ac/kappa1; negative selects the oscillatory-tail class

// --- dispersion profile, reference elevation quadruple
inline constexpr double kDispPhiInfty = 0.88800681411924833;  // limit of phi at infinity
inline constexpr double kDispXstar = 8.5397643558497040;  // interior minimum of phi
inline constexpr double kDispPhiMin = 0.88370958033784562;

// --- characteristic-rate quartic for the reference wave at speed c_gd + 1/2
inline constexpr double kChar52Speed = 1.0976143046671968;
inline constexpr double kChar52D0 = 0.84761430466719682;
inline constexpr double kChar52D1 = 1.4227718428092194;
inline constexpr double kChar52D2 = 0.36420489787814651;
inline constexpr double kChar52A = 2.3273006749919836;  // constant term of r^4 - B r^2 + A
inline constexpr double kChar52B = 3.9065148522116852;
inline constexpr double kChar52DecayMinus = 0.85642084552576850;
inline constexpr double kChar52DecayPlus = 1.7813079990727637;

// --- Toland construction: a=c=0, b=d = half the sum-rule constant
inline constexpr double kTolSpeed = 1.0976143046671968;
inline constexpr double kTolBD = 0.19179894179894180;
inline constexpr double kTolP1x = 4.8825072472753329;
inline constexpr double kTolP1y = 10.718219594501328;
inline constexpr double kTolP2x = 6.3225806451612903;
inline constexpr double kTolP2y = 7.5569292719206824;
inline constexpr double kTolDecay = 1.5411219980481985;  // a=c=0 closed-form decay rate
// Converged discrete solitary wave of this member (grid-independent to 14
// digits across (L,N) = (64,2048) and (96,4096); identical with and without
// the crest projection, whose correction vanishes at any true wave).
inline constexpr double kTolAmp = 9.9252505074947592;
inline constexpr double kTolVmax = 5.8577056759719923;
inline constexpr double kTolUmax = 6.9934682941446180;

// --- regression literals: iteratively generated / time-integration references
inline constexpr double kRefErrZeta40 = 1.1028000000000000e-5;  // surface-error at dt=1/40, N=2048, T=100
inline constexpr double kRefErrZeta80 = 6.8977000000000000e-7;
inline constexpr double kRefErrZeta160 = 4.3076000000000000e-8;
inline constexpr double kRefErrV40 = 7.3309000000000000e-6;
inline constexpr double kRefErrV80 = 4.5852000000000000e-7;
inline constexpr double kRefErrV160 = 2.8635000000000000e-8;
inline constexpr double kRefDriftI = 1.0198000000000000e-10;  // relative invariant drifts at dt=1/160
inline constexpr double kRefDriftE = 5.1366000000000000e-9;
inline constexpr double kRefGsw2Amp = 0.045728000000000000;  // second-parameter-set generalized wave
inline constexpr double kRefGsw2Speed = 0.48824000000000000;
inline constexpr double kRefTwoPulseAmp = 1.6055000000000000;  // cleaned two-pulse rerun amplitude
inline constexpr double kRefTwoPulseSpeed = 0.69761000000000000;
inline constexpr double kRefGswA1Amp = 0.15764000000000000;  // b=0 generalized wave amplitude
inline constexpr double kRefGswA1Norm = 0.45789161770712560;  // discrete L2 norm held by that wave
inline constexpr double kRefResolveAmp = 4.1790000000000000;  // leading wave resolved from a Gaussian
inline constexpr double kRefResolveSpeed = 0.81779000000000000;
inline constexpr double kRefNmExcursion = -2.8740000000000000;  // nonmonotone-wave main trough
inline constexpr double kRefNm2Excursion = -3.1614000000000000;  // perturbed (1.1x) trough at start
inline constexpr double kRefNm2Emerged = -3.1376000000000000;  // trough of the re-emerged wave
inline constexpr double kRefNm2Speed = 0.38320000000000000;

}  // namespace bblab::expected
