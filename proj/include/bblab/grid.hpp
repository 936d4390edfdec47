#pragma once
// Fourier substrate on the symmetric periodic interval [-L, L).
//
// Nodes x_j = -L + j*h, h = 2L/N; stored spectra are full-length complex
// arrays in transform-natural order (index i holds wavenumber k = i for
// i < N/2, k = i - N for i >= N/2), normalized so that
//   f(x_j) = sum_k chat_k exp(i*(pi*k/L)*x_j).
// With this grid the transform basis differs from exp(i*(pi*k/L)*x) by the
// sign (-1)^k, applied explicitly both ways; products in node space therefore
// convolve these coefficients directly.  Plans use FFTW_ESTIMATE so planning
// is input-independent (bitwise-reproducible runs); creation is serialized
// because the planner is not thread-safe.

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <functional>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace bblab {

using Complex = std::complex<double>;
using RealField = std::vector<double>;
using SpectralField = std::vector<Complex>;

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

class Grid {
 public:
  Grid(double half_length, int n) : L_(half_length), N_(n), h_(2.0 * half_length / n) {
    if (!(half_length > 0.0)) throw std::domain_error("grid half-length must be positive");
    if (n < 8 || n % 2 != 0) throw std::domain_error("grid size must be even and >= 8");
    buf_.resize(N_);
    pad_.resize(2 * N_);
    pad2_.resize(2 * N_);
    pad3_.resize(2 * N_);
    nodes_.resize(N_);
    for (int j = 0; j < N_; ++j) nodes_[j] = -L_ + j * h_;
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    auto* b = cast(buf_.data());
    auto* p = cast(pad_.data());
    fwd_ = fftw_plan_dft_1d(N_, b, b, FFTW_FORWARD, flags);
    bwd_ = fftw_plan_dft_1d(N_, b, b, FFTW_BACKWARD, flags);
    fwd2_ = fftw_plan_dft_1d(2 * N_, p, p, FFTW_FORWARD, flags);
    bwd2_ = fftw_plan_dft_1d(2 * N_, p, p, FFTW_BACKWARD, flags);
    if (!fwd_ || !bwd_ || !fwd2_ || !bwd2_) throw std::runtime_error("transform planning failed");
  }

  ~Grid() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_destroy_plan(fwd2_);
    fftw_destroy_plan(bwd2_);
  }

  Grid(const Grid& o) : Grid(o.L_, o.N_) {}
  Grid& operator=(const Grid&) = delete;
  Grid(Grid&&) = delete;
  Grid& operator=(Grid&&) = delete;

  int size() const { return N_; }
  double half_length() const { return L_; }
  double spacing() const { return h_; }
  double node(int j) const { return nodes_[j]; }
  const RealField& nodes() const { return nodes_; }
  int center_index() const { return N_ / 2; }  // node at x = 0

  int wavenumber(int idx) const { return idx < N_ / 2 ? idx : idx - N_; }
  double khat(int idx) const { return std::numbers::pi * wavenumber(idx) / L_; }

  RealField sample(const std::function<double(double)>& f) const {
    RealField v(N_);
    for (int j = 0; j < N_; ++j) v[j] = f(nodes_[j]);
    return v;
  }

  SpectralField to_spectral(const RealField& values) const {
    check_size(values.size());
    for (int j = 0; j < N_; ++j) buf_[j] = Complex(values[j], 0.0);
    fftw_execute_dft(fwd_, cast(buf_.data()), cast(buf_.data()));
    SpectralField out(N_);
    const double inv = 1.0 / N_;
    for (int i = 0; i < N_; ++i) out[i] = buf_[i] * (sign(i) * inv);
    return out;
  }

  RealField from_spectral(const SpectralField& coeffs) const {
    check_size(coeffs.size());
    for (int i = 0; i < N_; ++i) buf_[i] = coeffs[i] * sign(i);
    fftw_execute_dft(bwd_, cast(buf_.data()), cast(buf_.data()));
    RealField out(N_);
    for (int j = 0; j < N_; ++j) out[j] = buf_[j].real();
    return out;
  }

  // Spectral derivative of the given order; the unpaired highest mode is
  // zeroed for odd orders (it has no imaginary-part partner).
  SpectralField diff(const SpectralField& coeffs, int order = 1) const {
    check_size(coeffs.size());
    SpectralField out(N_);
    for (int i = 0; i < N_; ++i) {
      Complex factor(1.0, 0.0);
      const Complex ik(0.0, khat(i));
      for (int m = 0; m < order; ++m) factor *= ik;
      out[i] = coeffs[i] * factor;
    }
    if (order % 2 != 0) out[N_ / 2] = 0.0;
    return out;
  }

  // Coefficients of the pointwise product, free of aliasing: both factors are
  // lifted to a 2N grid (where all mode sums are representable), multiplied,
  // and truncated back.  Equals the direct truncated convolution of the
  // coefficient sequences exactly.
  SpectralField dealiased_product(const SpectralField& u, const SpectralField& v) const {
    check_size(u.size());
    check_size(v.size());
    embed(u, pad_);
    embed(v, pad2_);
    fftw_execute_dft(bwd2_, cast(pad_.data()), cast(pad_.data()));
    fftw_execute_dft(bwd2_, cast(pad2_.data()), cast(pad2_.data()));
    for (int j = 0; j < 2 * N_; ++j) pad3_[j] = pad_[j] * pad2_[j];
    fftw_execute_dft(fwd2_, cast(pad3_.data()), cast(pad3_.data()));
    SpectralField out(N_);
    const double inv = 1.0 / (2 * N_);
    for (int i = 0; i < N_; ++i) {
      const int k = wavenumber(i);
      const int src = k >= 0 ? k : k + 2 * N_;
      out[i] = pad3_[src] * (sign(i) * inv);
    }
    return out;
  }

  // Phase shift: g(x) = f(x - s).
  SpectralField shift(const SpectralField& coeffs, double s) const {
    check_size(coeffs.size());
    SpectralField out(N_);
    for (int i = 0; i < N_; ++i)
      out[i] = coeffs[i] * std::polar(1.0, -khat(i) * s);
    // the unpaired mode keeps only its real part so the field stays real
    out[N_ / 2] = Complex(coeffs[N_ / 2].real() * std::cos(khat(N_ / 2) * s), 0.0);
    return out;
  }

  // Discrete L2 norm  sqrt(h * sum_j f_j^2) = sqrt(2L * sum_k |chat_k|^2).
  double l2_norm(const SpectralField& coeffs) const {
    check_size(coeffs.size());
    double s = 0.0;
    for (const auto& z : coeffs) s += std::norm(z);
    return std::sqrt(2.0 * L_ * s);
  }

  double l2_norm(const RealField& values) const {
    check_size(values.size());
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(h_ * s);
  }

  // Largest violation of the conjugate symmetry a real field must satisfy.
  double hermitian_defect(const SpectralField& coeffs) const {
    check_size(coeffs.size());
    double worst = std::abs(coeffs[0].imag());
    worst = std::max(worst, std::abs(coeffs[N_ / 2].imag()));
    for (int k = 1; k < N_ / 2; ++k)
      worst = std::max(worst, std::abs(coeffs[k] - std::conj(coeffs[N_ - k])));
    return worst;
  }

  // Orthogonal projection onto the conjugate-symmetric subspace (coefficients
  // of real node fields).  Iterative schemes that map spectra through real
  // per-mode factors and products never damp the anti-symmetric component, so
  // rounding noise there can compound; projecting each new iterate keeps the
  // state exactly representable as a real field.
  void enforce_hermitian(SpectralField& coeffs) const {
    check_size(coeffs.size());
    coeffs[0] = Complex(coeffs[0].real(), 0.0);
    coeffs[N_ / 2] = Complex(coeffs[N_ / 2].real(), 0.0);
    for (int k = 1; k < N_ / 2; ++k) {
      const Complex avg = 0.5 * (coeffs[k] + std::conj(coeffs[N_ - k]));
      coeffs[k] = avg;
      coeffs[N_ - k] = std::conj(avg);
    }
  }

 private:
  static fftw_complex* cast(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }
  static double sign(int idx) { return idx % 2 == 0 ? 1.0 : -1.0; }

  void check_size(std::size_t n) const {
    if (static_cast<int>(n) != N_) throw std::invalid_argument("field size does not match grid");
  }

  // Place phased coefficients at their literal wavenumbers on the 2N grid.
  void embed(const SpectralField& coeffs, std::vector<Complex>& padded) const {
    std::fill(padded.begin(), padded.end(), Complex(0.0, 0.0));
    for (int i = 0; i < N_; ++i) {
      const int k = wavenumber(i);
      const int dst = k >= 0 ? k : k + 2 * N_;
      padded[dst] = coeffs[i] * sign(i);
    }
  }

  double L_;
  int N_;
  double h_;
  RealField nodes_;
  mutable std::vector<Complex> buf_, pad_, pad2_, pad3_;
  fftw_plan fwd_, bwd_, fwd2_, bwd2_;
};

}  // namespace bblab
