#pragma once

// Fourier pseudospectral operators on a periodic grid of N points over [0, L).

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <vector>

#include "skdv/core/error.hpp"

namespace skdv::numerics {

class Spectral {
 public:
  Spectral(std::size_t n, double length) : n_(n), length_(length) {
    if (n < 4 || (n & (n - 1)) != 0) throw Error("grid size must be a power of two >= 4");
    if (!(length > 0)) throw Error("domain length must be positive");
    real_ = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    spec_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
    forward_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), real_, spec_, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec_, real_, FFTW_ESTIMATE);
  }
  ~Spectral() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(real_);
    fftw_free(spec_);
  }
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  std::size_t size() const { return n_; }
  double length() const { return length_; }
  double dx() const { return length_ / static_cast<double>(n_); }
  /// Angular wavenumber of mode j.
  double wavenumber(std::size_t j) const { return 2.0 * std::numbers::pi * static_cast<double>(j) / length_; }
  /// Largest retained wavenumber magnitude.
  double max_wavenumber() const { return wavenumber(n_ / 2); }

  /// d^k/dx^k; the Nyquist mode is dropped for odd k.
  void derivative(const std::vector<double>& in, int k, std::vector<double>& out) {
    transform(in, out, [&](std::size_t j, std::complex<double> z) {
      if (k % 2 == 1 && j == n_ / 2) return std::complex<double>{};
      std::complex<double> ik(0.0, wavenumber(j));
      std::complex<double> f(1.0, 0.0);
      for (int i = 0; i < k; ++i) f *= ik;
      return z * f;
    });
  }

  /// Zero-mean antiderivative; callers check the mean first.
  void antiderivative(const std::vector<double>& in, std::vector<double>& out) {
    transform(in, out, [&](std::size_t j, std::complex<double> z) {
      if (j == 0 || j == n_ / 2) return std::complex<double>{};
      return z / std::complex<double>(0.0, wavenumber(j));
    });
  }

  /// Zeroes every mode with |j| > N/3.
  void dealias(std::vector<double>& v) {
    const std::size_t cut = n_ / 3;
    transform(v, v, [&](std::size_t j, std::complex<double> z) {
      return j > cut ? std::complex<double>{} : z;
    });
  }

  double mean(const std::vector<double>& v) const {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(n_);
  }

  /// Trapezoidal (spectrally exact for periodic data) integral over the domain.
  double integral(const std::vector<double>& v) const { return mean(v) * length_; }

 private:
  template <class Mode>
  void transform(const std::vector<double>& in, std::vector<double>& out, Mode&& mode) {
    std::copy(in.begin(), in.end(), real_);
    fftw_execute(forward_);
    const double scale = 1.0 / static_cast<double>(n_);
    for (std::size_t j = 0; j <= n_ / 2; ++j) {
      std::complex<double> z(spec_[j][0], spec_[j][1]);
      z = mode(j, z) * scale;
      spec_[j][0] = z.real();
      spec_[j][1] = z.imag();
    }
    fftw_execute(backward_);
    out.assign(real_, real_ + n_);
  }

  std::size_t n_;
  double length_;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace skdv::numerics
