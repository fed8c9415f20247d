#pragma once

// Iterative radix-2 FFT with a real-input fast path. Plan objects hold the
// twiddle and permutation tables so per-frame work stays cheap; sizes are
// restricted to powers of two, which is all the STFT front end ever asks for.

#include <complex>
#include <cstddef>
#include <vector>

#include "tempostego/errors.hpp"

namespace tempostego::fft {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

class ComplexFft {
 public:
  explicit ComplexFft(std::size_t n) : n_(n) {
    if (!is_power_of_two(n)) throw InvalidParams("FFT size must be a power of two");
    bitrev_.resize(n);
    std::size_t levels = 0;
    while ((std::size_t{1} << levels) < n) ++levels;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < levels; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (levels - 1 - b);
      bitrev_[i] = r;
    }
    twiddle_.resize(n / 2);
    const double step = -2.0 * M_PI / static_cast<double>(n);
    for (std::size_t k = 0; k < n / 2; ++k)
      twiddle_[k] = std::polar(1.0, step * static_cast<double>(k));
  }

  std::size_t size() const { return n_; }

  void forward(std::complex<double>* a) const {
    for (std::size_t i = 0; i < n_; ++i) {
      const std::size_t j = bitrev_[i];
      if (i < j) std::swap(a[i], a[j]);
    }
    // Butterflies on raw doubles; std::complex operator* would route through
    // the library's NaN-rescuing multiply on every call.
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len >> 1;
      const std::size_t stride = n_ / len;
      for (std::size_t start = 0; start < n_; start += len) {
        for (std::size_t k = 0; k < half; ++k) {
          const std::complex<double> w = twiddle_[k * stride];
          std::complex<double>& u = a[start + k];
          std::complex<double>& v = a[start + k + half];
          const double tr = v.real() * w.real() - v.imag() * w.imag();
          const double ti = v.real() * w.imag() + v.imag() * w.real();
          const double ur = u.real(), ui = u.imag();
          u = {ur + tr, ui + ti};
          v = {ur - tr, ui - ti};
        }
      }
    }
  }

 private:
  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> twiddle_;
};

// Real-input FFT of size n via one complex FFT of size n/2. Emits the n/2+1
// non-redundant bins.
class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n), half_fft_(n / 2) {
    if (!is_power_of_two(n) || n < 4)
      throw InvalidParams("real FFT size must be a power of two >= 4");
    rot_.resize(n / 2 + 1);
    const double step = -2.0 * M_PI / static_cast<double>(n);
    for (std::size_t k = 0; k <= n / 2; ++k)
      rot_[k] = std::polar(1.0, step * static_cast<double>(k));
    packed_.resize(n / 2);
  }

  std::size_t size() const { return n_; }

  // `in` must hold size() reals; `out` is resized to size()/2 + 1 bins.
  void transform(const double* in, std::vector<std::complex<double>>& out) {
    const std::size_t half = n_ / 2;
    for (std::size_t k = 0; k < half; ++k)
      packed_[k] = {in[2 * k], in[2 * k + 1]};
    half_fft_.forward(packed_.data());

    out.resize(half + 1);
    for (std::size_t k = 0; k <= half; ++k) {
      const std::complex<double> zk = packed_[k % half];
      const std::complex<double> zr = packed_[(half - k) % half];
      const double er = 0.5 * (zk.real() + zr.real());
      const double ei = 0.5 * (zk.imag() - zr.imag());
      // (-i * odd) where odd = (zk - conj(zr)) / 2
      const double or_ = 0.5 * (zk.imag() + zr.imag());
      const double oi = -0.5 * (zk.real() - zr.real());
      const double wr = rot_[k].real(), wi = rot_[k].imag();
      out[k] = {er + or_ * wr - oi * wi, ei + or_ * wi + oi * wr};
    }
  }

 private:
  std::size_t n_;
  ComplexFft half_fft_;
  std::vector<std::complex<double>> rot_;
  std::vector<std::complex<double>> packed_;
};

}  // namespace tempostego::fft
