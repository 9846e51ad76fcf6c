#include "tracksentinel/numerics.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace tracksentinel {

namespace {

// FFTW planning is not thread-safe; execution on private data is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x, int sign) {
  const int n = static_cast<int>(x.size());
  if (n == 0) return {};
  std::vector<std::complex<double>> out(x.size());
  auto* in_ptr = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(x.data()));
  auto* out_ptr = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = fftw_plan_dft_1d(n, in_ptr, out_ptr, sign, FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<double> pad_signal(std::span<const double> x, std::size_t half, PadMode pad) {
  std::vector<double> xp;
  xp.reserve(x.size() + 2 * half);
  for (std::size_t i = 0; i < half; ++i) {
    if (pad == PadMode::symmetric) {
      // reflect without repeating the edge sample: x[half-i] ... x[1]
      std::size_t idx = std::min(half - i, x.size() - 1);
      xp.push_back(x[idx]);
    } else {
      xp.push_back(0.0);
    }
  }
  xp.insert(xp.end(), x.begin(), x.end());
  for (std::size_t i = 0; i < half; ++i) {
    if (pad == PadMode::symmetric) {
      std::size_t idx = x.size() >= 2 + i ? x.size() - 2 - i : 0;
      xp.push_back(x[idx]);
    } else {
      xp.push_back(0.0);
    }
  }
  return xp;
}

// Valid convolution of padded signal with reversed kernel: out length = n.
std::vector<double> conv_valid_direct(const std::vector<double>& xp,
                                      std::span<const double> kernel, std::size_t n) {
  const std::size_t k = kernel.size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    // y[i] = sum_m kernel[m] * xp[i + (k-1) - m]   (true convolution)
    const double* xs = xp.data() + i;
    for (std::size_t m = 0; m < k; ++m) acc += kernel[m] * xs[k - 1 - m];
    y[i] = acc;
  }
  return y;
}

std::vector<double> conv_valid_fft(const std::vector<double>& xp,
                                   std::span<const double> kernel, std::size_t n) {
  const std::size_t full = xp.size() + kernel.size() - 1;
  std::vector<std::complex<double>> a(full), b(full);
  for (std::size_t i = 0; i < xp.size(); ++i) a[i] = xp[i];
  for (std::size_t i = 0; i < kernel.size(); ++i) b[i] = kernel[i];
  auto fa = fft(a);
  auto fb = fft(b);
  for (std::size_t i = 0; i < full; ++i) fa[i] *= fb[i];
  auto conv = ifft(fa);
  // valid part starts at kernel.size()-1
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = conv[i + kernel.size() - 1].real();
  return y;
}

}  // namespace

std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& x) {
  return dft(x, FFTW_FORWARD);
}

std::vector<std::complex<double>> ifft(const std::vector<std::complex<double>>& x) {
  auto out = dft(x, FFTW_BACKWARD);
  const double inv = 1.0 / static_cast<double>(x.size());
  for (auto& v : out) v *= inv;
  return out;
}

std::vector<std::complex<double>> rfft(std::span<const double> x) {
  std::vector<std::complex<double>> in(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) in[i] = x[i];
  auto full = fft(in);
  full.resize(x.size() / 2 + 1);
  return full;
}

std::vector<double> convolve_same(std::span<const double> x, std::span<const double> kernel,
                                  PadMode pad, ConvMode mode) {
  if (kernel.empty() || kernel.size() % 2 == 0)
    throw std::invalid_argument("convolve_same: kernel must have odd length");
  if (x.empty()) return {};
  const std::size_t half = kernel.size() / 2;
  auto xp = pad_signal(x, half, pad);
  if (mode == ConvMode::automatic)
    mode = (x.size() * kernel.size() > 1u << 18) ? ConvMode::fast : ConvMode::direct;
  return mode == ConvMode::fast ? conv_valid_fft(xp, kernel, x.size())
                                : conv_valid_direct(xp, kernel, x.size());
}

std::vector<double> lowpass_fir(double cutoff_hz, double fs_hz, int taps) {
  if (taps < 3 || taps % 2 == 0) throw std::invalid_argument("lowpass_fir: taps must be odd >= 3");
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < fs_hz / 2.0))
    throw std::invalid_argument("lowpass_fir: cutoff outside (0, fs/2)");
  const double fc = cutoff_hz / fs_hz;  // cycles per sample
  const int half = taps / 2;
  std::vector<double> h(taps);
  double sum = 0.0;
  for (int i = 0; i < taps; ++i) {
    const int m = i - half;
    const double sinc = (m == 0) ? 2.0 * fc
                                 : std::sin(2.0 * std::numbers::pi * fc * m) /
                                       (std::numbers::pi * m);
    const double w = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (taps - 1));
    h[i] = sinc * w;
    sum += h[i];
  }
  for (auto& v : h) v /= sum;  // unity DC gain
  return h;
}

std::vector<double> lowpass_decimate(std::span<const double> x, double fs_hz, double cutoff_hz,
                                     int factor, int taps) {
  if (factor < 1) throw std::invalid_argument("lowpass_decimate: factor must be >= 1");
  auto h = lowpass_fir(cutoff_hz, fs_hz, taps);
  auto filtered = convolve_same(x, h, PadMode::symmetric, ConvMode::fast);
  std::vector<double> out;
  out.reserve(filtered.size() / factor + 1);
  for (std::size_t i = 0; i < filtered.size(); i += static_cast<std::size_t>(factor))
    out.push_back(filtered[i]);
  return out;
}

double lerp_uniform(std::span<const double> y, double x0, double dx, double x) {
  if (y.empty()) throw std::invalid_argument("lerp_uniform: empty series");
  const double pos = (x - x0) / dx;
  if (pos < 0.0 || pos > static_cast<double>(y.size() - 1))
    throw std::out_of_range("lerp_uniform: query outside sampled range");
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= y.size()) return y.back();
  const double frac = pos - static_cast<double>(i);
  return y[i] + frac * (y[i + 1] - y[i]);
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd out;
  out.n = values.size();
  if (out.n == 0) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(out.n);
  if (out.n < 2) return out;
  double ss = 0.0;
  for (double v : values) {
    const double d = v - out.mean;
    ss += d * d;
  }
  out.stddev = std::sqrt(ss / static_cast<double>(out.n - 1));
  return out;
}

}  // namespace tracksentinel
