#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace tracksentinel {

// --- deterministic RNG -------------------------------------------------
//
// Seed handling is pinned to splitmix64 + mt19937_64 with an explicit
// uint64 -> [0,1) mapping, so realizations are bit-identical for a given
// seed regardless of the standard library's distribution internals.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Per-run seed for run `index` under a sweep master seed (counter scheme).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 1));
}

inline double uniform01(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

// --- FFT (FFTW-backed; planning serialized internally) ------------------

// Complex forward/inverse DFT, any length. Inverse is normalized by 1/N.
std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& x);
std::vector<std::complex<double>> ifft(const std::vector<std::complex<double>>& x);

// One-sided spectrum of a real series: bins 0..N/2, spacing fs/N.
std::vector<std::complex<double>> rfft(std::span<const double> x);

// --- convolution --------------------------------------------------------

enum class ConvMode { direct, fast, automatic };

enum class PadMode { zero, symmetric };

// Same-size convolution with an odd-length kernel centered on each sample.
// y[i] = sum_m kernel[m] * xpad[i + m], kernel reversed per the usual
// convolution convention; edges handled by the requested padding.
std::vector<double> convolve_same(std::span<const double> x,
                                  std::span<const double> kernel,
                                  PadMode pad = PadMode::symmetric,
                                  ConvMode mode = ConvMode::automatic);

// --- zero-phase low-pass + decimation ------------------------------------

// Hamming-windowed sinc low-pass, odd tap count (linear phase).
std::vector<double> lowpass_fir(double cutoff_hz, double fs_hz, int taps);

// Filter with the symmetric FIR applied centered (zero phase), then keep
// every `factor`-th sample starting at index 0.
std::vector<double> lowpass_decimate(std::span<const double> x, double fs_hz,
                                     double cutoff_hz, int factor, int taps = 255);

// --- small helpers --------------------------------------------------------

// Linear interpolation of uniformly spaced samples (x0 + i*dx -> y[i]).
double lerp_uniform(std::span<const double> y, double x0, double dx, double x);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample std, divisor n-1
  std::size_t n = 0;
};
MeanStd mean_std(std::span<const double> values);

}  // namespace tracksentinel
