#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "tracksentinel/numerics.hpp"

namespace tracksentinel::wavelet {

// Derivative-of-Gaussian family: psi = d(theta)/dt with theta the unit-area
// Gaussian smoothing kernel; gauss2 is the second-derivative variant.
enum class WaveletKind { gauss1, gauss2 };

double center_frequency(WaveletKind kind);  // pseudo-frequency of scale 1

struct ScaleGrid {
  double sample_step = 0.0;                // axis units per sample (s or m)
  WaveletKind kind = WaveletKind::gauss1;
  std::vector<double> scales;              // axis units, strictly increasing
  std::vector<double> pseudo_frequencies;  // center_frequency(kind) / scale
};

// Log-spaced scales whose pseudo-frequencies span [band.first, band.second].
ScaleGrid make_scale_grid(double sample_step, std::pair<double, double> band, int n_scales,
                          WaveletKind kind = WaveletKind::gauss1);

struct Scalogram {
  double sample_step = 0.0;
  double axis_origin = 0.0;
  std::vector<double> scales;
  std::vector<double> pseudo_frequencies;
  std::vector<std::vector<double>> coefficients;  // [scale][position]
  std::vector<std::size_t> coi_half_width;        // samples per scale
  std::size_t positions() const {
    return coefficients.empty() ? 0 : coefficients.front().size();
  }
  // Cell contaminated by the boundary (kernel support crosses an edge).
  bool masked(std::size_t scale_idx, std::size_t pos) const {
    const std::size_t r = coi_half_width[scale_idx];
    return pos < r || pos + r >= positions();
  }
};

// L1-normalized CWT by convolution with sampled kernels; each kernel is
// mean-subtracted so the discrete admissibility sum is exactly zero.
Scalogram cwt(std::span<const double> series, const ScaleGrid& grid,
              ConvMode mode = ConvMode::automatic, double axis_origin = 0.0);

// Index-1 curves: per-position sum of |coefficients| over all scales.
struct IndexSeries {
  std::vector<double> positions;
  std::vector<std::vector<double>> values;  // [sensor][position]
  std::vector<std::uint8_t> interior;       // 1 where no scale is boundary-masked
};

IndexSeries coefficient_sum(const Scalogram& sg);

// Stack another sensor's single-sensor result onto dst (axes must agree).
void append_sensor(IndexSeries& dst, const IndexSeries& src);

}  // namespace tracksentinel::wavelet
