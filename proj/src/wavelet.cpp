#include "tracksentinel/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tracksentinel::wavelet {

namespace {

constexpr double kSupportSigmas = 8.0;  // kernel truncated at |t| = 8 a

double mother(WaveletKind kind, double t) {
  const double g = std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
  switch (kind) {
    case WaveletKind::gauss1:
      return -t * g;
    case WaveletKind::gauss2:
      return (t * t - 1.0) * g;
  }
  return 0.0;
}

// Sampled L1-normalized kernel at scale a, zero-sum enforced.
std::vector<double> sampled_kernel(WaveletKind kind, double scale, double step,
                                   std::size_t* half_width) {
  const auto r = static_cast<std::size_t>(std::ceil(kSupportSigmas * scale / step));
  std::vector<double> k(2 * r + 1);
  double sum = 0.0;
  for (std::size_t m = 0; m < k.size(); ++m) {
    const double t = (static_cast<double>(m) - static_cast<double>(r)) * step / scale;
    k[m] = mother(kind, t) / scale * step;
    sum += k[m];
  }
  const double mean = sum / static_cast<double>(k.size());
  for (double& v : k) v -= mean;
  *half_width = r;
  return k;
}

}  // namespace

double center_frequency(WaveletKind kind) {
  switch (kind) {
    case WaveletKind::gauss1:
      return 1.0 / (2.0 * std::numbers::pi);
    case WaveletKind::gauss2:
      return std::numbers::sqrt2 / (2.0 * std::numbers::pi);
  }
  return 0.0;
}

ScaleGrid make_scale_grid(double sample_step, std::pair<double, double> band, int n_scales,
                          WaveletKind kind) {
  if (!(sample_step > 0.0)) throw std::invalid_argument("make_scale_grid: bad sample step");
  if (n_scales < 8) throw std::invalid_argument("make_scale_grid: need at least 8 scales");
  const double nyquist = 0.5 / sample_step;
  if (!(band.first > 0.0) || !(band.second > band.first))
    throw std::invalid_argument("make_scale_grid: band must be positive and ordered");
  if (band.second > nyquist)
    throw std::invalid_argument("make_scale_grid: band exceeds the Nyquist frequency");

  ScaleGrid grid;
  grid.sample_step = sample_step;
  grid.kind = kind;
  const double fc = center_frequency(kind);
  const double a_min = fc / band.second;
  const double a_max = fc / band.first;
  grid.scales.resize(n_scales);
  grid.pseudo_frequencies.resize(n_scales);
  for (int j = 0; j < n_scales; ++j) {
    const double t = static_cast<double>(j) / (n_scales - 1);
    grid.scales[j] = a_min * std::pow(a_max / a_min, t);
    grid.pseudo_frequencies[j] = fc / grid.scales[j];
  }
  return grid;
}

Scalogram cwt(std::span<const double> series, const ScaleGrid& grid, ConvMode mode,
              double axis_origin) {
  if (grid.scales.empty()) throw std::invalid_argument("cwt: empty scale grid");
  std::size_t r_max = 0;
  {
    std::size_t dummy = 0;
    sampled_kernel(grid.kind, grid.scales.back(), grid.sample_step, &dummy);
    r_max = dummy;
  }
  if (series.size() < 4 * (2 * r_max + 1))
    throw std::invalid_argument("cwt: series shorter than 4x the longest wavelet support");

  Scalogram sg;
  sg.sample_step = grid.sample_step;
  sg.axis_origin = axis_origin;
  sg.scales = grid.scales;
  sg.pseudo_frequencies = grid.pseudo_frequencies;
  sg.coefficients.resize(grid.scales.size());
  sg.coi_half_width.resize(grid.scales.size());
  for (std::size_t j = 0; j < grid.scales.size(); ++j) {
    std::size_t r = 0;
    const auto kernel = sampled_kernel(grid.kind, grid.scales[j], grid.sample_step, &r);
    sg.coefficients[j] = convolve_same(series, kernel, PadMode::symmetric, mode);
    sg.coi_half_width[j] = r;
  }
  return sg;
}

IndexSeries coefficient_sum(const Scalogram& sg) {
  IndexSeries out;
  const std::size_t n = sg.positions();
  out.positions.resize(n);
  out.interior.assign(n, 1);
  out.values.assign(1, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    out.positions[i] = sg.axis_origin + sg.sample_step * static_cast<double>(i);
  for (std::size_t j = 0; j < sg.coefficients.size(); ++j) {
    const auto& row = sg.coefficients[j];
    for (std::size_t i = 0; i < n; ++i) out.values[0][i] += std::abs(row[i]);
    const std::size_t r = sg.coi_half_width[j];
    for (std::size_t i = 0; i < n; ++i)
      if (i < r || i + r >= n) out.interior[i] = 0;
  }
  return out;
}

void append_sensor(IndexSeries& dst, const IndexSeries& src) {
  if (dst.values.empty()) {
    dst = src;
    return;
  }
  if (src.positions.size() != dst.positions.size())
    throw std::invalid_argument("append_sensor: axis length mismatch");
  for (const auto& v : src.values) dst.values.push_back(v);
  for (std::size_t i = 0; i < dst.interior.size(); ++i)
    dst.interior[i] = dst.interior[i] && src.interior[i];
}

}  // namespace tracksentinel::wavelet
