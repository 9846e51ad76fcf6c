#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

namespace tracksentinel::track {

// Raised-cosine vertical bump: w(x) = A/2 * (1 - cos(2*pi*(x-a)/l)) on [a, b].
// The support must be an integer number of wavelengths so the profile joins
// the surrounding track with continuous value and slope.
struct HarmonicBump {
  double amplitude = 0.0;   // m
  double wavelength = 0.0;  // m
  double start = 0.0;       // m
  double end = 0.0;         // m; 0 means one full period (start + wavelength)

  void validate() const;
  double elevation(double x) const;
  double curvature(double x) const;  // d2w/dx2, analytic
};

HarmonicBump make_bump(double amplitude, double wavelength, double start,
                       double end = 0.0);

struct PsdPoint {
  double frequency = 0.0;  // spatial frequency, 1/m
  double density = 0.0;    // one-sided PSD, m^2 * m
};

struct RandomProfileSpec {
  std::vector<PsdPoint> psd;      // sorted by frequency, zero outside its range
  double wavelength_min = 1.0;    // m
  double wavelength_max = 120.0;  // m
  std::uint64_t seed = 0;
  double grid_step = 0.01;        // m
};

// Sampled elevation on a uniform grid plus analytic bump metadata.
struct TrackProfile {
  double grid_step = 0.0;
  double origin = 0.0;
  std::vector<double> samples;
  std::vector<HarmonicBump> bumps;

  void validate() const;
  double x_end() const { return origin + grid_step * static_cast<double>(samples.size() - 1); }
  double elevation(double x) const;  // linear interpolation of samples
};

TrackProfile harmonic_profile(const HarmonicBump& bump, double grid_step,
                              std::pair<double, double> domain);

// Zero-mean realization by spectral representation: cosines with amplitudes
// sqrt(2*S(f_k)*df) and seed-driven uniform phases. Bit-reproducible for a
// given spec.
TrackProfile random_profile(const RandomProfileSpec& spec, std::pair<double, double> domain);

// Pointwise sum; inputs on differing grids are resampled to the finest one
// over the union of domains (linear interpolation, zero outside each part).
TrackProfile superpose(const std::vector<TrackProfile>& parts);

// Curvature w''(x): analytic for the bump content, central finite differences
// for whatever the samples carry beyond the bumps.
double second_derivative(const TrackProfile& profile, double x);

// Stand-in roughness spectrum: S(f) = c * f^-3 over wavelengths 1-120 m with
// c tuned for ~1 mm RMS. Not a published track spectrum.
std::vector<PsdPoint> default_psd_table(double rms_m = 1.0e-3, double wavelength_min = 1.0,
                                        double wavelength_max = 120.0);

void write_profile_csv(const std::filesystem::path& path, const TrackProfile& profile);
TrackProfile read_profile_csv(const std::filesystem::path& path);
void write_psd_csv(const std::filesystem::path& path, const std::vector<PsdPoint>& table);
std::vector<PsdPoint> read_psd_csv(const std::filesystem::path& path);

}  // namespace tracksentinel::track
