#include "tracksentinel/track.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "tracksentinel/io.hpp"
#include "tracksentinel/numerics.hpp"

namespace tracksentinel::track {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double bump_sum_elevation(const std::vector<HarmonicBump>& bumps, double x) {
  double w = 0.0;
  for (const auto& b : bumps) w += b.elevation(x);
  return w;
}

// Linear interpolation of the PSD table, zero outside its support.
double psd_at(const std::vector<PsdPoint>& table, double f) {
  if (table.empty() || f < table.front().frequency || f > table.back().frequency) return 0.0;
  auto hi = std::lower_bound(table.begin(), table.end(), f,
                             [](const PsdPoint& p, double v) { return p.frequency < v; });
  if (hi == table.begin()) return hi->density;
  auto lo = std::prev(hi);
  if (hi == table.end()) return lo->density;
  const double span = hi->frequency - lo->frequency;
  if (span <= 0.0) return lo->density;
  const double t = (f - lo->frequency) / span;
  return lo->density + t * (hi->density - lo->density);
}

}  // namespace

void HarmonicBump::validate() const {
  if (!(amplitude > 0.0)) throw std::invalid_argument("bump amplitude must be > 0");
  if (!(wavelength > 0.0)) throw std::invalid_argument("bump wavelength must be > 0");
  if (!(end > start)) throw std::invalid_argument("bump end must exceed start");
  const double periods = (end - start) / wavelength;
  if (std::abs(periods - std::round(periods)) > 1e-9 * std::max(1.0, periods))
    throw std::invalid_argument("bump support must span whole wavelengths");
}

double HarmonicBump::elevation(double x) const {
  if (x < start || x > end) return 0.0;
  return 0.5 * amplitude * (1.0 - std::cos(kTwoPi * (x - start) / wavelength));
}

double HarmonicBump::curvature(double x) const {
  if (x < start || x > end) return 0.0;
  const double k = kTwoPi / wavelength;
  return 0.5 * amplitude * k * k * std::cos(kTwoPi * (x - start) / wavelength);
}

HarmonicBump make_bump(double amplitude, double wavelength, double start, double end) {
  HarmonicBump b{amplitude, wavelength, start, end == 0.0 ? start + wavelength : end};
  b.validate();
  return b;
}

void TrackProfile::validate() const {
  if (!(grid_step > 0.0)) throw std::invalid_argument("profile grid_step must be > 0");
  if (samples.size() < 3) throw std::invalid_argument("profile needs at least 3 samples");
  for (double v : samples)
    if (!std::isfinite(v)) throw std::invalid_argument("profile elevation not finite");
  for (const auto& b : bumps) b.validate();
}

double TrackProfile::elevation(double x) const {
  if (x < origin || x > x_end()) return 0.0;
  return lerp_uniform(samples, origin, grid_step, x);
}

TrackProfile harmonic_profile(const HarmonicBump& bump, double grid_step,
                              std::pair<double, double> domain) {
  bump.validate();
  if (!(grid_step > 0.0)) throw std::invalid_argument("harmonic_profile: grid_step must be > 0");
  if (grid_step > bump.wavelength / 10.0 + 1e-12)
    throw std::invalid_argument("harmonic_profile: grid too coarse, need >= 10 samples per wavelength");
  if (domain.first > bump.start || domain.second < bump.end)
    throw std::invalid_argument("harmonic_profile: domain excludes the bump");
  const auto n = static_cast<std::size_t>(
                     std::floor((domain.second - domain.first) / grid_step + 1e-9)) + 1;
  TrackProfile p;
  p.grid_step = grid_step;
  p.origin = domain.first;
  p.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    p.samples[i] = bump.elevation(domain.first + grid_step * static_cast<double>(i));
  p.bumps = {bump};
  p.validate();
  return p;
}

TrackProfile random_profile(const RandomProfileSpec& spec, std::pair<double, double> domain) {
  if (spec.psd.empty()) throw std::invalid_argument("random_profile: PSD table is empty");
  for (const auto& p : spec.psd)
    if (p.density < 0.0) throw std::invalid_argument("random_profile: PSD density must be >= 0");
  if (!std::is_sorted(spec.psd.begin(), spec.psd.end(),
                      [](const PsdPoint& a, const PsdPoint& b) { return a.frequency < b.frequency; }))
    throw std::invalid_argument("random_profile: PSD table must be sorted by frequency");
  if (!(spec.wavelength_min > 0.0) || !(spec.wavelength_max > spec.wavelength_min))
    throw std::invalid_argument("random_profile: wavelength band must be positive and ordered");
  if (!(spec.grid_step > 0.0)) throw std::invalid_argument("random_profile: grid_step must be > 0");
  if (1.0 / spec.wavelength_min > 0.5 / spec.grid_step)
    throw std::invalid_argument("random_profile: wavelength band unresolvable on grid_step");
  if (!(domain.second > domain.first)) throw std::invalid_argument("random_profile: bad domain");

  const double length = domain.second - domain.first;
  // Synthesis band: wavelength band intersected with the table support.
  const double f_lo = std::max(1.0 / spec.wavelength_max, spec.psd.front().frequency);
  const double f_hi = std::min(1.0 / spec.wavelength_min, spec.psd.back().frequency);

  const auto n = static_cast<std::size_t>(std::floor(length / spec.grid_step + 1e-9)) + 1;
  TrackProfile p;
  p.grid_step = spec.grid_step;
  p.origin = domain.first;
  p.samples.assign(n, 0.0);

  if (f_hi > f_lo) {
    // Bin count keeps the synthetic period at least twice the domain length.
    const auto bins = static_cast<std::size_t>(
        std::max(256.0, std::ceil(2.0 * (f_hi - f_lo) * length)));
    const double df = (f_hi - f_lo) / static_cast<double>(bins);
    std::mt19937_64 rng(spec.seed);
    for (std::size_t k = 0; k < bins; ++k) {
      const double f = f_lo + (static_cast<double>(k) + 0.5) * df;
      const double amp = std::sqrt(2.0 * psd_at(spec.psd, f) * df);
      const double phase = kTwoPi * uniform01(rng());
      if (amp == 0.0) continue;
      // Phasor recurrence instead of per-sample trig.
      const double dtheta = kTwoPi * f * spec.grid_step;
      double c = std::cos(kTwoPi * f * domain.first + phase);
      double s = std::sin(kTwoPi * f * domain.first + phase);
      const double cd = std::cos(dtheta), sd = std::sin(dtheta);
      for (std::size_t i = 0; i < n; ++i) {
        p.samples[i] += amp * c;
        const double cn = c * cd - s * sd;
        s = c * sd + s * cd;
        c = cn;
      }
    }
    // Remove the (small) sample mean so the realization is exactly zero-mean.
    double mean = 0.0;
    for (double v : p.samples) mean += v;
    mean /= static_cast<double>(n);
    for (double& v : p.samples) v -= mean;
  }
  p.validate();
  return p;
}

TrackProfile superpose(const std::vector<TrackProfile>& parts) {
  if (parts.empty()) throw std::invalid_argument("superpose: empty input list");
  for (const auto& p : parts) p.validate();

  bool same_grid = true;
  for (const auto& p : parts) {
    if (std::abs(p.grid_step - parts.front().grid_step) > 1e-12 ||
        std::abs(p.origin - parts.front().origin) > 1e-9 ||
        p.samples.size() != parts.front().samples.size()) {
      same_grid = false;
      break;
    }
  }

  TrackProfile out;
  if (same_grid) {
    out.grid_step = parts.front().grid_step;
    out.origin = parts.front().origin;
    out.samples.assign(parts.front().samples.size(), 0.0);
    for (const auto& p : parts)
      for (std::size_t i = 0; i < out.samples.size(); ++i) out.samples[i] += p.samples[i];
  } else {
    double step = parts.front().grid_step;
    double lo = parts.front().origin;
    double hi = parts.front().x_end();
    for (const auto& p : parts) {
      step = std::min(step, p.grid_step);
      lo = std::min(lo, p.origin);
      hi = std::max(hi, p.x_end());
    }
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    out.grid_step = step;
    out.origin = lo;
    out.samples.assign(n, 0.0);
    for (const auto& p : parts)
      for (std::size_t i = 0; i < n; ++i)
        out.samples[i] += p.elevation(lo + step * static_cast<double>(i));
  }
  for (const auto& p : parts) out.bumps.insert(out.bumps.end(), p.bumps.begin(), p.bumps.end());
  out.validate();
  return out;
}

double second_derivative(const TrackProfile& profile, double x) {
  if (!(profile.grid_step > 0.0) || profile.samples.size() < 3)
    throw std::invalid_argument("second_derivative: malformed profile");
  const double lo = profile.origin + profile.grid_step;
  const double hi = profile.x_end() - profile.grid_step;
  if (x < lo || x > hi) throw std::out_of_range("second_derivative: x out of range");

  double w2 = 0.0;
  for (const auto& b : profile.bumps) w2 += b.curvature(x);

  // Central differences on the residual beyond the analytic bump content.
  const auto residual = [&](std::size_t j) {
    const double xj = profile.origin + profile.grid_step * static_cast<double>(j);
    return profile.samples[j] - bump_sum_elevation(profile.bumps, xj);
  };
  const double h2 = profile.grid_step * profile.grid_step;
  const auto fd = [&](std::size_t j) {
    return (residual(j - 1) - 2.0 * residual(j) + residual(j + 1)) / h2;
  };
  const double pos = (x - profile.origin) / profile.grid_step;
  auto i = static_cast<std::size_t>(pos);
  i = std::clamp<std::size_t>(i, 1, profile.samples.size() - 2);
  const double frac = pos - static_cast<double>(i);
  if (frac <= 1e-12 || i + 2 > profile.samples.size() - 1) return w2 + fd(i);
  return w2 + (1.0 - frac) * fd(i) + frac * fd(i + 1);
}

std::vector<PsdPoint> default_psd_table(double rms_m, double wavelength_min,
                                        double wavelength_max) {
  const double f_lo = 1.0 / wavelength_max;
  const double f_hi = 1.0 / wavelength_min;
  // Variance of c*f^-3 over [f_lo, f_hi] is c/2*(f_lo^-2 - f_hi^-2).
  const double c = 2.0 * rms_m * rms_m /
                   (1.0 / (f_lo * f_lo) - 1.0 / (f_hi * f_hi));
  std::vector<PsdPoint> table;
  const int points = 33;
  for (int i = 0; i < points; ++i) {
    const double f = f_lo * std::pow(f_hi / f_lo, static_cast<double>(i) / (points - 1));
    table.push_back({f, c / (f * f * f)});
  }
  return table;
}

void write_profile_csv(const std::filesystem::path& path, const TrackProfile& profile) {
  std::vector<double> xs(profile.samples.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    xs[i] = profile.origin + profile.grid_step * static_cast<double>(i);
  io::write_csv(path, {"position_m", "elevation_m"}, {xs, profile.samples});
}

TrackProfile read_profile_csv(const std::filesystem::path& path) {
  auto table = io::read_csv(path);
  if (table.header.size() != 2 || table.rows.size() < 3)
    throw std::runtime_error("profile CSV must have 2 columns and >= 3 rows");
  TrackProfile p;
  p.origin = table.rows.front()[0];
  p.grid_step = table.rows[1][0] - table.rows[0][0];
  p.samples.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const double expected = p.origin + p.grid_step * static_cast<double>(i);
    if (std::abs(table.rows[i][0] - expected) > 1e-6)
      throw std::runtime_error("profile CSV grid is not uniform");
    p.samples.push_back(table.rows[i][1]);
  }
  p.validate();
  return p;
}

void write_psd_csv(const std::filesystem::path& path, const std::vector<PsdPoint>& table) {
  std::vector<double> f(table.size()), s(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    f[i] = table[i].frequency;
    s[i] = table[i].density;
  }
  io::write_csv(path, {"spatial_frequency_per_m", "psd_m2m"}, {f, s});
}

std::vector<PsdPoint> read_psd_csv(const std::filesystem::path& path) {
  auto table = io::read_csv(path);
  if (table.header.size() != 2) throw std::runtime_error("PSD CSV must have 2 columns");
  std::vector<PsdPoint> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) out.push_back({row[0], row[1]});
  return out;
}

}  // namespace tracksentinel::track
