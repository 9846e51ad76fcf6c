#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tracksentinel/track.hpp"

namespace tracksentinel::dynamics {

inline constexpr double kGravity = 9.81;  // m/s^2

// Simply-supported Euler-Bernoulli beam reduced to its sine modes.
struct BeamModel {
  double span = 32.6;                   // m
  double mass_per_length = 3.0e4;       // kg/m
  double flexural_rigidity = 2.906e11;  // N*m^2 (first mode ~4.6 Hz with defaults)
  std::vector<double> damping_ratios = {0.02};  // per mode; last entry broadcast
  int n_modes = 12;

  void validate() const;
  double damping_ratio(int mode) const;
  double natural_frequency(int mode) const;  // omega_n, rad/s
  double damping_rate(int mode) const;       // omega_b = xi_n * omega_n
  double damped_frequency(int mode) const;   // omega_D = omega_n * sqrt(1 - xi^2)
  double mode_shape(int mode, double x) const;
};

struct Axle {
  double offset = 0.0;         // m behind the train head (first axle at 0)
  double static_load = 0.0;    // N
  double unsprung_mass = 0.0;  // kg
};

struct TrainConfig {
  std::vector<Axle> axles;  // offsets strictly increasing, first >= 0
  double speed = 0.0;       // m/s
  double carriage_length = 25.0;

  void validate() const;
  double length() const { return axles.empty() ? 0.0 : axles.back().offset; }
};

// 8-car consist, 4 axles per car, head datum on the first axle. Geometry and
// loads are plausible EMU values, not published ones.
TrainConfig default_train(double speed_mps);

struct SensorLayout {
  std::vector<double> positions;  // m, strictly inside (0, span), sorted
  void validate(const BeamModel& beam) const;
};

SensorLayout default_sensors(const BeamModel& beam);

struct AccelerationRecord {
  double sample_rate = 0.0;  // Hz
  double t0 = 0.0;
  double speed = 0.0;
  double run_in = 0.0;  // head position at t0 is -run_in
  std::vector<double> sensor_positions;
  std::vector<std::vector<double>> accel;         // [sensor][sample], m/s^2
  std::vector<std::vector<double>> displacement;  // [sensor][sample], m

  std::size_t samples() const { return accel.empty() ? 0 : accel.front().size(); }
  double time_at(std::size_t i) const { return t0 + static_cast<double>(i) / sample_rate; }
  double head_position(double t) const { return speed * t - run_in; }
};

struct SpatialSeries {
  double spatial_step = 0.0;
  double origin = 0.0;  // position of sample 0, a multiple of spatial_step
  std::vector<double> sensor_positions;
  std::vector<std::vector<double>> accel;  // [sensor][sample]

  std::size_t samples() const { return accel.empty() ? 0 : accel.front().size(); }
  double position(std::size_t k) const {
    return origin + spatial_step * static_cast<double>(k);
  }
};

// Equivalent moving load of a harmonic bump under one wheel:
// P(t) = (2 pi^2 v^2 M1 A / l^2) * cos(2 pi v (t - a/v) / l) while the wheel
// is on the bump (t measured from span entry at x = v t), zero outside.
double harmonic_force(const track::HarmonicBump& bump, double unsprung_mass, double speed,
                      double t);

// Amplitude 2 pi^2 v^2 M1 A / l^2 of the equivalent load.
double harmonic_force_amplitude(const track::HarmonicBump& bump, double unsprung_mass,
                                double speed);

// Analytic generalized coordinate q_n(t) for the moving harmonic load: the
// damped-oscillator convolution evaluated in closed form via complex
// exponentials (the r1 = wbar + n*w, r2 = wbar - n*w decomposition).
// Throws on an exactly undamped resonance.
double modal_response_closed_form(const BeamModel& beam, const track::HarmonicBump& bump,
                                  double unsprung_mass, double speed, int mode_n, double t);

// Modal forcing f_n(tau): the full numerator P(tau) * (mode shape at the
// load), with its support and a content bound for quadrature step control.
struct ModalForcing {
  std::function<double(double)> value;
  double t_begin = 0.0;
  double t_end = 0.0;
  double max_frequency_hz = 0.0;
};

ModalForcing moving_point_modal_force(std::function<double(double)> force, double t_begin,
                                      double t_end, double speed, const BeamModel& beam,
                                      int mode_n, double extra_frequency_hz = 0.0);
ModalForcing fixed_point_modal_force(std::function<double(double)> force, double t_begin,
                                     double t_end, double position, const BeamModel& beam,
                                     int mode_n, double extra_frequency_hz = 0.0);
ModalForcing bump_modal_force(const BeamModel& beam, const track::HarmonicBump& bump,
                              double unsprung_mass, double speed, int mode_n);

// Direct numerical evaluation of the Duhamel integral
//   q_n(t) = 2/(mbar L wD) * int f_n(tau) e^{-wb (t-tau)} sin(wD (t-tau)) dtau
// by composite Simpson quadrature. Oracle-grade, not fast.
std::vector<double> duhamel_quadrature(const BeamModel& beam, const ModalForcing& forcing,
                                       int mode_n, std::span<const double> t_grid);

// Sensor acceleration for the moving harmonic load: mode sum of qddot_n
// sin(n pi x / L), with qddot_n from 4th-order differencing of the closed
// form on an 8x refined grid.
std::vector<double> bridge_acceleration_closed_form(const BeamModel& beam,
                                                    const track::HarmonicBump& bump,
                                                    double unsprung_mass, double speed,
                                                    double sensor_x,
                                                    std::span<const double> t_grid);

struct SimulateOptions {
  double run_in = 10.0;    // m of approach before the span
  int substeps = 8;        // internal step = 1 / (substeps * fs)
  bool beam_feedback = false;  // re-evaluate contact forces with latest ydd
  int feedback_iterations = 3;
  int decimation_taps = 255;
};

// Moving-force passage over the sampled profile: per-axle force
// W + M1 v^2 w''(x), modal equations integrated with the constant-average-
// acceleration scheme, low-passed at 0.45 fs and decimated to fs.
AccelerationRecord simulate_train_passage(const BeamModel& beam, const TrainConfig& train,
                                          const track::TrackProfile& profile,
                                          const SensorLayout& sensors, double fs,
                                          const SimulateOptions& options = {});

// Linear interpolation onto head positions k * spatial_step. The optional
// range pins the output extent so records from different speeds align.
SpatialSeries resample_spatial(const AccelerationRecord& record, double speed,
                               double spatial_step,
                               std::optional<std::pair<double, double>> range = std::nullopt);

}  // namespace tracksentinel::dynamics
