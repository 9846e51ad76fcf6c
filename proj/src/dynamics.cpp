#include "tracksentinel/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "tracksentinel/numerics.hpp"

namespace tracksentinel::dynamics {

namespace {
constexpr double kPi = std::numbers::pi;
}

void BeamModel::validate() const {
  if (!(span > 0.0)) throw std::invalid_argument("beam span must be > 0");
  if (!(mass_per_length > 0.0)) throw std::invalid_argument("beam mass per length must be > 0");
  if (!(flexural_rigidity > 0.0)) throw std::invalid_argument("beam EI must be > 0");
  if (n_modes < 1) throw std::invalid_argument("beam needs at least one mode");
  if (damping_ratios.empty()) throw std::invalid_argument("beam damping ratios missing");
  for (double xi : damping_ratios)
    if (xi < 0.0 || xi >= 1.0) throw std::invalid_argument("damping ratio must be in [0, 1)");
}

double BeamModel::damping_ratio(int mode) const {
  const auto i = static_cast<std::size_t>(mode - 1);
  return i < damping_ratios.size() ? damping_ratios[i] : damping_ratios.back();
}

double BeamModel::natural_frequency(int mode) const {
  const double k = static_cast<double>(mode) * kPi / span;
  return k * k * std::sqrt(flexural_rigidity / mass_per_length);
}

double BeamModel::damping_rate(int mode) const {
  return damping_ratio(mode) * natural_frequency(mode);
}

double BeamModel::damped_frequency(int mode) const {
  const double xi = damping_ratio(mode);
  return natural_frequency(mode) * std::sqrt(1.0 - xi * xi);
}

double BeamModel::mode_shape(int mode, double x) const {
  return std::sin(static_cast<double>(mode) * kPi * x / span);
}

void TrainConfig::validate() const {
  if (axles.empty()) throw std::invalid_argument("train has no axles");
  if (!(speed > 0.0)) throw std::invalid_argument("train speed must be > 0");
  if (!(carriage_length > 0.0)) throw std::invalid_argument("carriage length must be > 0");
  double prev = -1.0;
  for (const auto& a : axles) {
    if (a.offset < 0.0) throw std::invalid_argument("axle offset must be >= 0");
    if (a.offset <= prev) throw std::invalid_argument("axle offsets must be strictly increasing");
    if (a.static_load < 0.0 || a.unsprung_mass < 0.0)
      throw std::invalid_argument("axle load and mass must be >= 0");
    prev = a.offset;
  }
}

TrainConfig default_train(double speed_mps) {
  TrainConfig t;
  t.speed = speed_mps;
  t.carriage_length = 25.0;
  const double per_car[4] = {0.0, 2.5, 17.5, 20.0};  // head datum on the first axle
  for (int car = 0; car < 8; ++car)
    for (double d : per_car)
      t.axles.push_back({25.0 * car + d, 1.4e5, 1200.0});
  t.validate();
  return t;
}

void SensorLayout::validate(const BeamModel& beam) const {
  if (positions.empty()) throw std::invalid_argument("sensor layout is empty");
  double prev = 0.0;
  for (double x : positions) {
    if (!(x > 0.0) || !(x < beam.span))
      throw std::invalid_argument("sensor positions must lie strictly inside the span");
    if (x <= prev) throw std::invalid_argument("sensor positions must be sorted ascending");
    prev = x;
  }
}

SensorLayout default_sensors(const BeamModel& beam) {
  return SensorLayout{{1.0, beam.span / 4.0, beam.span / 2.0, 3.0 * beam.span / 4.0,
                       beam.span - 1.0}};
}

double harmonic_force_amplitude(const track::HarmonicBump& bump, double unsprung_mass,
                                double speed) {
  return 2.0 * kPi * kPi * speed * speed * unsprung_mass * bump.amplitude /
         (bump.wavelength * bump.wavelength);
}

double harmonic_force(const track::HarmonicBump& bump, double unsprung_mass, double speed,
                      double t) {
  bump.validate();
  if (speed <= 0.0) return 0.0;
  const double ta = bump.start / speed;
  const double tb = bump.end / speed;
  if (t < ta || t > tb) return 0.0;
  const double amplitude = harmonic_force_amplitude(bump, unsprung_mass, speed);
  return amplitude * std::cos(2.0 * kPi * speed * (t - ta) / bump.wavelength);
}

double modal_response_closed_form(const BeamModel& beam, const track::HarmonicBump& bump,
                                  double unsprung_mass, double speed, int mode_n, double t) {
  beam.validate();
  bump.validate();
  if (mode_n < 1) throw std::invalid_argument("mode index must be >= 1");
  if (!(speed > 0.0)) throw std::invalid_argument("speed must be > 0");
  const double ta = bump.start / speed;
  const double tb = bump.end / speed;
  if (t < ta) return 0.0;  // nothing has forced the beam yet

  const double wn = beam.natural_frequency(mode_n);
  const double wb = beam.damping_rate(mode_n);
  const double wD = beam.damped_frequency(mode_n);
  const double w = kPi * speed / beam.span;          // load-position rate
  const double wbar = 2.0 * kPi * speed / bump.wavelength;  // excitation frequency
  const double amplitude = harmonic_force_amplitude(bump, unsprung_mass, speed);

  const double s = t - ta;
  const double T = std::min(s, tb - ta);
  const std::complex<double> lambda(-wb, wD);

  // I(s; W, phi) = int_0^T sin(W u + phi) e^{-wb (s-u)} sin(wD (s-u)) du,
  // written with Im[z1] Im[z2] = (Re[z1 conj z2] - Re[z1 z2]) / 2.
  const auto integral = [&](double W, double phi) {
    const auto segment = [&](std::complex<double> mu) {
      const std::complex<double> d = std::complex<double>(0.0, W) - mu;
      if (std::abs(d) < 1e-12 * std::max(wn, 1.0))
        throw std::domain_error("undamped resonance in closed-form modal response");
      return std::exp(mu * s) * (std::exp(d * T) - 1.0) / d;
    };
    const std::complex<double> phase = std::exp(std::complex<double>(0.0, phi));
    return 0.5 * (phase * (segment(std::conj(lambda)) - segment(lambda))).real();
  };

  // sin(n w tau) cos(wbar (tau - ta)) split into the two rotating components
  // r1 = wbar + n w and r2 = wbar - n w (entering as -r2 below).
  const double nw = static_cast<double>(mode_n) * w;
  const double phi = nw * ta;
  const double sum = integral(nw + wbar, phi) + integral(nw - wbar, phi);
  return 2.0 / (beam.mass_per_length * beam.span * wD) * (amplitude / 2.0) * sum;
}

ModalForcing moving_point_modal_force(std::function<double(double)> force, double t_begin,
                                      double t_end, double speed, const BeamModel& beam,
                                      int mode_n, double extra_frequency_hz) {
  ModalForcing f;
  f.t_begin = t_begin;
  f.t_end = t_end;
  const double span = beam.span;
  f.value = [force = std::move(force), speed, span, mode_n](double tau) {
    const double x = speed * tau;
    if (x < 0.0 || x > span) return 0.0;
    return force(tau) * std::sin(static_cast<double>(mode_n) * kPi * x / span);
  };
  f.max_frequency_hz =
      extra_frequency_hz + static_cast<double>(mode_n) * speed / (2.0 * beam.span);
  return f;
}

ModalForcing fixed_point_modal_force(std::function<double(double)> force, double t_begin,
                                     double t_end, double position, const BeamModel& beam,
                                     int mode_n, double extra_frequency_hz) {
  ModalForcing f;
  f.t_begin = t_begin;
  f.t_end = t_end;
  const double shape = beam.mode_shape(mode_n, position);
  f.value = [force = std::move(force), shape](double tau) { return force(tau) * shape; };
  f.max_frequency_hz = extra_frequency_hz;
  return f;
}

ModalForcing bump_modal_force(const BeamModel& beam, const track::HarmonicBump& bump,
                              double unsprung_mass, double speed, int mode_n) {
  auto forcing = moving_point_modal_force(
      [bump, unsprung_mass, speed](double tau) {
        return harmonic_force(bump, unsprung_mass, speed, tau);
      },
      bump.start / speed, bump.end / speed, speed, beam, mode_n,
      speed / bump.wavelength);
  return forcing;
}

std::vector<double> duhamel_quadrature(const BeamModel& beam, const ModalForcing& forcing,
                                       int mode_n, std::span<const double> t_grid) {
  beam.validate();
  if (mode_n < 1) throw std::invalid_argument("mode index must be >= 1");
  if (!forcing.value) throw std::invalid_argument("duhamel_quadrature: missing forcing");
  if (!std::is_sorted(t_grid.begin(), t_grid.end()))
    throw std::invalid_argument("duhamel_quadrature: t_grid must be sorted");

  const double wn = beam.natural_frequency(mode_n);
  const double wb = beam.damping_rate(mode_n);
  const double wD = beam.damped_frequency(mode_n);
  const double f_max = std::max(forcing.max_frequency_hz, wn / (2.0 * kPi));
  const double max_step = 1.0 / (20.0 * f_max);
  const double scale = 2.0 / (beam.mass_per_length * beam.span * wD);

  std::vector<double> out(t_grid.size(), 0.0);
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    const double upper = std::min(t, forcing.t_end);
    if (upper <= forcing.t_begin) continue;
    const double span_t = upper - forcing.t_begin;
    auto intervals = static_cast<std::size_t>(std::ceil(span_t / (0.5 * max_step)));
    intervals += intervals % 2;  // Simpson needs an even count
    intervals = std::max<std::size_t>(intervals, 2);
    const double h = span_t / static_cast<double>(intervals);
    const auto integrand = [&](double tau) {
      return forcing.value(tau) * std::exp(-wb * (t - tau)) * std::sin(wD * (t - tau));
    };
    double acc = integrand(forcing.t_begin) + integrand(upper);
    for (std::size_t k = 1; k < intervals; ++k) {
      const double tau = forcing.t_begin + h * static_cast<double>(k);
      acc += integrand(tau) * (k % 2 == 1 ? 4.0 : 2.0);
    }
    out[i] = scale * acc * h / 3.0;
  }
  return out;
}

std::vector<double> bridge_acceleration_closed_form(const BeamModel& beam,
                                                    const track::HarmonicBump& bump,
                                                    double unsprung_mass, double speed,
                                                    double sensor_x,
                                                    std::span<const double> t_grid) {
  beam.validate();
  if (!(sensor_x > 0.0) || !(sensor_x < beam.span))
    throw std::invalid_argument("sensor position must lie strictly inside the span");
  if (t_grid.size() < 2) throw std::invalid_argument("t_grid needs at least 2 points");
  const double dt = t_grid[1] - t_grid[0];
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (std::abs(t_grid[i] - t_grid[i - 1] - dt) > 1e-9 * dt)
      throw std::invalid_argument("t_grid must be uniform");

  // qddot via 4th-order central differences on an 8x refined grid; robust to
  // the piecewise structure of the analytic expression.
  const int refine = 8;
  const double h = dt / refine;
  const std::size_t nf = static_cast<std::size_t>(t_grid.size() - 1) * refine + 1 + 4;
  std::vector<double> out(t_grid.size(), 0.0);
  std::vector<double> q(nf);
  for (int n = 1; n <= beam.n_modes; ++n) {
    const double shape = beam.mode_shape(n, sensor_x);
    if (std::abs(shape) < 1e-15) continue;
    for (std::size_t j = 0; j < nf; ++j) {
      const double t = t_grid[0] + h * (static_cast<double>(j) - 2.0);
      q[j] = modal_response_closed_form(beam, bump, unsprung_mass, speed, n, t);
    }
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      const std::size_t j = 2 + i * refine;
      const double qdd = (-q[j - 2] + 16.0 * q[j - 1] - 30.0 * q[j] + 16.0 * q[j + 1] -
                          q[j + 2]) / (12.0 * h * h);
      out[i] += qdd * shape;
    }
  }
  return out;
}

AccelerationRecord simulate_train_passage(const BeamModel& beam, const TrainConfig& train,
                                          const track::TrackProfile& profile,
                                          const SensorLayout& sensors, double fs,
                                          const SimulateOptions& options) {
  beam.validate();
  train.validate();
  profile.validate();
  sensors.validate(beam);
  if (fs < 500.0) throw std::invalid_argument("sample rate must be >= 500 Hz");
  if (options.substeps < 1) throw std::invalid_argument("substeps must be >= 1");
  if (options.run_in < 0.0) throw std::invalid_argument("run_in must be >= 0");
  if (profile.origin > -options.run_in || profile.x_end() < beam.span + profile.grid_step)
    throw std::invalid_argument("profile must cover the span plus run-in");

  const double v = train.speed;
  const double t_end = (options.run_in + beam.span + train.length()) / v;
  const auto n_out = static_cast<std::size_t>(std::floor(t_end * fs)) + 1;
  const auto n_fine = (n_out - 1) * static_cast<std::size_t>(options.substeps) + 1;
  const double dt = 1.0 / (fs * options.substeps);

  const int n_modes = beam.n_modes;
  const auto n_sensors = sensors.positions.size();

  std::vector<double> omega(n_modes), omega_b(n_modes), k_mode(n_modes);
  for (int n = 1; n <= n_modes; ++n) {
    omega[n - 1] = beam.natural_frequency(n);
    omega_b[n - 1] = beam.damping_rate(n);
    k_mode[n - 1] = omega[n - 1] * omega[n - 1];
  }
  std::vector<double> shape(static_cast<std::size_t>(n_modes) * n_sensors);
  for (int n = 1; n <= n_modes; ++n)
    for (std::size_t s = 0; s < n_sensors; ++s)
      shape[static_cast<std::size_t>(n - 1) * n_sensors + s] =
          beam.mode_shape(n, sensors.positions[s]);

  std::vector<double> q(n_modes, 0.0), qd(n_modes, 0.0), qdd(n_modes, 0.0);
  std::vector<std::vector<double>> acc_fine(n_sensors, std::vector<double>(n_fine, 0.0));
  std::vector<std::vector<double>> disp_fine(n_sensors, std::vector<double>(n_fine, 0.0));

  const double force_scale = 2.0 / (beam.mass_per_length * beam.span);
  bool any_axle_entered = false;

  struct AxleState {
    double x = 0.0;
    double p = 0.0;
    bool on_span = false;
  };
  std::vector<AxleState> axle_state(train.axles.size());

  // Modal force at time t; with feedback the contact force subtracts the
  // unsprung inertia of the supplied beam acceleration state under each axle.
  const auto eval_axles = [&](double t, const std::vector<double>* qdd_feedback) {
    for (std::size_t j = 0; j < train.axles.size(); ++j) {
      const auto& axle = train.axles[j];
      auto& st = axle_state[j];
      st.x = v * t - options.run_in - axle.offset;
      st.on_span = st.x >= 0.0 && st.x <= beam.span;
      if (!st.on_span) continue;
      any_axle_entered = true;
      double p = axle.static_load +
                 axle.unsprung_mass * v * v * track::second_derivative(profile, st.x);
      if (qdd_feedback) {
        double ydd = 0.0;
        const double c1 = std::cos(kPi * st.x / beam.span);
        double s_prev = 0.0, s_cur = std::sin(kPi * st.x / beam.span);
        for (int n = 0; n < n_modes; ++n) {
          ydd += (*qdd_feedback)[static_cast<std::size_t>(n)] * s_cur;
          const double s_next = 2.0 * c1 * s_cur - s_prev;
          s_prev = s_cur;
          s_cur = s_next;
        }
        p -= axle.unsprung_mass * ydd;
      }
      st.p = p;
    }
  };

  std::vector<double> f_mode(n_modes);
  const auto modal_forces = [&]() {
    std::fill(f_mode.begin(), f_mode.end(), 0.0);
    for (const auto& st : axle_state) {
      if (!st.on_span) continue;
      const double theta = kPi * st.x / beam.span;
      const double c1 = std::cos(theta);
      double s_prev = 0.0, s_cur = std::sin(theta);
      for (int n = 0; n < n_modes; ++n) {
        f_mode[n] += force_scale * st.p * s_cur;
        const double s_next = 2.0 * c1 * s_cur - s_prev;
        s_prev = s_cur;
        s_cur = s_next;
      }
    }
  };

  const auto store = [&](std::size_t i) {
    for (std::size_t s = 0; s < n_sensors; ++s) {
      double a = 0.0, d = 0.0;
      for (int n = 0; n < n_modes; ++n) {
        const double sh = shape[static_cast<std::size_t>(n) * n_sensors + s];
        a += qdd[n] * sh;
        d += q[n] * sh;
      }
      acc_fine[s][i] = a;
      disp_fine[s][i] = d;
    }
  };

  eval_axles(0.0, nullptr);
  modal_forces();
  for (int n = 0; n < n_modes; ++n) qdd[n] = f_mode[n];
  store(0);

  std::vector<double> q_new(n_modes), qd_new(n_modes), qdd_new(n_modes);
  for (std::size_t i = 1; i < n_fine; ++i) {
    const double t = dt * static_cast<double>(i);
    const int passes = options.beam_feedback ? std::max(1, options.feedback_iterations) : 1;
    for (int pass = 0; pass < passes; ++pass) {
      // feedback passes re-evaluate forces against the provisional state
      const std::vector<double>* fb =
          options.beam_feedback ? (pass == 0 ? &qdd : &qdd_new) : nullptr;
      eval_axles(t, fb);
      modal_forces();
      // constant-average-acceleration step
      for (int n = 0; n < n_modes; ++n) {
        const double c = 2.0 * omega_b[n];
        const double k = k_mode[n];
        const double rhs = f_mode[n] - c * (qd[n] + 0.5 * dt * qdd[n]) -
                           k * (q[n] + dt * qd[n] + 0.25 * dt * dt * qdd[n]);
        qdd_new[n] = rhs / (1.0 + 0.5 * dt * c + 0.25 * dt * dt * k);
        qd_new[n] = qd[n] + 0.5 * dt * (qdd[n] + qdd_new[n]);
        q_new[n] = q[n] + dt * qd[n] + 0.25 * dt * dt * (qdd[n] + qdd_new[n]);
      }
    }
    q = q_new;
    qd = qd_new;
    qdd = qdd_new;
    store(i);
  }
  if (!any_axle_entered) throw std::runtime_error("no axle ever entered the span");

  AccelerationRecord rec;
  rec.sample_rate = fs;
  rec.t0 = 0.0;
  rec.speed = v;
  rec.run_in = options.run_in;
  rec.sensor_positions = sensors.positions;
  rec.accel.resize(n_sensors);
  rec.displacement.resize(n_sensors);
  for (std::size_t s = 0; s < n_sensors; ++s) {
    if (options.substeps == 1) {
      rec.accel[s] = std::move(acc_fine[s]);
      rec.displacement[s] = std::move(disp_fine[s]);
    } else {
      const double fs_fine = fs * options.substeps;
      rec.accel[s] = lowpass_decimate(acc_fine[s], fs_fine, 0.45 * fs, options.substeps,
                                      options.decimation_taps);
      rec.displacement[s] = lowpass_decimate(disp_fine[s], fs_fine, 0.45 * fs,
                                             options.substeps, options.decimation_taps);
    }
    for (double a : rec.accel[s])
      if (!std::isfinite(a) || std::abs(a) > 1e4)
        throw std::runtime_error("unstable response: check step size and configuration");
  }
  return rec;
}

SpatialSeries resample_spatial(const AccelerationRecord& record, double speed,
                               double spatial_step,
                               std::optional<std::pair<double, double>> range) {
  if (record.samples() < 2) throw std::invalid_argument("resample_spatial: record too short");
  if (!(speed > 0.0)) throw std::invalid_argument("resample_spatial: speed must be > 0");
  if (spatial_step < speed / record.sample_rate - 1e-12)
    throw std::invalid_argument("resample_spatial: spatial_step must be >= v/fs");

  const double h_lo = record.head_position(record.t0);
  const double h_hi =
      record.head_position(record.t0 + static_cast<double>(record.samples() - 1) /
                                            record.sample_rate);
  double lo = h_lo, hi = h_hi;
  if (range) {
    lo = range->first;
    hi = range->second;
    if (lo < h_lo - 1e-9 || hi > h_hi + 1e-9)
      throw std::out_of_range("resample_spatial: requested range outside record");
  }
  const auto k_lo = static_cast<long>(std::ceil(lo / spatial_step - 1e-9));
  const auto k_hi = static_cast<long>(std::floor(hi / spatial_step + 1e-9));
  if (k_hi < k_lo) throw std::invalid_argument("resample_spatial: empty output range");

  SpatialSeries out;
  out.spatial_step = spatial_step;
  out.origin = spatial_step * static_cast<double>(k_lo);
  out.sensor_positions = record.sensor_positions;
  out.accel.resize(record.accel.size());
  const auto count = static_cast<std::size_t>(k_hi - k_lo + 1);
  for (std::size_t s = 0; s < record.accel.size(); ++s) {
    out.accel[s].resize(count);
    for (std::size_t k = 0; k < count; ++k) {
      const double p = out.origin + spatial_step * static_cast<double>(k);
      const double t = (p + record.run_in) / speed;
      double idx = (t - record.t0) * record.sample_rate;
      idx = std::clamp(idx, 0.0, static_cast<double>(record.samples() - 1));
      const auto i0 = static_cast<std::size_t>(idx);
      const double frac = idx - static_cast<double>(i0);
      const double y0 = record.accel[s][i0];
      const double y1 = record.accel[s][std::min(i0 + 1, record.samples() - 1)];
      out.accel[s][k] = y0 + frac * (y1 - y0);
    }
  }
  return out;
}

}  // namespace tracksentinel::dynamics
