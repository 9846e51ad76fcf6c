#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "tracksentinel/dynamics.hpp"
#include "tracksentinel/track.hpp"
#include "tracksentinel/wavelet.hpp"

namespace tracksentinel::config {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SpeedPolicy {
  bool sweep = false;
  double fixed_kmh = 200.0;
  double min_kmh = 200.0;
  double max_kmh = 250.0;
  int count = 1;
  std::string distribution = "uniform";
};

struct BumpSpec {
  double amplitude_mm = 1.0;
  double wavelength_m = 0.5;
  double start_m = 0.0;
  double end_m = 0.0;  // 0 = one period
};

struct TrackSection {
  double grid_step_m = 0.01;
  bool random_enabled = true;
  double rms_mm = 1.0;  // default power-law table amplitude
  double wavelength_min_m = 1.0;
  double wavelength_max_m = 120.0;
  std::string psd_csv;  // optional external table
  std::vector<BumpSpec> bumps;
};

struct TrainSection {
  int cars = 8;
  double carriage_length_m = 25.0;
  std::vector<double> per_car_axle_offsets_m = {0.0, 2.5, 17.5, 20.0};
  double axle_load_n = 1.4e5;
  double unsprung_mass_kg = 1200.0;
};

struct PipelineParams {
  double spatial_step_m = 0.15;
  double band_lo_per_m = 0.3;
  double band_hi_per_m = 2.8;
  int n_scales = 48;
  std::string wavelet = "gauss1";
  int debounce = 3;
  double keep_ratio = 0.5;
  double tol_m = 1.5;
  int min_chain = 3;
  double min_separation_m = 0.0;  // 0 = carriage_length / 2
  double offset_m = 0.0;
};

struct ScenarioConfig {
  std::string scenario = "unnamed";
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  double fs_hz = 500.0;
  double run_in_m = 10.0;
  dynamics::BeamModel beam;
  TrainSection train;
  std::vector<double> sensors_m;  // empty = default layout
  TrackSection track;
  SpeedPolicy speed;
  PipelineParams pipeline;

  dynamics::TrainConfig make_train(double speed_mps) const;
  dynamics::SensorLayout make_sensors() const;
  double min_separation() const {
    return pipeline.min_separation_m > 0.0 ? pipeline.min_separation_m
                                           : train.carriage_length_m / 2.0;
  }
  void validate() const;
};

ScenarioConfig load_config(const std::filesystem::path& path);
ScenarioConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ScenarioConfig& cfg);

wavelet::WaveletKind wavelet_kind_from_name(const std::string& name);

}  // namespace tracksentinel::config
