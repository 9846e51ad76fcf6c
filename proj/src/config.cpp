#include "tracksentinel/config.hpp"

#include <json.hpp>

#include "tracksentinel/io.hpp"

namespace tracksentinel::config {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config." + path + ": " + what);
}

double num(const json& j, const std::string& path, const char* key, double def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_number()) fail(path + "." + key, "expected a number");
  return j.at(key).get<double>();
}

int integer(const json& j, const std::string& path, const char* key, int def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_number_integer()) fail(path + "." + key, "expected an integer");
  return j.at(key).get<int>();
}

std::string str(const json& j, const std::string& path, const char* key, std::string def) {
  if (!j.contains(key)) return def;
  if (!j.at(key).is_string()) fail(path + "." + key, "expected a string");
  return j.at(key).get<std::string>();
}

}  // namespace

dynamics::TrainConfig ScenarioConfig::make_train(double speed_mps) const {
  dynamics::TrainConfig t;
  t.speed = speed_mps;
  t.carriage_length = train.carriage_length_m;
  for (int car = 0; car < train.cars; ++car)
    for (double d : train.per_car_axle_offsets_m)
      t.axles.push_back({train.carriage_length_m * car + d, train.axle_load_n,
                         train.unsprung_mass_kg});
  t.validate();
  return t;
}

dynamics::SensorLayout ScenarioConfig::make_sensors() const {
  if (sensors_m.empty()) return dynamics::default_sensors(beam);
  dynamics::SensorLayout layout{sensors_m};
  layout.validate(beam);
  return layout;
}

void ScenarioConfig::validate() const {
  try {
    beam.validate();
  } catch (const std::invalid_argument& e) {
    fail("beam", e.what());
  }
  if (fs_hz < 500.0) fail("fs_hz", "must be >= 500");
  if (run_in_m < 0.0) fail("run_in_m", "must be >= 0");
  if (train.cars < 1) fail("train.cars", "must be >= 1");
  if (!(train.carriage_length_m > 0.0)) fail("train.carriage_length_m", "must be > 0");
  if (train.per_car_axle_offsets_m.empty())
    fail("train.per_car_axle_offsets_m", "must not be empty");
  for (double d : train.per_car_axle_offsets_m)
    if (d < 0.0 || d >= train.carriage_length_m)
      fail("train.per_car_axle_offsets_m", "offsets must lie in [0, carriage_length)");
  if (train.axle_load_n < 0.0) fail("train.axle_load_n", "must be >= 0");
  if (train.unsprung_mass_kg < 0.0) fail("train.unsprung_mass_kg", "must be >= 0");
  try {
    make_sensors();
  } catch (const std::invalid_argument& e) {
    fail("sensors_m", e.what());
  }
  if (!(track.grid_step_m > 0.0)) fail("track.grid_step_m", "must be > 0");
  if (!(track.wavelength_min_m > 0.0) || !(track.wavelength_max_m > track.wavelength_min_m))
    fail("track.random", "wavelength band must be positive and ordered");
  for (std::size_t i = 0; i < track.bumps.size(); ++i) {
    const auto& b = track.bumps[i];
    try {
      track::make_bump(b.amplitude_mm * 1e-3, b.wavelength_m, b.start_m,
                       b.end_m == 0.0 ? 0.0 : b.end_m);
    } catch (const std::invalid_argument& e) {
      fail("track.bumps[" + std::to_string(i) + "]", e.what());
    }
    if (b.start_m < 0.0 || b.start_m >= beam.span)
      fail("track.bumps[" + std::to_string(i) + "].start_m", "must lie on the span");
  }
  if (speed.sweep) {
    if (!(speed.min_kmh < speed.max_kmh)) fail("speed.sweep", "min must be < max");
    if (speed.count < 1) fail("speed.sweep.count", "must be >= 1");
    if (speed.distribution != "uniform")
      fail("speed.sweep.distribution", "only 'uniform' is supported");
  } else if (!(speed.fixed_kmh > 0.0)) {
    fail("speed.fixed_kmh", "must be > 0");
  }
  const auto& p = pipeline;
  if (!(p.spatial_step_m > 0.0)) fail("pipeline.spatial_step_m", "must be > 0");
  const double v_max = (speed.sweep ? speed.max_kmh : speed.fixed_kmh) / 3.6;
  if (p.spatial_step_m < v_max / fs_hz)
    fail("pipeline.spatial_step_m", "must be >= v_max/fs so no upsampling is needed");
  if (!(p.band_lo_per_m > 0.0) || !(p.band_hi_per_m > p.band_lo_per_m))
    fail("pipeline.spatial_band_per_m", "band must be positive and ordered");
  if (p.band_hi_per_m > 0.5 / p.spatial_step_m)
    fail("pipeline.spatial_band_per_m", "band exceeds the spatial Nyquist frequency");
  if (p.n_scales < 8) fail("pipeline.n_scales", "must be >= 8");
  wavelet_kind_from_name(p.wavelet);
  if (p.debounce < 1) fail("pipeline.debounce", "must be >= 1");
  if (!(p.keep_ratio > 0.0) || p.keep_ratio > 1.0) fail("pipeline.keep_ratio", "must be in (0, 1]");
  if (!(p.tol_m > 0.0) || p.tol_m >= train.carriage_length_m / 4.0)
    fail("pipeline.tol_m", "must be in (0, carriage_length/4)");
  if (p.min_chain < 1) fail("pipeline.min_chain", "must be >= 1");
  if (p.min_separation_m < 0.0) fail("pipeline.min_separation_m", "must be >= 0");
}

wavelet::WaveletKind wavelet_kind_from_name(const std::string& name) {
  if (name == "gauss1") return wavelet::WaveletKind::gauss1;
  if (name == "gauss2") return wavelet::WaveletKind::gauss2;
  throw ConfigError("config.pipeline.wavelet: unknown wavelet '" + name +
                    "' (expected gauss1 or gauss2)");
}

ScenarioConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  ScenarioConfig cfg;
  cfg.scenario = str(j, "", "scenario", cfg.scenario);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer()) fail("seed", "expected an integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  cfg.out_dir = str(j, "", "out_dir", cfg.out_dir);
  cfg.fs_hz = num(j, "", "fs_hz", cfg.fs_hz);
  cfg.run_in_m = num(j, "", "run_in_m", cfg.run_in_m);

  if (j.contains("beam")) {
    const auto& b = j.at("beam");
    cfg.beam.span = num(b, "beam", "span_m", cfg.beam.span);
    cfg.beam.mass_per_length = num(b, "beam", "mass_per_length_kg_per_m", cfg.beam.mass_per_length);
    cfg.beam.flexural_rigidity = num(b, "beam", "flexural_rigidity_nm2", cfg.beam.flexural_rigidity);
    cfg.beam.n_modes = integer(b, "beam", "n_modes", cfg.beam.n_modes);
    if (b.contains("damping_ratios")) {
      if (!b.at("damping_ratios").is_array()) fail("beam.damping_ratios", "expected an array");
      cfg.beam.damping_ratios.clear();
      for (const auto& v : b.at("damping_ratios")) cfg.beam.damping_ratios.push_back(v.get<double>());
    } else if (b.contains("damping_ratio")) {
      cfg.beam.damping_ratios = {num(b, "beam", "damping_ratio", 0.02)};
    }
  }

  if (j.contains("train")) {
    const auto& t = j.at("train");
    cfg.train.cars = integer(t, "train", "cars", cfg.train.cars);
    cfg.train.carriage_length_m = num(t, "train", "carriage_length_m", cfg.train.carriage_length_m);
    cfg.train.axle_load_n = num(t, "train", "axle_load_n", cfg.train.axle_load_n);
    cfg.train.unsprung_mass_kg = num(t, "train", "unsprung_mass_kg", cfg.train.unsprung_mass_kg);
    if (t.contains("per_car_axle_offsets_m")) {
      if (!t.at("per_car_axle_offsets_m").is_array())
        fail("train.per_car_axle_offsets_m", "expected an array");
      cfg.train.per_car_axle_offsets_m.clear();
      for (const auto& v : t.at("per_car_axle_offsets_m"))
        cfg.train.per_car_axle_offsets_m.push_back(v.get<double>());
    }
  }

  if (j.contains("sensors_m")) {
    if (!j.at("sensors_m").is_array()) fail("sensors_m", "expected an array");
    for (const auto& v : j.at("sensors_m")) cfg.sensors_m.push_back(v.get<double>());
  }

  if (j.contains("track")) {
    const auto& t = j.at("track");
    cfg.track.grid_step_m = num(t, "track", "grid_step_m", cfg.track.grid_step_m);
    if (t.contains("random")) {
      const auto& r = t.at("random");
      if (r.contains("enabled")) cfg.track.random_enabled = r.at("enabled").get<bool>();
      cfg.track.rms_mm = num(r, "track.random", "rms_mm", cfg.track.rms_mm);
      cfg.track.psd_csv = str(r, "track.random", "psd_csv", cfg.track.psd_csv);
      if (r.contains("wavelength_band_m")) {
        const auto& band = r.at("wavelength_band_m");
        if (!band.is_array() || band.size() != 2)
          fail("track.random.wavelength_band_m", "expected [min, max]");
        cfg.track.wavelength_min_m = band[0].get<double>();
        cfg.track.wavelength_max_m = band[1].get<double>();
      }
    }
    if (t.contains("bumps")) {
      if (!t.at("bumps").is_array()) fail("track.bumps", "expected an array");
      for (const auto& b : t.at("bumps")) {
        BumpSpec spec;
        spec.amplitude_mm = num(b, "track.bumps[]", "amplitude_mm", spec.amplitude_mm);
        spec.wavelength_m = num(b, "track.bumps[]", "wavelength_m", spec.wavelength_m);
        spec.start_m = num(b, "track.bumps[]", "start_m", spec.start_m);
        spec.end_m = num(b, "track.bumps[]", "end_m", spec.end_m);
        cfg.track.bumps.push_back(spec);
      }
    }
  }

  if (j.contains("speed")) {
    const auto& s = j.at("speed");
    if (s.contains("sweep")) {
      cfg.speed.sweep = true;
      const auto& w = s.at("sweep");
      cfg.speed.min_kmh = num(w, "speed.sweep", "min_kmh", cfg.speed.min_kmh);
      cfg.speed.max_kmh = num(w, "speed.sweep", "max_kmh", cfg.speed.max_kmh);
      cfg.speed.count = integer(w, "speed.sweep", "count", cfg.speed.count);
      cfg.speed.distribution = str(w, "speed.sweep", "distribution", cfg.speed.distribution);
    } else {
      cfg.speed.fixed_kmh = num(s, "speed", "fixed_kmh", cfg.speed.fixed_kmh);
    }
  }

  if (j.contains("pipeline")) {
    const auto& p = j.at("pipeline");
    cfg.pipeline.spatial_step_m = num(p, "pipeline", "spatial_step_m", cfg.pipeline.spatial_step_m);
    if (p.contains("spatial_band_per_m")) {
      const auto& band = p.at("spatial_band_per_m");
      if (!band.is_array() || band.size() != 2)
        fail("pipeline.spatial_band_per_m", "expected [lo, hi]");
      cfg.pipeline.band_lo_per_m = band[0].get<double>();
      cfg.pipeline.band_hi_per_m = band[1].get<double>();
    }
    cfg.pipeline.n_scales = integer(p, "pipeline", "n_scales", cfg.pipeline.n_scales);
    cfg.pipeline.wavelet = str(p, "pipeline", "wavelet", cfg.pipeline.wavelet);
    cfg.pipeline.debounce = integer(p, "pipeline", "debounce", cfg.pipeline.debounce);
    cfg.pipeline.keep_ratio = num(p, "pipeline", "keep_ratio", cfg.pipeline.keep_ratio);
    cfg.pipeline.tol_m = num(p, "pipeline", "tol_m", cfg.pipeline.tol_m);
    cfg.pipeline.min_chain = integer(p, "pipeline", "min_chain", cfg.pipeline.min_chain);
    cfg.pipeline.min_separation_m =
        num(p, "pipeline", "min_separation_m", cfg.pipeline.min_separation_m);
    cfg.pipeline.offset_m = num(p, "pipeline", "offset_m", cfg.pipeline.offset_m);
  }

  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw ConfigError("config: file not found: " + path.string());
  return config_from_json_text(io::read_text(path));
}

std::string config_to_json_text(const ScenarioConfig& cfg) {
  json j;
  j["scenario"] = cfg.scenario;
  j["seed"] = cfg.seed;
  j["out_dir"] = cfg.out_dir;
  j["fs_hz"] = cfg.fs_hz;
  j["run_in_m"] = cfg.run_in_m;
  j["beam"] = {{"span_m", cfg.beam.span},
               {"mass_per_length_kg_per_m", cfg.beam.mass_per_length},
               {"flexural_rigidity_nm2", cfg.beam.flexural_rigidity},
               {"damping_ratios", cfg.beam.damping_ratios},
               {"n_modes", cfg.beam.n_modes}};
  j["train"] = {{"cars", cfg.train.cars},
                {"carriage_length_m", cfg.train.carriage_length_m},
                {"per_car_axle_offsets_m", cfg.train.per_car_axle_offsets_m},
                {"axle_load_n", cfg.train.axle_load_n},
                {"unsprung_mass_kg", cfg.train.unsprung_mass_kg}};
  j["sensors_m"] = cfg.make_sensors().positions;
  j["track"]["grid_step_m"] = cfg.track.grid_step_m;
  j["track"]["random"] = {{"enabled", cfg.track.random_enabled},
                          {"rms_mm", cfg.track.rms_mm},
                          {"wavelength_band_m",
                           {cfg.track.wavelength_min_m, cfg.track.wavelength_max_m}},
                          {"psd_csv", cfg.track.psd_csv}};
  j["track"]["bumps"] = json::array();
  for (const auto& b : cfg.track.bumps)
    j["track"]["bumps"].push_back({{"amplitude_mm", b.amplitude_mm},
                                   {"wavelength_m", b.wavelength_m},
                                   {"start_m", b.start_m},
                                   {"end_m", b.end_m}});
  if (cfg.speed.sweep) {
    j["speed"]["sweep"] = {{"min_kmh", cfg.speed.min_kmh},
                           {"max_kmh", cfg.speed.max_kmh},
                           {"count", cfg.speed.count},
                           {"distribution", cfg.speed.distribution}};
  } else {
    j["speed"]["fixed_kmh"] = cfg.speed.fixed_kmh;
  }
  j["pipeline"] = {{"spatial_step_m", cfg.pipeline.spatial_step_m},
                   {"spatial_band_per_m",
                    {cfg.pipeline.band_lo_per_m, cfg.pipeline.band_hi_per_m}},
                   {"n_scales", cfg.pipeline.n_scales},
                   {"wavelet", cfg.pipeline.wavelet},
                   {"debounce", cfg.pipeline.debounce},
                   {"keep_ratio", cfg.pipeline.keep_ratio},
                   {"tol_m", cfg.pipeline.tol_m},
                   {"min_chain", cfg.pipeline.min_chain},
                   {"min_separation_m", cfg.pipeline.min_separation_m},
                   {"offset_m", cfg.pipeline.offset_m}};
  return j.dump(2) + "\n";
}

}  // namespace tracksentinel::config
