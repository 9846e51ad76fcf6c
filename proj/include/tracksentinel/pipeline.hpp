#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tracksentinel/config.hpp"
#include "tracksentinel/detect.hpp"
#include "tracksentinel/dynamics.hpp"
#include "tracksentinel/track.hpp"
#include "tracksentinel/wavelet.hpp"

namespace tracksentinel::pipeline {

// Raised when calibration is attempted on a config that contains bumps.
struct ContaminatedBaseline : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Damaged-track profile for one run: seeded random roughness plus the
// configured bumps, covering the approach and the span.
track::TrackProfile build_profile(const config::ScenarioConfig& cfg, std::uint64_t seed);

// Speeds for the scenario, m/s. Sweep samples are drawn per-index from the
// master seed (counter scheme), so each run is re-derivable in isolation.
std::vector<double> sample_speeds_mps(const config::ScenarioConfig& cfg);
std::uint64_t run_seed(const config::ScenarioConfig& cfg, std::size_t run_index);

struct RunResult {
  std::uint64_t seed = 0;
  double speed_mps = 0.0;
  dynamics::AccelerationRecord record;
  dynamics::SpatialSeries spatial;
  wavelet::IndexSeries index1;
};

// track -> dynamics -> resample -> wavelet for one speed/seed.
RunResult run_once(const config::ScenarioConfig& cfg, double speed_mps, std::uint64_t seed);

struct AnalysisResult {
  detect::DetectionReport report;
  detect::PeakSet peaks;
  std::vector<detect::PeakChain> chains;
};

AnalysisResult analyze(const config::ScenarioConfig& cfg, const wavelet::IndexSeries& index1,
                       double speed_mps, const detect::BaselineStats& stats);

void write_run_artifacts(const std::filesystem::path& dir, const config::ScenarioConfig& cfg,
                         const RunResult& run, const AnalysisResult* analysis);

// Number of worker threads: explicit --jobs, overridden by the
// TRACK_SENTINEL_JOBS environment variable; 0 means all cores.
int resolve_jobs(int jobs_flag);

struct SweepOutcome {
  std::size_t runs = 0;
  std::size_t detections = 0;
  std::filesystem::path summary_path;
};

// Full scenario execution: per-run artifacts plus a sweep summary with the
// detection rate and localization error statistics. `stats` enables the
// detection stage.
SweepOutcome run_scenario(const config::ScenarioConfig& cfg,
                          const detect::BaselineStats* stats, int jobs = 1);

// n baseline runs (config must be bump-free), pooled into BaselineStats.
detect::BaselineStats calibrate(const config::ScenarioConfig& cfg, std::size_t n_runs,
                                int jobs = 1);

// Re-run the detection stage for an existing run directory.
detect::DetectionReport detect_run_dir(const std::filesystem::path& run_dir,
                                       const detect::BaselineStats& stats);

// Plot bundles: profile, accel-spatial, spectrum, scalogram, index1, peaks.
void emit_plot_data(const std::filesystem::path& run_dir, const std::string& kind);

}  // namespace tracksentinel::pipeline
