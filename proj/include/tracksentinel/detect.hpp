#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "tracksentinel/wavelet.hpp"

namespace tracksentinel::detect {

struct SensorBaseline {
  double mu = 0.0;
  double sigma = 0.0;
  double threshold = 0.0;  // mu + 3 sigma
};

struct BaselineStats {
  std::vector<SensorBaseline> sensors;
  std::size_t runs = 0;
  std::size_t pooled_samples = 0;
};

// Pool interior index-1 samples across baseline runs; sample std (n-1).
BaselineStats calibrate_baseline(const std::vector<wavelet::IndexSeries>& runs,
                                 std::size_t min_runs = 10);

std::string stats_to_json(const BaselineStats& stats);
BaselineStats stats_from_json(const std::string& text);

// Sensor flagged when >= debounce consecutive interior samples exceed its
// threshold.
std::vector<bool> detect(const wavelet::IndexSeries& index, const BaselineStats& stats,
                         int debounce);

// max_b S_i(b) / F_i over the interior region.
std::vector<double> mutation_degrees(const wavelet::IndexSeries& index,
                                     const BaselineStats& stats);

// Raised when no sensor is flagged: nothing to screen or localize.
struct NoDetection : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flagged sensors whose mutation degree reaches keep_ratio of the best one.
std::vector<std::size_t> screen_sensors(const wavelet::IndexSeries& index,
                                        const BaselineStats& stats, double keep_ratio = 0.5,
                                        int debounce = 3);

struct Peak {
  double position = 0.0;
  double value = 0.0;
  double exceedance = 0.0;  // value / threshold
};

struct PeakSet {
  std::vector<std::vector<Peak>> per_sensor;  // sorted by position
};

// Local maxima of index-1 above threshold with prominence >= sigma and
// pairwise separation >= min_separation (larger peak wins), positions at the
// parabolic-interpolated apex. Unflagged sensors yield empty lists.
PeakSet extract_peaks(const wavelet::IndexSeries& index, const BaselineStats& stats,
                      double min_separation, const std::vector<bool>& flags);

struct PeakChain {
  std::size_t sensor = 0;
  double origin = 0.0;
  std::vector<Peak> members;  // ascending positions, origin + k * carriage
  double mean_exceedance = 0.0;
  double span_begin = 0.0;
  double span_end = 0.0;
};

// Greedy chaining at the carriage period: from each peak collect peaks at
// origin + k * carriage +- tol with no gaps; chains need >= min_chain
// members; chains whose spans overlap by more than half collapse to the
// earliest origin.
std::vector<PeakChain> match_periodicity(const PeakSet& peaks, double carriage_length,
                                         double tol, int min_chain = 3);

struct SensorVerdict {
  std::size_t sensor = 0;
  bool flagged = false;
  double mutation_degree = 0.0;
};

struct Estimate {
  double position = 0.0;
  std::vector<std::size_t> sensors;
  std::size_t chain_length = 0;
  double confidence = 0.0;  // mean exceedance of the supporting chains
};

struct DetectionReport {
  std::string scenario;
  double speed_kmh = 0.0;
  std::vector<SensorVerdict> sensors;
  std::vector<std::size_t> selected;
  std::vector<Estimate> estimates;
  double periodicity_interval = 0.0;
  bool detected = false;
  bool localized = false;
};

// Chain origins of selected sensors (minus the systematic offset) become
// estimates; origins from different sensors within tol fuse by
// exceedance-weighted averaging. Estimates outside (0, span) are dropped.
DetectionReport localize(const std::vector<PeakChain>& chains,
                         const std::vector<std::size_t>& selected, double span,
                         double carriage_length, double tol, double offset = 0.0);

std::string report_to_json(const DetectionReport& report, const std::string& params_json = "{}");

}  // namespace tracksentinel::detect
