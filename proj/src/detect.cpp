#include "tracksentinel/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "tracksentinel/numerics.hpp"

namespace tracksentinel::detect {

using nlohmann::json;

BaselineStats calibrate_baseline(const std::vector<wavelet::IndexSeries>& runs,
                                 std::size_t min_runs) {
  if (runs.size() < min_runs)
    throw std::invalid_argument("calibrate_baseline: need at least " +
                                std::to_string(min_runs) + " baseline runs");
  const std::size_t n_sensors = runs.front().values.size();
  for (const auto& run : runs)
    if (run.values.size() != n_sensors)
      throw std::invalid_argument("calibrate_baseline: sensor-set mismatch across runs");

  BaselineStats stats;
  stats.runs = runs.size();
  stats.sensors.resize(n_sensors);
  for (std::size_t s = 0; s < n_sensors; ++s) {
    std::vector<double> pooled;
    for (const auto& run : runs)
      for (std::size_t i = 0; i < run.values[s].size(); ++i)
        if (run.interior[i]) pooled.push_back(run.values[s][i]);
    if (pooled.empty())
      throw std::invalid_argument("calibrate_baseline: no interior samples to pool");
    const auto ms = mean_std(pooled);
    stats.sensors[s] = {ms.mean, ms.stddev, ms.mean + 3.0 * ms.stddev};
    stats.pooled_samples = pooled.size();
  }
  return stats;
}

std::string stats_to_json(const BaselineStats& stats) {
  json j;
  j["runs"] = stats.runs;
  j["pooled_samples_per_sensor"] = stats.pooled_samples;
  j["sensors"] = json::array();
  for (std::size_t s = 0; s < stats.sensors.size(); ++s) {
    j["sensors"].push_back({{"id", s + 1},
                            {"mu", stats.sensors[s].mu},
                            {"sigma", stats.sensors[s].sigma},
                            {"threshold", stats.sensors[s].threshold}});
  }
  return j.dump(2) + "\n";
}

BaselineStats stats_from_json(const std::string& text) {
  const json j = json::parse(text);
  BaselineStats stats;
  stats.runs = j.value("runs", 0u);
  stats.pooled_samples = j.value("pooled_samples_per_sensor", 0u);
  for (const auto& s : j.at("sensors"))
    stats.sensors.push_back(
        {s.at("mu").get<double>(), s.at("sigma").get<double>(), s.at("threshold").get<double>()});
  return stats;
}

namespace {

void check_sensors(const wavelet::IndexSeries& index, const BaselineStats& stats) {
  if (index.values.size() != stats.sensors.size())
    throw std::invalid_argument("sensor count differs between index series and baseline");
}

}  // namespace

std::vector<bool> detect(const wavelet::IndexSeries& index, const BaselineStats& stats,
                         int debounce) {
  check_sensors(index, stats);
  if (debounce < 1) throw std::invalid_argument("detect: debounce must be >= 1");
  std::vector<bool> flags(index.values.size(), false);
  for (std::size_t s = 0; s < index.values.size(); ++s) {
    const double f = stats.sensors[s].threshold;
    int run = 0;
    for (std::size_t i = 0; i < index.values[s].size(); ++i) {
      if (!index.interior[i]) continue;
      run = index.values[s][i] > f ? run + 1 : 0;
      if (run >= debounce) {
        flags[s] = true;
        break;
      }
    }
  }
  return flags;
}

std::vector<double> mutation_degrees(const wavelet::IndexSeries& index,
                                     const BaselineStats& stats) {
  check_sensors(index, stats);
  std::vector<double> degrees(index.values.size(), 0.0);
  for (std::size_t s = 0; s < index.values.size(); ++s) {
    const double f = stats.sensors[s].threshold;
    if (!(f > 0.0)) throw std::invalid_argument("mutation_degrees: nonpositive threshold");
    double best = 0.0;
    for (std::size_t i = 0; i < index.values[s].size(); ++i)
      if (index.interior[i]) best = std::max(best, index.values[s][i] / f);
    degrees[s] = best;
  }
  return degrees;
}

std::vector<std::size_t> screen_sensors(const wavelet::IndexSeries& index,
                                        const BaselineStats& stats, double keep_ratio,
                                        int debounce) {
  const auto flags = detect(index, stats, debounce);
  if (std::none_of(flags.begin(), flags.end(), [](bool b) { return b; }))
    throw NoDetection("no irregularity detected: no sensor exceeds its threshold");
  const auto degrees = mutation_degrees(index, stats);
  double best = 0.0;
  for (std::size_t s = 0; s < flags.size(); ++s)
    if (flags[s]) best = std::max(best, degrees[s]);
  std::vector<std::size_t> selected;
  for (std::size_t s = 0; s < flags.size(); ++s)
    if (flags[s] && degrees[s] >= keep_ratio * best) selected.push_back(s);
  return selected;
}

PeakSet extract_peaks(const wavelet::IndexSeries& index, const BaselineStats& stats,
                      double min_separation, const std::vector<bool>& flags) {
  check_sensors(index, stats);
  if (flags.size() != index.values.size())
    throw std::invalid_argument("extract_peaks: flag count mismatch");
  PeakSet out;
  out.per_sensor.resize(index.values.size());

  // interior region is contiguous; find its bounds
  std::size_t lo = 0, hi = index.interior.size();
  while (lo < hi && !index.interior[lo]) ++lo;
  while (hi > lo && !index.interior[hi - 1]) --hi;
  if (hi - lo < 3) return out;
  const double step = index.positions.size() > 1 ? index.positions[1] - index.positions[0] : 1.0;

  for (std::size_t s = 0; s < index.values.size(); ++s) {
    if (!flags[s]) continue;
    const auto& v = index.values[s];
    const double f = stats.sensors[s].threshold;
    const double sigma = stats.sensors[s].sigma;

    struct Candidate {
      std::size_t idx;
      Peak peak;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = lo + 1; i + 1 < hi; ++i) {
      if (!(v[i] > v[i - 1]) || !(v[i] >= v[i + 1])) continue;  // plateau: keep first
      if (!(v[i] > f)) continue;
      // prominence: drop to the lowest saddle before higher ground on each side
      double left_min = v[i], right_min = v[i];
      for (std::size_t k = i; k > lo;) {
        --k;
        if (v[k] > v[i]) break;
        left_min = std::min(left_min, v[k]);
      }
      for (std::size_t k = i + 1; k < hi; ++k) {
        if (v[k] > v[i]) break;
        right_min = std::min(right_min, v[k]);
      }
      if (v[i] - std::max(left_min, right_min) < sigma) continue;
      // parabolic apex through the three samples around i
      const double denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
      double delta = 0.0;
      if (std::abs(denom) > 1e-300) delta = 0.5 * (v[i - 1] - v[i + 1]) / denom;
      delta = std::clamp(delta, -0.5, 0.5);
      Peak p;
      p.position = index.positions[i] + delta * step;
      p.value = v[i] - 0.25 * (v[i - 1] - v[i + 1]) * delta;
      p.exceedance = p.value / f;
      candidates.push_back({i, p});
    }
    // greedy separation filter, larger value first (ties toward smaller pos)
    std::stable_sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
      if (a.peak.value != b.peak.value) return a.peak.value > b.peak.value;
      return a.peak.position < b.peak.position;
    });
    std::vector<Peak> kept;
    for (const auto& c : candidates) {
      bool clear = true;
      for (const auto& k : kept)
        if (std::abs(k.position - c.peak.position) < min_separation) {
          clear = false;
          break;
        }
      if (clear) kept.push_back(c.peak);
    }
    std::sort(kept.begin(), kept.end(),
              [](const Peak& a, const Peak& b) { return a.position < b.position; });
    out.per_sensor[s] = std::move(kept);
  }
  return out;
}

std::vector<PeakChain> match_periodicity(const PeakSet& peaks, double carriage_length,
                                         double tol, int min_chain) {
  if (!(carriage_length > 0.0))
    throw std::invalid_argument("match_periodicity: carriage length must be > 0");
  if (!(tol > 0.0) || tol >= carriage_length / 4.0)
    throw std::invalid_argument("match_periodicity: tol must be in (0, carriage/4)");
  if (min_chain < 1) throw std::invalid_argument("match_periodicity: min_chain must be >= 1");

  std::vector<PeakChain> all;
  for (std::size_t s = 0; s < peaks.per_sensor.size(); ++s) {
    const auto& ps = peaks.per_sensor[s];
    std::vector<PeakChain> chains;
    for (std::size_t start = 0; start < ps.size(); ++start) {
      PeakChain chain;
      chain.sensor = s;
      chain.origin = ps[start].position;
      chain.members.push_back(ps[start]);
      for (int k = 1;; ++k) {
        const double expected = chain.origin + carriage_length * k;
        const Peak* best = nullptr;
        for (const auto& p : ps) {
          const double err = std::abs(p.position - expected);
          if (err > tol) continue;
          if (!best || err < std::abs(best->position - expected)) best = &p;
        }
        if (!best) break;
        chain.members.push_back(*best);
      }
      if (static_cast<int>(chain.members.size()) < min_chain) continue;
      chain.span_begin = chain.members.front().position;
      chain.span_end = chain.members.back().position;
      double sum = 0.0;
      for (const auto& m : chain.members) sum += m.exceedance;
      chain.mean_exceedance = sum / static_cast<double>(chain.members.size());
      chains.push_back(std::move(chain));
    }
    // collapse chains whose spans overlap by more than half onto the
    // earliest origin (later ones are phase-shifted echoes of one imprint)
    std::sort(chains.begin(), chains.end(),
              [](const PeakChain& a, const PeakChain& b) { return a.origin < b.origin; });
    std::vector<PeakChain> kept;
    for (auto& c : chains) {
      bool absorbed = false;
      for (const auto& k : kept) {
        const double lo = std::max(k.span_begin, c.span_begin);
        const double hi = std::min(k.span_end, c.span_end);
        const double overlap = std::max(0.0, hi - lo);
        const double shorter =
            std::max(1e-12, std::min(k.span_end - k.span_begin, c.span_end - c.span_begin));
        if (overlap / shorter > 0.5) {
          absorbed = true;
          break;
        }
      }
      if (!absorbed) kept.push_back(std::move(c));
    }
    for (auto& c : kept) all.push_back(std::move(c));
  }
  return all;
}

DetectionReport localize(const std::vector<PeakChain>& chains,
                         const std::vector<std::size_t>& selected, double span,
                         double carriage_length, double tol, double offset) {
  if (selected.empty())
    throw std::invalid_argument("localize: selected sensor set must not be empty");
  DetectionReport report;
  report.periodicity_interval = carriage_length;

  struct Candidate {
    double position;
    std::size_t sensor;
    std::size_t chain_len;
    double weight;
  };
  std::vector<Candidate> cands;
  for (const auto& c : chains) {
    if (std::find(selected.begin(), selected.end(), c.sensor) == selected.end()) continue;
    const double pos = c.origin - offset;
    if (pos <= 0.0 || pos >= span) continue;
    cands.push_back({pos, c.sensor, c.members.size(), c.mean_exceedance});
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.position != b.position) return a.position < b.position;
    return a.sensor < b.sensor;
  });

  std::size_t i = 0;
  while (i < cands.size()) {
    std::size_t j = i + 1;
    while (j < cands.size() && cands[j].position - cands[i].position <= tol) ++j;
    Estimate est;
    double wsum = 0.0, psum = 0.0;
    for (std::size_t k = i; k < j; ++k) {
      wsum += cands[k].weight;
      psum += cands[k].weight * cands[k].position;
      est.sensors.push_back(cands[k].sensor);
      est.chain_length = std::max(est.chain_length, cands[k].chain_len);
      est.confidence += cands[k].weight;
    }
    est.position = psum / wsum;
    est.confidence /= static_cast<double>(j - i);
    std::sort(est.sensors.begin(), est.sensors.end());
    est.sensors.erase(std::unique(est.sensors.begin(), est.sensors.end()), est.sensors.end());
    report.estimates.push_back(std::move(est));
    i = j;
  }
  report.localized = !report.estimates.empty();
  return report;
}

std::string report_to_json(const DetectionReport& report, const std::string& params_json) {
  json j;
  j["scenario"] = report.scenario;
  j["speed_kmh"] = report.speed_kmh;
  j["detected"] = report.detected;
  j["localized"] = report.localized;
  j["sensors"] = json::array();
  for (const auto& s : report.sensors)
    j["sensors"].push_back({{"id", s.sensor + 1},
                            {"flagged", s.flagged},
                            {"mutation_degree", s.mutation_degree}});
  j["selected"] = json::array();
  for (auto s : report.selected) j["selected"].push_back(s + 1);
  j["estimates"] = json::array();
  for (const auto& e : report.estimates) {
    json sensors = json::array();
    for (auto s : e.sensors) sensors.push_back(s + 1);
    j["estimates"].push_back({{"position_m", e.position},
                              {"sensors", sensors},
                              {"chain_len", e.chain_length},
                              {"confidence", e.confidence}});
  }
  j["periodicity_interval_m"] = report.periodicity_interval;
  j["params"] = json::parse(params_json);
  return j.dump(2) + "\n";
}

}  // namespace tracksentinel::detect
