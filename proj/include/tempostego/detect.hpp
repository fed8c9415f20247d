#pragma once

// Blind steganalysis: flag tempo-modulated tracks without knowing the key.
//
// The statistic works on the phi=1 tempo track. A clean constant-tempo
// recording keeps every unit tempo within tracker jitter of the median; a
// modulated one shows a deviating fraction of units whose deviations cluster
// at one magnitude (the symmetric +/-delta levels). The score blends those
// two fingerprints with equal weight.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tempostego/audio.hpp"
#include "tempostego/errors.hpp"
#include "tempostego/extract.hpp"
#include "tempostego/track.hpp"

namespace tempostego {

enum class Verdict { Clean, Stego, Inconclusive };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Clean:
      return "CLEAN";
    case Verdict::Stego:
      return "STEGO";
    default:
      return "INCONCLUSIVE";
  }
}

struct DetectorConfig {
  // A unit deviates when |tempo - median| exceeds this fraction of the
  // median: half the smallest interesting delta/X, comfortably above
  // tracker jitter on percussive material. Calibrate with batch_evaluate.
  double deviation_gate = 0.0025;
  double stego_threshold = 0.6;
  double clean_threshold = 0.3;
  double ratio_scale = 0.2;          // deviation_ratio saturating this -> 1
  double bimodality_tolerance = 0.2; // +/-20% around the estimated delta
  std::size_t min_beats = 16;
  double histogram_bin_bpm = 0.25;
  TrackerConfig tracker{};
};

struct DetectionReport {
  Verdict verdict = Verdict::Inconclusive;
  double score = 0.0;
  std::optional<double> estimated_delta_bpm;
  double deviation_ratio = 0.0;
  double median_tempo_bpm = 0.0;
  std::size_t unit_count = 0;
  std::vector<std::pair<double, std::size_t>> unit_tempo_histogram;
};

inline DetectionReport detect(const AudioBuffer& audio,
                              const DetectorConfig& cfg = {}) {
  const BeatGrid grid = track_beats(audio, cfg.tracker);
  if (grid.size() < cfg.min_beats) throw TooFewBeats(grid.size(), cfg.min_beats);
  const auto tempi = unit_tempi(grid, 1);

  std::vector<double> values;
  values.reserve(tempi.size());
  for (const auto& [start, tempo] : tempi) values.push_back(tempo);
  std::vector<double> sorted = values;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                   sorted.end());
  const double median = sorted[sorted.size() / 2];

  std::vector<double> deviations;
  for (double v : values) {
    const double dev = std::abs(v - median);
    if (dev > cfg.deviation_gate * median) deviations.push_back(dev);
  }

  DetectionReport report;
  report.unit_count = values.size();
  report.median_tempo_bpm = median;
  report.deviation_ratio =
      static_cast<double>(deviations.size()) / values.size();

  double bimodality = 0.0;
  if (!deviations.empty()) {
    std::vector<double> devs = deviations;
    std::nth_element(devs.begin(), devs.begin() + devs.size() / 2, devs.end());
    const double est = devs[devs.size() / 2];
    report.estimated_delta_bpm = est;
    std::size_t near = 0;
    for (double d : deviations)
      if (std::abs(d - est) <= cfg.bimodality_tolerance * est) ++near;
    bimodality = static_cast<double>(near) / deviations.size();
  }

  report.score = 0.5 * std::min(1.0, report.deviation_ratio / cfg.ratio_scale) +
                 0.5 * bimodality;
  if (report.score >= cfg.stego_threshold)
    report.verdict = Verdict::Stego;
  else if (report.score <= cfg.clean_threshold)
    report.verdict = Verdict::Clean;
  else
    report.verdict = Verdict::Inconclusive;

  // Histogram of unit tempi in fixed-width bins.
  const double w = cfg.histogram_bin_bpm;
  const double lo = std::floor(*std::min_element(values.begin(), values.end()) / w) * w;
  const double hi = *std::max_element(values.begin(), values.end());
  const auto bins = static_cast<std::size_t>(std::floor((hi - lo) / w)) + 1;
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>(std::floor((v - lo) / w));
    if (b >= bins) b = bins - 1;
    ++counts[b];
  }
  for (std::size_t b = 0; b < bins; ++b)
    report.unit_tempo_histogram.emplace_back(lo + b * w, counts[b]);
  return report;
}

// Key/value rendering with the histogram as bin_start,count rows.
inline std::string detection_report_text(const DetectionReport& report) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(6);
  out << "verdict=" << verdict_name(report.verdict) << '\n'
      << "score=" << report.score << '\n'
      << "deviation_ratio=" << report.deviation_ratio << '\n'
      << "median_tempo_bpm=" << report.median_tempo_bpm << '\n'
      << "unit_count=" << report.unit_count << '\n';
  if (report.estimated_delta_bpm)
    out << "estimated_delta_bpm=" << *report.estimated_delta_bpm << '\n';
  out << "histogram:\n";
  for (const auto& [start, count] : report.unit_tempo_histogram)
    out << start << ',' << count << '\n';
  return out.str();
}

struct RocPoint {
  double threshold = 0.0;
  double false_positive_rate = 0.0;
  double true_positive_rate = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

// ROC over raw scores: a sample is called stego when score >= threshold.
inline RocCurve evaluate_scores(const std::vector<double>& clean_scores,
                                const std::vector<double>& stego_scores) {
  if (clean_scores.empty()) throw EmptySet("clean");
  if (stego_scores.empty()) throw EmptySet("stego");

  std::vector<double> thresholds;
  thresholds.reserve(clean_scores.size() + stego_scores.size() + 2);
  thresholds.insert(thresholds.end(), clean_scores.begin(), clean_scores.end());
  thresholds.insert(thresholds.end(), stego_scores.begin(), stego_scores.end());
  thresholds.push_back(0.0);
  thresholds.push_back(1.0);
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  RocCurve curve;
  curve.points.push_back({std::nextafter(thresholds.front(), 2.0), 0.0, 0.0});
  for (double t : thresholds) {
    RocPoint p;
    p.threshold = t;
    for (double s : clean_scores)
      if (s >= t) p.false_positive_rate += 1.0;
    for (double s : stego_scores)
      if (s >= t) p.true_positive_rate += 1.0;
    p.false_positive_rate /= clean_scores.size();
    p.true_positive_rate /= stego_scores.size();
    curve.points.push_back(p);
  }
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const RocPoint& a = curve.points[i - 1];
    const RocPoint& b = curve.points[i];
    curve.auc += (b.false_positive_rate - a.false_positive_rate) *
                 (a.true_positive_rate + b.true_positive_rate) / 2.0;
  }
  return curve;
}

// Runs the detector over both corpora and evaluates separability.
inline RocCurve batch_evaluate(const std::vector<AudioBuffer>& clean_set,
                               const std::vector<AudioBuffer>& stego_set,
                               const DetectorConfig& cfg = {}) {
  if (clean_set.empty()) throw EmptySet("clean");
  if (stego_set.empty()) throw EmptySet("stego");
  std::vector<double> clean_scores, stego_scores;
  clean_scores.reserve(clean_set.size());
  stego_scores.reserve(stego_set.size());
  for (const AudioBuffer& a : clean_set) clean_scores.push_back(detect(a, cfg).score);
  for (const AudioBuffer& a : stego_set) stego_scores.push_back(detect(a, cfg).score);
  return evaluate_scores(clean_scores, stego_scores);
}

}  // namespace tempostego
