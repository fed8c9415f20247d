#pragma once

// Blind beat tracking: STFT spectral flux -> onset picking -> beat grid.
//
// The flux stage finds onsets at hop resolution (~12 ms at the defaults).
// That is fine for locating beats but nowhere near enough to resolve a 1 bpm
// tempo step over a single beat, so the composed track_beats() pipeline
// refines each onset to the attack foot of the local amplitude envelope,
// which on percussive material is accurate to well under a millisecond and,
// being the same waveform feature at every beat, cancels out of inter-beat
// intervals entirely.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "tempostego/audio.hpp"
#include "tempostego/errors.hpp"
#include "tempostego/fft.hpp"

namespace tempostego {

struct OnsetFunction {
  std::vector<double> frame_times_s;  // window-center timestamps
  std::vector<double> flux_values;
  double frame_interval_s = 0.0;
};

struct BeatGrid {
  std::vector<double> beat_times_s;  // strictly increasing
  double source_duration_s = 0.0;

  std::size_t size() const { return beat_times_s.size(); }
};

struct TrackerConfig {
  int window = 2048;
  int hop = 512;
  bool refine_onsets = true;
  double min_onset_spacing_s = 0.05;
};

// Half-wave rectified spectral flux over a Hann-windowed magnitude STFT.
// First frame's flux is 0 by definition.
inline OnsetFunction spectral_flux(const AudioBuffer& audio, int window = 2048,
                                   int hop = 512) {
  if (window < 4 || !fft::is_power_of_two(static_cast<std::size_t>(window)))
    throw InvalidParams("window must be a power of two");
  if (hop < 1 || hop > window) throw InvalidParams("hop must be in [1, window]");

  const std::vector<float> mono = audio.downmixed();
  const std::size_t n = mono.size();
  if (n < static_cast<std::size_t>(window + hop))
    throw AudioTooShort("need at least two STFT frames");
  const std::size_t frames = (n - window) / hop + 1;

  std::vector<double> hann(window);
  for (int i = 0; i < window; ++i)
    hann[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / window);

  fft::RealFft plan(static_cast<std::size_t>(window));
  std::vector<double> frame(window);
  std::vector<std::complex<double>> spectrum;
  std::vector<double> mag_prev(window / 2 + 1, 0.0);
  std::vector<double> mag(window / 2 + 1, 0.0);

  OnsetFunction out;
  out.frame_interval_s = static_cast<double>(hop) / audio.sample_rate;
  out.frame_times_s.reserve(frames);
  out.flux_values.reserve(frames);

  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t start = f * hop;
    for (int i = 0; i < window; ++i)
      frame[i] = hann[i] * mono[start + i];
    plan.transform(frame.data(), spectrum);
    for (std::size_t b = 0; b < mag.size(); ++b) mag[b] = std::abs(spectrum[b]);

    double flux = 0.0;
    if (f > 0) {
      for (std::size_t b = 0; b < mag.size(); ++b)
        flux += std::max(0.0, mag[b] - mag_prev[b]);
    }
    out.frame_times_s.push_back((start + window / 2.0) / audio.sample_rate);
    out.flux_values.push_back(flux);
    mag.swap(mag_prev);
  }
  return out;
}

// Frames that are local flux maxima over a +/-3 frame neighborhood and exceed
// mean + 1.5*stddev of the flux in a centered one-second window. Onsets
// closer than `min_spacing_s` keep only the larger peak.
inline std::vector<double> pick_onsets(const OnsetFunction& onset,
                                       double min_spacing_s = 0.05) {
  const std::vector<double>& flux = onset.flux_values;
  const std::size_t n = flux.size();
  if (n == 0) throw InvalidParams("empty onset function");

  // Prefix sums for windowed mean/stddev.
  std::vector<double> sum(n + 1, 0.0), sum2(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    sum[i + 1] = sum[i] + flux[i];
    sum2[i + 1] = sum2[i] + flux[i] * flux[i];
  }
  const std::size_t half = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(0.5 / onset.frame_interval_s)));

  std::vector<std::size_t> picked;
  for (std::size_t i = 0; i < n; ++i) {
    bool local_max = flux[i] > 0.0;
    const std::size_t lo = i >= 3 ? i - 3 : 0;
    const std::size_t hi = std::min(n - 1, i + 3);
    for (std::size_t j = lo; j <= hi && local_max; ++j) {
      if (j == i) continue;
      if (flux[j] > flux[i] || (flux[j] == flux[i] && j < i)) local_max = false;
    }
    if (!local_max) continue;

    const std::size_t wlo = i >= half ? i - half : 0;
    const std::size_t whi = std::min(n, i + half + 1);
    const double count = static_cast<double>(whi - wlo);
    const double mean = (sum[whi] - sum[wlo]) / count;
    const double var =
        std::max(0.0, (sum2[whi] - sum2[wlo]) / count - mean * mean);
    if (flux[i] > mean + 1.5 * std::sqrt(var)) picked.push_back(i);
  }

  // Enforce minimum spacing, keeping the larger peak.
  std::vector<std::size_t> kept;
  for (std::size_t idx : picked) {
    if (!kept.empty() &&
        (idx - kept.back()) * onset.frame_interval_s < min_spacing_s) {
      if (flux[idx] > flux[kept.back()]) kept.back() = idx;
    } else {
      kept.push_back(idx);
    }
  }

  std::vector<double> times;
  times.reserve(kept.size());
  for (std::size_t idx : kept) times.push_back(onset.frame_times_s[idx]);
  return times;
}

// Cleans a raw onset list into a beat grid: the dominant inter-onset interval
// is the median IOI (or 60/hint), onsets whose IOI strays more than 30% from
// the running expectation are dropped, and a gap of ~k intervals gets k-1
// beats interpolated evenly into it.
inline BeatGrid build_beat_grid(
    const std::vector<double>& onsets,
    std::optional<double> expected_tempo_hint_bpm = {},
    std::optional<double> source_duration_s = {}) {
  if (onsets.size() < 4) throw TooFewOnsets(onsets.size(), 4);

  std::vector<double> iois(onsets.size() - 1);
  for (std::size_t i = 0; i + 1 < onsets.size(); ++i)
    iois[i] = onsets[i + 1] - onsets[i];
  double expected;
  if (expected_tempo_hint_bpm) {
    expected = 60.0 / *expected_tempo_hint_bpm;
  } else {
    std::vector<double> sorted = iois;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2,
                     sorted.end());
    expected = sorted[sorted.size() / 2];
  }
  if (!(expected > 0.0)) throw UnstableTempo("non-positive dominant interval");

  BeatGrid grid;
  grid.beat_times_s.push_back(onsets.front());
  std::size_t discarded = 0;
  for (std::size_t i = 1; i < onsets.size(); ++i) {
    const double ioi = onsets[i] - grid.beat_times_s.back();
    const auto k = static_cast<long>(std::llround(ioi / expected));
    if (k < 1 || std::abs(ioi - k * expected) > 0.3 * expected) {
      ++discarded;
      continue;
    }
    const double prev = grid.beat_times_s.back();
    for (long j = 1; j < k; ++j)  // fill a missed-beat gap evenly
      grid.beat_times_s.push_back(prev + ioi * j / k);
    grid.beat_times_s.push_back(onsets[i]);
    expected = 0.875 * expected + 0.125 * (ioi / k);
  }

  if (discarded * 5 > iois.size())
    throw UnstableTempo(std::to_string(discarded) + " of " +
                        std::to_string(iois.size()) +
                        " intervals discarded (>20%)");

  grid.source_duration_s = source_duration_s.value_or(grid.beat_times_s.back());
  return grid;
}

// Reference tempo as 60 / median inter-beat interval. With mostly-reference
// content this converges on the cover tempo; for dense messages pass the
// known tempo instead of estimating.
inline double estimate_reference_tempo(const BeatGrid& grid) {
  if (grid.size() < 4) throw TooFewBeats(grid.size(), 4);
  std::vector<double> intervals(grid.size() - 1);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    intervals[i] = grid.beat_times_s[i + 1] - grid.beat_times_s[i];
  std::nth_element(intervals.begin(), intervals.begin() + intervals.size() / 2,
                   intervals.end());
  return 60.0 / intervals[intervals.size() / 2];
}

namespace detail {

// Short moving-average amplitude envelope.
inline std::vector<float> envelope(const std::vector<float>& x, int sr) {
  const long w = std::max(1L, std::lround(sr / 2000.0));  // ~0.5 ms half-width
  std::vector<double> prefix(x.size() + 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    prefix[i + 1] = prefix[i] + std::abs(x[i]);
  std::vector<float> env(x.size());
  const long n = static_cast<long>(x.size());
  for (long i = 0; i < n; ++i) {
    const long lo = std::max(0L, i - w);
    const long hi = std::min(n, i + w + 1);
    env[i] = static_cast<float>((prefix[hi] - prefix[lo]) / (hi - lo));
  }
  return env;
}

// Moves each coarse onset to the attack foot of the local envelope: the last
// point before the local peak where the envelope sits at 10% of that peak.
inline std::vector<double> refine_onsets(const std::vector<float>& mono, int sr,
                                         const std::vector<double>& coarse,
                                         long search_radius,
                                         double min_spacing_s) {
  if (mono.empty() || coarse.empty()) return coarse;
  const std::vector<float> env = envelope(mono, sr);
  const float global_peak = *std::max_element(env.begin(), env.end());
  const long n = static_cast<long>(env.size());

  struct Refined {
    double time;
    float peak;
  };
  std::vector<Refined> refined;
  for (double t : coarse) {
    const long center = std::clamp(std::lround(t * sr), 0L, n - 1);
    const long lo = std::max(0L, center - search_radius);
    const long hi = std::min(n - 1, center + search_radius);
    long peak_at = lo;
    for (long i = lo + 1; i <= hi; ++i)
      if (env[i] > env[peak_at]) peak_at = i;
    const float peak = env[peak_at];
    if (peak < 0.02f * global_peak) continue;  // flux blip in near-silence

    const float level = 0.1f * peak;
    long q = -1;
    for (long i = peak_at; i >= lo; --i) {
      if (env[i] <= level) {
        q = i;
        break;
      }
    }
    double time = t;
    if (q >= 0 && q + 1 < n) {
      const float below = env[q];
      const float above = env[q + 1];
      const double frac =
          above > below ? std::clamp((level - below) / double(above - below),
                                     0.0, 1.0)
                        : 0.0;
      time = (q + frac) / sr;
    }
    refined.push_back({time, peak});
  }

  std::sort(refined.begin(), refined.end(),
            [](const Refined& a, const Refined& b) { return a.time < b.time; });
  std::vector<double> out;
  std::vector<float> peaks;
  for (const Refined& r : refined) {
    if (!out.empty() && r.time - out.back() < min_spacing_s) {
      if (r.peak > peaks.back()) {
        out.back() = r.time;
        peaks.back() = r.peak;
      }
    } else {
      out.push_back(r.time);
      peaks.push_back(r.peak);
    }
  }
  return out;
}

}  // namespace detail

// Whole tracker pipeline. The signal is zero-padded by one window on each
// side before the STFT so a beat on the very first sample still produces a
// flux rise; frame times are shifted back accordingly.
inline BeatGrid track_beats(const AudioBuffer& audio,
                            const TrackerConfig& cfg = {},
                            std::optional<double> tempo_hint_bpm = {}) {
  const std::vector<float> mono = audio.downmixed();
  const int sr = audio.sample_rate;
  const std::size_t pad = static_cast<std::size_t>(cfg.window);

  std::vector<float> padded(mono.size() + 2 * pad, 0.0f);
  std::copy(mono.begin(), mono.end(), padded.begin() + pad);
  const OnsetFunction flux = spectral_flux(AudioBuffer::mono(sr, std::move(padded)),
                                           cfg.window, cfg.hop);

  std::vector<double> onsets = pick_onsets(flux, cfg.min_onset_spacing_s);
  const double shift = static_cast<double>(pad) / sr;
  for (double& t : onsets) t -= shift;

  if (cfg.refine_onsets) {
    onsets = detail::refine_onsets(mono, sr, onsets, 3L * cfg.hop,
                                   cfg.min_onset_spacing_s);
  }
  return build_beat_grid(onsets, tempo_hint_bpm, audio.duration_s());
}

}  // namespace tempostego
