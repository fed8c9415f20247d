#pragma once

// Time-scale modification by plain resampling. A segment stretched by speed
// factor r plays r times faster (and is pitch-shifted by the same ratio; at
// the <=2% factors this system uses, that stays under the audibility margin).
//
// The resampler is a tabulated Kaiser-windowed sinc interpolator, 32 taps per
// output sample, with the input treated as zero beyond its ends. Output
// length is exactly round-half-up(input_length / factor).

#include <cmath>
#include <cstddef>
#include <vector>

#include "tempostego/audio.hpp"
#include "tempostego/codec.hpp"
#include "tempostego/errors.hpp"
#include "tempostego/params.hpp"

namespace tempostego {

struct SpeedFactor {
  double value = 1.0;  // output_tempo / input_tempo

  bool within_inaudibility_margin() const {
    return value >= 0.99 && value <= 1.01;
  }
};

// Factor realizing one symbol: PLUS -> (X+d)/X, MINUS -> (X-d)/X, ZERO -> 1.
inline SpeedFactor speed_factor(const EmbedParams& params, Symbol symbol) {
  const double x = params.reference_tempo_bpm;
  switch (symbol) {
    case Symbol::Plus:
      return {(x + params.delta_bpm) / x};
    case Symbol::Minus:
      return {(x - params.delta_bpm) / x};
    default:
      return {1.0};
  }
}

// Polyphase Kaiser-sinc kernel bound to one speed factor. Building the table
// costs a few ms, so callers that stretch many segments at the same factor
// (the embedder) construct one of these and reuse it.
class SincResampler {
 public:
  static constexpr int kTaps = 32;
  static constexpr int kRadius = kTaps / 2;
  static constexpr int kPhases = 1024;

  explicit SincResampler(double factor) : factor_(factor) {
    if (!(factor > 0.0)) throw InvalidParams("speed factor must be positive");
    if (factor_ == 1.0) return;  // identity, no table needed

    // Anti-aliasing cutoff: full band when slowing down, Nyquist/factor when
    // speeding up.
    const double cutoff = factor_ > 1.0 ? 1.0 / factor_ : 1.0;
    const double beta = 8.6;
    const double i0_beta = std::cyl_bessel_i(0.0, beta);
    table_.resize(static_cast<std::size_t>(kPhases + 1) * kTaps);
    for (int p = 0; p <= kPhases; ++p) {
      const double frac = static_cast<double>(p) / kPhases;
      double* row = &table_[static_cast<std::size_t>(p) * kTaps];
      double sum = 0.0;
      for (int j = 0; j < kTaps; ++j) {
        const double t = frac + (kRadius - 1 - j);  // distance to input tap
        const double u = t / kRadius;
        double w = 0.0;
        if (u > -1.0 && u < 1.0)
          w = std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - u * u)) / i0_beta;
        const double x = M_PI * cutoff * t;
        const double sinc = (std::abs(x) < 1e-12) ? 1.0 : std::sin(x) / x;
        row[j] = cutoff * sinc * w;
        sum += row[j];
      }
      // Normalize per phase so constant signals pass through exactly.
      for (int j = 0; j < kTaps; ++j) row[j] /= sum;
    }
  }

  double factor() const { return factor_; }

  static std::size_t output_length(std::size_t input_length, double factor) {
    return static_cast<std::size_t>(
        std::floor(static_cast<double>(input_length) / factor + 0.5));
  }

  std::vector<float> apply(const std::vector<float>& in) const {
    if (factor_ == 1.0) return in;
    const std::size_t n_in = in.size();
    const std::size_t n_out = output_length(n_in, factor_);
    std::vector<float> out(n_out);
    for (std::size_t n = 0; n < n_out; ++n) {
      const double c = static_cast<double>(n) * factor_;
      const auto base = static_cast<long long>(std::floor(c));
      const double frac = c - static_cast<double>(base);
      const double phase = frac * kPhases;
      const int p = static_cast<int>(phase);
      const double pf = phase - p;
      const double* row0 = &table_[static_cast<std::size_t>(p) * kTaps];
      const double* row1 = row0 + kTaps;
      double acc = 0.0;
      const long long first = base - (kRadius - 1);
      for (int j = 0; j < kTaps; ++j) {
        const long long k = first + j;
        if (k < 0 || k >= static_cast<long long>(n_in)) continue;
        const double h = row0[j] + pf * (row1[j] - row0[j]);
        acc += h * in[static_cast<std::size_t>(k)];
      }
      out[n] = static_cast<float>(acc);
    }
    return out;
  }

 private:
  double factor_;
  std::vector<double> table_;
};

// Stretches every channel of a segment by the given factor. Factor 1.0
// returns the segment unchanged sample-for-sample.
inline AudioBuffer stretch(const AudioBuffer& segment, SpeedFactor factor) {
  if (segment.frames() == 0) throw EmptySegment();
  if (factor.value == 1.0) return segment;
  const SincResampler resampler(factor.value);
  AudioBuffer out;
  out.sample_rate = segment.sample_rate;
  out.channels.reserve(segment.channels.size());
  for (const auto& ch : segment.channels) out.channels.push_back(resampler.apply(ch));
  return out;
}

}  // namespace tempostego
