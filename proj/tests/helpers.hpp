#pragma once

// Test-side oracles and generators. The click finder here is deliberately
// independent of the library's tracker: it reads the raw waveform directly so
// embedder output can be checked without trusting the STFT path.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "tempostego/audio.hpp"
#include "tempostego/codec.hpp"

namespace testutil {

// First-threshold-crossing click onsets with a lockout window. On synthetic
// click material every click has the same waveform, so the crossing sits at a
// constant offset from the click start and cancels out of intervals.
inline std::vector<double> find_click_starts(const std::vector<float>& x,
                                             int sample_rate,
                                             double min_gap_s,
                                             float threshold = 0.3f) {
  std::vector<double> starts;
  const auto lockout = static_cast<long long>(min_gap_s * sample_rate);
  long long last = -lockout - 1;
  for (long long i = 0; i < static_cast<long long>(x.size()); ++i) {
    if (std::abs(x[i]) > threshold && i - last > lockout) {
      starts.push_back(static_cast<double>(i) / sample_rate);
      last = i;
    }
  }
  return starts;
}

// Per-unit tempi from raw click times: unit k covers clicks [k*phi, (k+1)*phi].
inline std::vector<double> tempi_from_clicks(const std::vector<double>& clicks,
                                             int phi) {
  std::vector<double> tempi;
  if (clicks.size() < static_cast<std::size_t>(phi) + 1) return tempi;
  const std::size_t n = (clicks.size() - 1) / phi;
  for (std::size_t k = 0; k < n; ++k)
    tempi.push_back(60.0 * phi / (clicks[(k + 1) * phi] - clicks[k * phi]));
  return tempi;
}

inline std::string table_alphabet() {
  std::string chars;
  for (const auto& [ch, code] : tempostego::CodeTable::standard().entries())
    chars.push_back(ch);
  return chars;
}

// Random message over the full table alphabet plus spaces.
inline std::string random_message(std::mt19937& rng, std::size_t min_len,
                                  std::size_t max_len) {
  static const std::string chars = table_alphabet();
  std::uniform_int_distribution<std::size_t> len_dist(min_len, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, chars.size() + 5);
  const std::size_t n = len_dist(rng);
  std::string msg;
  while (msg.size() < n) {
    const std::size_t k = pick(rng);
    if (k >= chars.size()) {
      if (!msg.empty() && msg.back() != ' ') msg.push_back(' ');
    } else {
      msg.push_back(chars[k]);
    }
  }
  while (!msg.empty() && msg.back() == ' ') msg.pop_back();
  if (msg.empty()) msg = "x";
  return msg;
}

// Lowercased, whitespace-collapsed form: what a round trip must return.
inline std::string normalize(const std::string& message) {
  std::string out;
  bool pending_space = false;
  for (char c : message) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

// Cover with enough beats for `units` code units at the given parameters,
// plus room for the end-of-message gap and the closing beat.
inline tempostego::AudioBuffer cover_for_units(std::size_t units, double tempo,
                                               int phi, int sample_rate,
                                               int extra_units = 5) {
  const int beats = static_cast<int>((units + extra_units) * phi) + 2;
  return tempostego::synth_click_track(tempo, beats, sample_rate);
}

}  // namespace testutil
