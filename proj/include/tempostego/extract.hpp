#pragma once

// Demodulator: beat grid -> phi-beat unit tempi -> symbol classification
// (dead zone of width delta centered on the reference tempo) -> text.
//
// The unit grouping anchors at the first detected beat, matching the
// embedder's convention of starting the message on the first beat. The
// reference tempo is taken from the caller when shared out-of-band and
// estimated from the grid otherwise.

#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tempostego/codec.hpp"
#include "tempostego/errors.hpp"
#include "tempostego/track.hpp"

namespace tempostego {

struct TempoUnit {
  int index = 0;
  double start_s = 0.0;
  double tempo_bpm = 0.0;
  Symbol symbol = Symbol::Zero;
};

struct TempoTrack {
  std::vector<TempoUnit> units;

  SymbolStream symbols() const {
    SymbolStream s;
    s.reserve(units.size());
    for (const TempoUnit& u : units) s.push_back(u.symbol);
    return s;
  }
};

// Local tempo of each complete phi-beat group: unit k spans beats
// [k*phi, (k+1)*phi], tempo = 60*phi / (t_end - t_start). A trailing
// incomplete group is dropped.
inline std::vector<std::pair<double, double>> unit_tempi(const BeatGrid& grid,
                                                         int phi) {
  if (phi < 1) throw InvalidParams("phi must be a positive integer");
  if (grid.size() < static_cast<std::size_t>(phi) + 1)
    throw TooFewBeats(grid.size(), static_cast<std::size_t>(phi) + 1);
  const std::size_t n_units = (grid.size() - 1) / phi;
  std::vector<std::pair<double, double>> out;
  out.reserve(n_units);
  for (std::size_t k = 0; k < n_units; ++k) {
    const double t0 = grid.beat_times_s[k * phi];
    const double t1 = grid.beat_times_s[(k + 1) * phi];
    out.emplace_back(t0, 60.0 * phi / (t1 - t0));
  }
  return out;
}

// Three-level decision with the boundaries inclusive toward the outer
// symbols: tempo >= x+d/2 -> PLUS, tempo <= x-d/2 -> MINUS, else ZERO.
inline TempoTrack classify(const std::vector<std::pair<double, double>>& tempi,
                           double x_ref_bpm, double delta_bpm) {
  if (!(delta_bpm > 0.0)) throw InvalidParams("delta must be positive");
  TempoTrack track;
  track.units.reserve(tempi.size());
  for (std::size_t i = 0; i < tempi.size(); ++i) {
    TempoUnit u;
    u.index = static_cast<int>(i);
    u.start_s = tempi[i].first;
    u.tempo_bpm = tempi[i].second;
    if (u.tempo_bpm >= x_ref_bpm + delta_bpm / 2.0)
      u.symbol = Symbol::Plus;
    else if (u.tempo_bpm <= x_ref_bpm - delta_bpm / 2.0)
      u.symbol = Symbol::Minus;
    else
      u.symbol = Symbol::Zero;
    track.units.push_back(u);
  }
  return track;
}

struct ExtractResult {
  std::string message;
  TempoTrack track;
  double reference_tempo_bpm = 0.0;
  bool reference_estimated = false;
};

// Full receive pipeline. Phi and delta are the stego key; x_ref may be given
// (preferred) or estimated from the grid. The message body runs from the
// first non-ZERO unit to the first run of 3+ ZEROs, a gap no valid encoded
// stream can contain.
inline ExtractResult extract(const AudioBuffer& audio, int phi,
                             double delta_bpm,
                             std::optional<double> x_ref_bpm = {},
                             const CodeTable& table = CodeTable::standard(),
                             const TrackerConfig& tracker = {},
                             bool strict = false) {
  const BeatGrid grid = track_beats(audio, tracker, x_ref_bpm);
  const auto tempi = unit_tempi(grid, phi);

  ExtractResult result;
  result.reference_estimated = !x_ref_bpm.has_value();
  result.reference_tempo_bpm =
      x_ref_bpm ? *x_ref_bpm : estimate_reference_tempo(grid);
  result.track = classify(tempi, result.reference_tempo_bpm, delta_bpm);

  const SymbolStream all = result.track.symbols();
  std::size_t first = 0;
  while (first < all.size() && all[first] == Symbol::Zero) ++first;
  if (first == all.size()) throw NoMessage();

  std::size_t end = all.size();
  int zeros = 0;
  for (std::size_t i = first; i < all.size(); ++i) {
    zeros = all[i] == Symbol::Zero ? zeros + 1 : 0;
    if (zeros == 3) {
      end = i - 2;
      break;
    }
  }
  const SymbolStream body(all.begin() + first, all.begin() + end);
  result.message = decode_symbols(body, table, strict);
  return result;
}

// CSV rendering of a tempo track; the data behind tempo-vs-time plots.
inline std::string tempo_track_csv(const TempoTrack& track) {
  std::ostringstream out;
  out << "unit_index,start_time_s,tempo_bpm,symbol\n";
  out.setf(std::ios::fixed);
  out.precision(6);
  for (const TempoUnit& u : track.units) {
    out << u.index << ',' << u.start_s << ',' << u.tempo_bpm << ','
        << symbol_to_char(u.symbol) << '\n';
  }
  return out.str();
}

}  // namespace tempostego
