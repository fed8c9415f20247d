#pragma once

// Encoder pipeline: lay symbols onto contiguous phi-beat units of the cover
// and stretch each unit's source segment by the factor its symbol dictates.
// Audio before the first beat and after the last planned unit is copied
// through untouched.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tempostego/audio.hpp"
#include "tempostego/codec.hpp"
#include "tempostego/errors.hpp"
#include "tempostego/params.hpp"
#include "tempostego/tsm.hpp"

namespace tempostego {

struct PlannedUnit {
  Symbol symbol = Symbol::Zero;
  double tempo_bpm = 0.0;
  double source_start_s = 0.0;
  double source_end_s = 0.0;
};

struct TempoPlan {
  std::vector<PlannedUnit> units;
};

struct Capacity {
  std::size_t units = 0;
  std::size_t estimated_chars = 0;
};

// Units that fit in a cover, and a rough character estimate (an average
// letter costs about four code symbols plus its gap).
inline Capacity capacity(const EmbedParams& params, double cover_duration_s) {
  params.validate();
  const double usable = cover_duration_s - params.first_beat_offset_s;
  Capacity c;
  if (usable <= 0.0) return c;
  c.units = static_cast<std::size_t>(
      std::floor(usable / params.unit_duration_s() + 1e-9));
  c.estimated_chars = c.units / 5;
  return c;
}

// Assigns unit k the source interval [offset + k*u, offset + (k+1)*u) where
// u = phi*60/X, and the tempo its symbol dictates.
inline TempoPlan plan(const SymbolStream& stream, const EmbedParams& params,
                      double cover_duration_s) {
  params.validate();
  if (cover_duration_s <= params.first_beat_offset_s)
    throw InvalidParams("cover shorter than the first-beat offset");
  const Capacity cap = capacity(params, cover_duration_s);
  if (stream.size() > cap.units)
    throw InsufficientCapacity(stream.size(), cap.units);

  const double unit_s = params.unit_duration_s();
  TempoPlan p;
  p.units.reserve(stream.size());
  for (std::size_t k = 0; k < stream.size(); ++k) {
    PlannedUnit u;
    u.symbol = stream[k];
    u.tempo_bpm = params.reference_tempo_bpm;
    if (stream[k] == Symbol::Plus) u.tempo_bpm += params.delta_bpm;
    if (stream[k] == Symbol::Minus) u.tempo_bpm -= params.delta_bpm;
    u.source_start_s = params.first_beat_offset_s + k * unit_s;
    u.source_end_s = params.first_beat_offset_s + (k + 1) * unit_s;
    p.units.push_back(u);
  }
  return p;
}

struct EmbedResult {
  AudioBuffer stego;
  TempoPlan plan;
};

// Encodes `message` into the tempo of `cover`. The cover is trusted to be
// constant-tempo at params.reference_tempo_bpm from the first-beat offset
// onward; use the tracker to verify when in doubt.
inline EmbedResult embed(const AudioBuffer& cover, const std::string& message,
                         const EmbedParams& params,
                         const CodeTable& table = CodeTable::standard(),
                         bool lenient = false) {
  params.validate();
  const SymbolStream stream = encode_text(message, table, lenient);
  EmbedResult result;
  result.plan = plan(stream, params, cover.duration_s());
  if (stream.empty()) {
    result.stego = cover;
    return result;
  }

  const double sr = cover.sample_rate;
  const std::size_t n_units = stream.size();
  // Sample index of each unit boundary in the source.
  std::vector<std::size_t> bounds(n_units + 1);
  for (std::size_t k = 0; k <= n_units; ++k) {
    const double t = params.first_beat_offset_s + k * params.unit_duration_s();
    bounds[k] = std::min(cover.frames(),
                         static_cast<std::size_t>(std::llround(t * sr)));
  }

  const SincResampler faster(speed_factor(params, Symbol::Plus).value);
  const SincResampler slower(speed_factor(params, Symbol::Minus).value);

  result.stego.sample_rate = cover.sample_rate;
  result.stego.channels.resize(cover.channels.size());
  for (std::size_t c = 0; c < cover.channels.size(); ++c) {
    const std::vector<float>& in = cover.channels[c];
    std::vector<float>& out = result.stego.channels[c];
    out.assign(in.begin(), in.begin() + bounds.front());
    for (std::size_t k = 0; k < n_units; ++k) {
      const std::vector<float> segment(in.begin() + bounds[k],
                                       in.begin() + bounds[k + 1]);
      if (stream[k] == Symbol::Zero) {
        out.insert(out.end(), segment.begin(), segment.end());
      } else {
        const SincResampler& r = stream[k] == Symbol::Plus ? faster : slower;
        const std::vector<float> stretched = r.apply(segment);
        out.insert(out.end(), stretched.begin(), stretched.end());
      }
    }
    out.insert(out.end(), in.begin() + bounds.back(), in.end());
  }
  return result;
}

}  // namespace tempostego
