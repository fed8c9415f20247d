#pragma once

// Embedding parameters: the reference tempo X, the tempo delta applied for
// non-reference symbols, the unit length in beats, and where the first beat
// falls in the cover.

#include <cmath>
#include <string>

#include "tempostego/errors.hpp"

namespace tempostego {

struct EmbedParams {
  double reference_tempo_bpm = 120.0;  // X
  double delta_bpm = 1.0;              // tempo offset for +/- units
  int phi_beats = 1;                   // beats per code unit
  double first_beat_offset_s = 0.0;

  // Seconds of source audio covered by one unit.
  double unit_duration_s() const {
    return phi_beats * 60.0 / reference_tempo_bpm;
  }

  // True when the tempo change crosses the 1% level where trained listeners
  // start to notice. A warning condition, not an error.
  bool exceeds_audibility_margin() const {
    return delta_bpm / reference_tempo_bpm > 0.01;
  }

  void validate() const {
    if (!(reference_tempo_bpm >= 40.0 && reference_tempo_bpm <= 300.0))
      throw InvalidParams("reference tempo must be in [40, 300] bpm");
    if (!(delta_bpm > 0.0))
      throw InvalidParams("delta must be positive");
    if (!(delta_bpm < reference_tempo_bpm / 10.0))
      throw InvalidParams("delta must stay below 10% of the reference tempo");
    if (phi_beats < 1) throw InvalidParams("phi must be a positive integer");
    if (!(first_beat_offset_s >= 0.0))
      throw InvalidParams("first beat offset must be non-negative");
  }
};

}  // namespace tempostego
