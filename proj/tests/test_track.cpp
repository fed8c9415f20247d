#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "tempostego/track.hpp"

using namespace tempostego;

namespace {

// Pads like the track_beats pipeline: one window of zeros on each side so a
// beat on sample zero is still visible to the flux.
std::vector<double> padded_onsets(const AudioBuffer& audio, int window = 2048,
                                  int hop = 512) {
  const std::vector<float> mono = audio.downmixed();
  std::vector<float> padded(mono.size() + 2 * window, 0.0f);
  std::copy(mono.begin(), mono.end(), padded.begin() + window);
  const OnsetFunction flux = spectral_flux(
      AudioBuffer::mono(audio.sample_rate, std::move(padded)), window, hop);
  std::vector<double> onsets = pick_onsets(flux);
  for (double& t : onsets) t -= double(window) / audio.sample_rate;
  return onsets;
}

AudioBuffer click_at(double t_s, double duration_s, int sr) {
  AudioBuffer b = synth_click_track(60.0, 1, sr);  // one click at 0
  std::vector<float> x(std::size_t(duration_s * sr), 0.0f);
  const auto shift = std::size_t(t_s * sr);
  for (std::size_t i = 0; i < 600 && shift + i < x.size(); ++i)
    x[shift + i] = b.channels[0][i];
  return AudioBuffer::mono(sr, std::move(x));
}

}  // namespace

TEST_CASE("flux of silence is zero", "[track]") {
  const AudioBuffer silence = AudioBuffer::mono(44100, std::vector<float>(8000, 0.0f));
  const OnsetFunction f = spectral_flux(silence);
  REQUIRE(f.flux_values.size() >= 2);
  for (double v : f.flux_values) CHECK(v == 0.0);
  CHECK(pick_onsets(f).empty());
}

TEST_CASE("flux peaks at an isolated click", "[track]") {
  const AudioBuffer b = click_at(1.0, 2.0, 44100);
  const OnsetFunction f = spectral_flux(b);
  const std::size_t best =
      std::max_element(f.flux_values.begin(), f.flux_values.end()) -
      f.flux_values.begin();
  const double hop_s = 512.0 / 44100.0;
  CHECK(std::abs(f.frame_times_s[best] - 1.0) <= hop_s);
  CHECK(f.flux_values.front() == 0.0);
  CHECK(f.frame_interval_s == Catch::Approx(hop_s));
}

TEST_CASE("steady tone produces near-zero flux", "[track]") {
  const int sr = 44100;
  std::vector<float> x(sr * 2);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = 0.5f * std::sin(2.0 * M_PI * 440.0 * i / sr);
  const OnsetFunction tone_flux = spectral_flux(AudioBuffer::mono(sr, x));
  const OnsetFunction click_flux = spectral_flux(click_at(1.0, 2.0, sr));
  const double click_peak =
      *std::max_element(click_flux.flux_values.begin(), click_flux.flux_values.end());
  for (std::size_t i = 1; i < tone_flux.flux_values.size(); ++i)
    CHECK(tone_flux.flux_values[i] < 0.01 * click_peak);
}

TEST_CASE("flux input validation", "[track]") {
  const AudioBuffer b = AudioBuffer::mono(44100, std::vector<float>(1000, 0.0f));
  CHECK_THROWS_AS(spectral_flux(b), AudioTooShort);
  const AudioBuffer ok = AudioBuffer::mono(44100, std::vector<float>(8000, 0.0f));
  CHECK_THROWS_AS(spectral_flux(ok, 1000, 100), InvalidParams);  // not pow2
  CHECK_THROWS_AS(spectral_flux(ok, 1024, 2048), InvalidParams); // hop > window
}

TEST_CASE("ten beats give ten onsets within one hop", "[track]") {
  const AudioBuffer b = synth_click_track(120.0, 10, 44100);
  const auto onsets = padded_onsets(b);
  REQUIRE(onsets.size() == 10);
  for (std::size_t k = 0; k < onsets.size(); ++k)
    CHECK(std::abs(onsets[k] - k * 0.5) <= 0.012);
}

TEST_CASE("clicks 30 ms apart merge into one onset", "[track]") {
  const int sr = 44100;
  AudioBuffer two = click_at(1.0, 2.5, sr);
  const AudioBuffer other = click_at(1.03, 2.5, sr);
  for (std::size_t i = 0; i < two.frames(); ++i)
    two.channels[0][i] += other.channels[0][i];
  const auto onsets = padded_onsets(two);
  CHECK(onsets.size() == 1);
}

TEST_CASE("grid construction", "[track]") {
  SECTION("clean 120 bpm onsets") {
    std::vector<double> onsets;
    for (int k = 0; k < 40; ++k) onsets.push_back(k * 0.5);
    const BeatGrid g = build_beat_grid(onsets);
    REQUIRE(g.size() == 40);
    std::vector<double> iois(g.size() - 1);
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
      iois[i] = g.beat_times_s[i + 1] - g.beat_times_s[i];
    std::nth_element(iois.begin(), iois.begin() + iois.size() / 2, iois.end());
    CHECK(std::abs(iois[iois.size() / 2] - 0.5) < 0.002);
  }

  SECTION("a missing beat is interpolated at the midpoint") {
    std::vector<double> onsets;
    for (int k = 0; k < 20; ++k)
      if (k != 7) onsets.push_back(k * 0.5);
    const BeatGrid g = build_beat_grid(onsets);
    REQUIRE(g.size() == 20);
    CHECK(g.beat_times_s[7] == Catch::Approx(3.5).margin(1e-9));
  }

  SECTION("spurious onsets are discarded") {
    std::vector<double> onsets;
    for (int k = 0; k < 20; ++k) {
      onsets.push_back(k * 0.5);
      if (k == 5 || k == 11) onsets.push_back(k * 0.5 + 0.13);
    }
    const BeatGrid g = build_beat_grid(onsets);
    REQUIRE(g.size() == 20);
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(g.beat_times_s[i] == Catch::Approx(i * 0.5).margin(1e-9));
  }

  SECTION("errors") {
    CHECK_THROWS_AS(build_beat_grid({0.0, 0.5, 1.0}), TooFewOnsets);
    // Half the intervals wildly off -> unstable.
    CHECK_THROWS_AS(build_beat_grid({0.0, 0.5, 1.0, 1.2, 1.3, 1.45, 2.9, 3.02}),
                    UnstableTempo);
  }
}

TEST_CASE("reference tempo estimation", "[track]") {
  BeatGrid g;
  for (int k = 0; k < 30; ++k) g.beat_times_s.push_back(k * 0.5);
  g.source_duration_s = 15.0;
  CHECK(estimate_reference_tempo(g) == 120.0);

  SECTION("shift invariance and scaling") {
    BeatGrid shifted = g;
    for (double& t : shifted.beat_times_s) t += 3.21;
    CHECK(estimate_reference_tempo(shifted) == Catch::Approx(120.0).epsilon(1e-12));

    BeatGrid scaled = g;
    for (double& t : scaled.beat_times_s) t *= 2.0;
    CHECK(estimate_reference_tempo(scaled) == Catch::Approx(60.0).epsilon(1e-12));
  }

  SECTION("too few beats") {
    BeatGrid tiny;
    tiny.beat_times_s = {0.0, 0.5, 1.0};
    CHECK_THROWS_AS(estimate_reference_tempo(tiny), TooFewBeats);
  }
}

TEST_CASE("full pipeline locates every beat on clean covers", "[track]") {
  for (double tempo : {100.0, 120.0, 150.0}) {
    for (int sr : {44100, 48000}) {
      const int beats = 40;
      const AudioBuffer b = synth_click_track(tempo, beats, sr);
      const BeatGrid g = track_beats(b);
      INFO("tempo " << tempo << " sr " << sr);
      REQUIRE(g.size() == std::size_t(beats));
      for (int k = 0; k < beats; ++k)
        CHECK(std::abs(g.beat_times_s[k] - k * 60.0 / tempo) <= 0.012);
      CHECK(std::abs(estimate_reference_tempo(g) - tempo) <= 0.1);
    }
  }
}

TEST_CASE("pipeline flux is gain and polarity invariant in peak position",
          "[track]") {
  const AudioBuffer b = synth_click_track(120.0, 16, 44100);
  AudioBuffer quiet = b, inverted = b;
  for (float& v : quiet.channels[0]) v *= 0.1f;
  for (float& v : inverted.channels[0]) v = -v;
  const BeatGrid ref = track_beats(b);
  const BeatGrid g1 = track_beats(quiet);
  const BeatGrid g2 = track_beats(inverted);
  REQUIRE(g1.size() == ref.size());
  REQUIRE(g2.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    CHECK(std::abs(g1.beat_times_s[i] - ref.beat_times_s[i]) < 1e-4);
    CHECK(std::abs(g2.beat_times_s[i] - ref.beat_times_s[i]) < 1e-4);
  }
}
