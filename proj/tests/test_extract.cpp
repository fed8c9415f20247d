#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "helpers.hpp"
#include "tempostego/embed.hpp"
#include "tempostego/extract.hpp"

using namespace tempostego;

namespace {

EmbedParams params(double x, double delta, int phi) {
  EmbedParams p;
  p.reference_tempo_bpm = x;
  p.delta_bpm = delta;
  p.phi_beats = phi;
  return p;
}

// Tracker settings proportional to the spec defaults for 22.05 kHz test audio.
TrackerConfig fast_tracker() {
  TrackerConfig cfg;
  cfg.window = 1024;
  cfg.hop = 256;
  return cfg;
}

}  // namespace

TEST_CASE("unit tempi from beat grids", "[extract]") {
  BeatGrid g;
  g.beat_times_s = {0.0, 0.5, 1.0};
  g.source_duration_s = 1.0;
  auto tempi = unit_tempi(g, 1);
  REQUIRE(tempi.size() == 2);
  CHECK(tempi[0].second == Catch::Approx(120.0));
  CHECK(tempi[1].second == Catch::Approx(120.0));
  CHECK(tempi[1].first == Catch::Approx(0.5));

  g.beat_times_s = {0.0, 0.5, 0.5 + 60.0 / 121.0};
  tempi = unit_tempi(g, 1);
  CHECK(tempi[0].second == Catch::Approx(120.0));
  CHECK(tempi[1].second == Catch::Approx(121.0).margin(0.05));

  g.beat_times_s = {0.0, 0.5, 1.0};
  CHECK_THROWS_AS(unit_tempi(g, 3), TooFewBeats);

  SECTION("trailing incomplete group is dropped") {
    BeatGrid g2;
    g2.beat_times_s = {0.0, 0.5, 1.0, 1.5, 2.0};
    CHECK(unit_tempi(g2, 2).size() == 2);
    g2.beat_times_s = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
    CHECK(unit_tempi(g2, 2).size() == 2);
  }
}

TEST_CASE("classification dead zone", "[extract]") {
  auto one = [](double tempo, double x, double d) {
    return classify({{0.0, tempo}}, x, d).units[0].symbol;
  };
  CHECK(one(121.0, 120.0, 1.0) == Symbol::Plus);
  CHECK(one(120.4, 120.0, 1.0) == Symbol::Zero);
  CHECK(one(119.5, 120.0, 1.0) == Symbol::Minus);  // boundary inclusive
  CHECK(one(120.5, 120.0, 1.0) == Symbol::Plus);   // boundary inclusive
  CHECK(one(120.49, 120.0, 1.0) == Symbol::Zero);

  CHECK_THROWS_AS(classify({{0.0, 120.0}}, 120.0, 0.0), InvalidParams);

  SECTION("widening the dead zone never creates symbols") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> tempo(118.0, 122.0);
    for (int i = 0; i < 500; ++i) {
      const double t = tempo(rng);
      const Symbol narrow = classify({{0.0, t}}, 120.0, 1.0).units[0].symbol;
      const Symbol wide = classify({{0.0, t}}, 120.0, 2.0).units[0].symbol;
      if (narrow == Symbol::Zero) CHECK(wide == Symbol::Zero);
    }
  }
}

TEST_CASE("blind round trip of the canonical message", "[extract]") {
  const std::string message = "steganography is a dancer!";
  const EmbedParams p = params(120, 1, 1);
  const std::size_t units = encode_text(message).size();
  const AudioBuffer cover =
      testutil::cover_for_units(2 * units, 120, 1, 44100);  // ZERO-majority
  const EmbedResult e = embed(cover, message, p);

  const ExtractResult r = extract(e.stego, 1, 1.0);  // no reference given
  CHECK(r.message == message);
  CHECK(r.reference_estimated);
  CHECK(std::abs(r.reference_tempo_bpm - 120.0) < 0.1);
}

TEST_CASE("round trips across parameters", "[extract]") {
  for (auto [x, delta, phi] : {std::tuple{128.0, 2.0, 2}, {100.0, 1.0, 3},
                               {150.0, 2.0, 1}}) {
    const std::string message = "sos";
    const std::size_t units = encode_text(message).size();
    const AudioBuffer cover = testutil::cover_for_units(units, x, phi, 22050);
    const EmbedResult e = embed(cover, message, params(x, delta, phi));
    const ExtractResult r =
        extract(e.stego, phi, delta, x, CodeTable::standard(), fast_tracker());
    INFO("X=" << x << " delta=" << delta << " phi=" << phi);
    CHECK(r.message == message);
    CHECK_FALSE(r.reference_estimated);
  }
}

TEST_CASE("unmodified cover yields NoMessage", "[extract]") {
  const AudioBuffer cover = synth_click_track(120.0, 24, 22050);
  CHECK_THROWS_AS(
      extract(cover, 1, 1.0, 120.0, CodeTable::standard(), fast_tracker()),
      NoMessage);
}

TEST_CASE("message ending mid-cover terminates at the zero run", "[extract]") {
  const std::string message = "end";
  const EmbedParams p = params(120, 1, 1);
  const std::size_t units = encode_text(message).size();
  // Plenty of trailing reference-tempo beats after the message.
  const AudioBuffer cover = testutil::cover_for_units(units + 30, 120, 1, 22050);
  const EmbedResult e = embed(cover, message, p);
  const ExtractResult r =
      extract(e.stego, 1, 1.0, 120.0, CodeTable::standard(), fast_tracker());
  CHECK(r.message == message);
  // The tempo track still reports every unit, trailing ZEROs included.
  CHECK(r.track.units.size() > encode_text(message).size() + 20);
}

TEST_CASE("tempo track CSV shape", "[extract]") {
  TempoTrack track;
  track.units.push_back({0, 0.0, 120.0, Symbol::Zero});
  track.units.push_back({1, 0.5, 121.0, Symbol::Plus});
  const std::string csv = tempo_track_csv(track);
  CHECK(csv.rfind("unit_index,start_time_s,tempo_bpm,symbol\n", 0) == 0);
  CHECK(csv.find("0,0.000000,120.000000,0\n") != std::string::npos);
  CHECK(csv.find("1,0.500000,121.000000,+\n") != std::string::npos);
}
