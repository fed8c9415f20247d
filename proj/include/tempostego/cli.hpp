#pragma once

// Command-line surface. run() is the whole program; the binary's main() just
// forwards argv and the standard streams, which keeps every command testable
// in-process.
//
// Exit codes: 0 success, 1 domain error (error name on the diagnostic
// stream), 2 usage error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tempostego/audio.hpp"
#include "tempostego/codec.hpp"
#include "tempostego/detect.hpp"
#include "tempostego/embed.hpp"
#include "tempostego/extract.hpp"
#include "tempostego/params.hpp"

namespace tempostego::cli {

namespace detail {

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("write failure on " + path);
}

inline std::string read_all(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

inline std::string strip_trailing_newlines(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::istream& in,
               std::ostream& out, std::ostream& err) {
  CLI::App app{"Hide and recover text in the tempo of constant-bpm audio"};
  app.name("tempostego");
  app.require_subcommand(1);

  // gen-cover
  auto* gen = app.add_subcommand("gen-cover", "Synthesize a click-track cover");
  double gen_tempo = 120.0;
  int gen_beats = 0, gen_rate = 44100;
  double gen_click_ms = 10.0, gen_click_freq = 1000.0;
  std::string gen_out;
  gen->add_option("--tempo", gen_tempo, "Tempo in bpm")->required();
  gen->add_option("--beats", gen_beats, "Number of beats")->required();
  gen->add_option("--rate", gen_rate, "Sample rate (44100 or 48000)");
  gen->add_option("--click-ms", gen_click_ms, "Click length in ms");
  gen->add_option("--click-freq", gen_click_freq, "Click frequency in Hz");
  gen->add_option("-o,--output", gen_out, "Output WAV path")->required();

  // encode
  auto* enc = app.add_subcommand("encode", "Embed a message into a cover");
  std::string enc_in, enc_out, enc_message;
  EmbedParams enc_params;
  bool enc_lenient = false;
  enc->add_option("-i,--input", enc_in, "Cover WAV path")->required();
  enc->add_option("-o,--output", enc_out, "Stego WAV path")->required();
  enc->add_option("--tempo", enc_params.reference_tempo_bpm,
                  "Cover reference tempo in bpm")
      ->required();
  enc->add_option("--delta", enc_params.delta_bpm, "Tempo delta in bpm");
  enc->add_option("--phi", enc_params.phi_beats, "Beats per unit");
  enc->add_option("--offset", enc_params.first_beat_offset_s,
                  "First beat offset in seconds");
  enc->add_option("-m,--message", enc_message, "Message text")->required();
  enc->add_flag("--lenient", enc_lenient, "Skip unsupported characters");

  // decode
  auto* dec = app.add_subcommand("decode", "Extract a message from a track");
  std::string dec_in, dec_csv;
  double dec_delta = 1.0;
  int dec_phi = 1;
  double dec_tempo = 0.0;
  bool dec_strict = false;
  TrackerConfig dec_tracker;
  dec->add_option("-i,--input", dec_in, "Input WAV path")->required();
  dec->add_option("--delta", dec_delta, "Tempo delta in bpm (stego key)");
  dec->add_option("--phi", dec_phi, "Beats per unit (stego key)");
  auto* dec_tempo_opt =
      dec->add_option("--tempo", dec_tempo,
                      "Reference tempo in bpm (estimated when omitted)");
  dec->add_option("--track-csv", dec_csv, "Write the tempo track CSV here");
  dec->add_flag("--strict", dec_strict, "Fail on malformed gaps");
  dec->add_option("--window", dec_tracker.window, "STFT window size");
  dec->add_option("--hop", dec_tracker.hop, "STFT hop size");

  // detect
  auto* det = app.add_subcommand("detect", "Score a track for hidden tempo code");
  std::string det_in, det_out;
  DetectorConfig det_cfg;
  det->add_option("-i,--input", det_in, "Input WAV path")->required();
  det->add_option("-o,--output", det_out, "Report path (stdout when omitted)");
  det->add_option("--gate", det_cfg.deviation_gate,
                  "Deviation gate as a fraction of the median tempo");
  det->add_option("--stego-threshold", det_cfg.stego_threshold,
                  "Score at or above which the verdict is STEGO");
  det->add_option("--clean-threshold", det_cfg.clean_threshold,
                  "Score at or below which the verdict is CLEAN");

  // analyze
  auto* ana = app.add_subcommand(
      "analyze", "Write the per-unit tempo track of a file as CSV");
  std::string ana_in, ana_out;
  int ana_phi = 1;
  double ana_delta = 1.0, ana_tempo = 0.0;
  ana->add_option("-i,--input", ana_in, "Input WAV path")->required();
  ana->add_option("-o,--output", ana_out, "Output CSV path")->required();
  ana->add_option("--phi", ana_phi, "Beats per unit");
  ana->add_option("--delta", ana_delta, "Delta used to label symbols");
  auto* ana_tempo_opt =
      ana->add_option("--tempo", ana_tempo,
                      "Reference tempo in bpm (estimated when omitted)");

  // codec
  auto* cod = app.add_subcommand(
      "codec", "Convert between text and symbol form on stdin/stdout");
  bool cod_encode = false, cod_decode = false, cod_strict = false;
  cod->add_flag("--encode", cod_encode, "Text on stdin -> symbols on stdout");
  cod->add_flag("--decode", cod_decode, "Symbols on stdin -> text on stdout");
  cod->add_flag("--strict", cod_strict, "Fail on malformed gaps when decoding");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      const AudioBuffer cover = synth_click_track(gen_tempo, gen_beats,
                                                  gen_rate, gen_click_ms,
                                                  gen_click_freq);
      write_wav(cover, gen_out);
      out << "wrote " << gen_out << ": " << gen_beats << " beats at "
          << gen_tempo << " bpm, " << gen_rate << " Hz, " << cover.duration_s()
          << " s\n";
    } else if (enc->parsed()) {
      enc_params.validate();
      if (enc_params.exceeds_audibility_margin())
        err << "warning: delta is "
            << 100.0 * enc_params.delta_bpm / enc_params.reference_tempo_bpm
            << "% of the reference tempo, above the 1% inaudibility margin\n";
      const AudioBuffer cover = read_wav(enc_in);
      const Capacity cap = capacity(enc_params, cover.duration_s());
      const EmbedResult result = embed(cover, enc_message, enc_params,
                                       CodeTable::standard(), enc_lenient);
      write_wav(result.stego, enc_out);
      out << "message units: " << result.plan.units.size()
          << ", cover capacity: " << cap.units << " units (~"
          << cap.estimated_chars << " chars)\n";
      if (!result.plan.units.empty())
        out << "plan: " << result.plan.units.size() << " units spanning "
            << result.plan.units.front().source_start_s << ".."
            << result.plan.units.back().source_end_s << " s of source\n";
      out << "wrote " << enc_out << " (" << result.stego.frames()
          << " frames, " << result.stego.duration_s() << " s)\n";
    } else if (dec->parsed()) {
      const AudioBuffer audio = read_wav(dec_in);
      std::optional<double> x_ref;
      if (dec_tempo_opt->count() > 0) x_ref = dec_tempo;
      const ExtractResult result = extract(audio, dec_phi, dec_delta, x_ref,
                                           CodeTable::standard(), dec_tracker,
                                           dec_strict);
      err << "reference tempo: " << result.reference_tempo_bpm << " bpm ("
          << (result.reference_estimated ? "estimated" : "given") << ")\n";
      if (!dec_csv.empty())
        detail::write_text_file(dec_csv, tempo_track_csv(result.track));
      out << result.message << "\n";
    } else if (det->parsed()) {
      const AudioBuffer audio = read_wav(det_in);
      const DetectionReport report = detect(audio, det_cfg);
      const std::string text = detection_report_text(report);
      if (det_out.empty())
        out << text;
      else
        detail::write_text_file(det_out, text);
    } else if (ana->parsed()) {
      const AudioBuffer audio = read_wav(ana_in);
      std::optional<double> hint;
      if (ana_tempo_opt->count() > 0) hint = ana_tempo;
      const BeatGrid grid = track_beats(audio, TrackerConfig{}, hint);
      const auto tempi = unit_tempi(grid, ana_phi);
      const double x_ref = hint ? *hint : estimate_reference_tempo(grid);
      const TempoTrack track = classify(tempi, x_ref, ana_delta);
      detail::write_text_file(ana_out, tempo_track_csv(track));
      out << grid.size() << " beats, " << track.units.size()
          << " units, reference tempo " << x_ref << " bpm\n";
    } else if (cod->parsed()) {
      if (cod_encode == cod_decode)
        throw InvalidParams("codec needs exactly one of --encode/--decode");
      const std::string input = detail::strip_trailing_newlines(
          detail::read_all(in));
      if (cod_encode)
        out << symbols_to_text_form(encode_text(input)) << "\n";
      else
        out << decode_symbols(symbols_from_text_form(input),
                              CodeTable::standard(), cod_strict)
            << "\n";
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace tempostego::cli
