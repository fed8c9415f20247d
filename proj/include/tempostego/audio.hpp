#pragma once

// PCM audio container, RIFF/WAVE file I/O and synthetic click-track covers.
//
// Buffers hold real-valued samples in [-1, 1] per channel; storage bit depth
// is a file-layer concern. Readable files are integer PCM (16- or 24-bit),
// mono or stereo, 44.1 or 48 kHz; output is always 16-bit PCM.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "tempostego/errors.hpp"

namespace tempostego {

struct AudioBuffer {
  int sample_rate = 44100;
  std::vector<std::vector<float>> channels;  // 1 or 2, equal lengths

  std::size_t frames() const {
    return channels.empty() ? 0 : channels.front().size();
  }
  int channel_count() const { return static_cast<int>(channels.size()); }
  double duration_s() const {
    return static_cast<double>(frames()) / sample_rate;
  }

  static AudioBuffer mono(int sample_rate, std::vector<float> samples) {
    AudioBuffer b;
    b.sample_rate = sample_rate;
    b.channels.push_back(std::move(samples));
    return b;
  }

  // Average of channels as a mono signal.
  std::vector<float> downmixed() const {
    if (channels.size() == 1) return channels.front();
    std::vector<float> mix(frames(), 0.0f);
    for (const auto& ch : channels)
      for (std::size_t i = 0; i < ch.size(); ++i) mix[i] += ch[i];
    const float scale = 1.0f / channel_count();
    for (float& v : mix) v *= scale;
    return mix;
  }
};

namespace detail {

inline bool file_io_rate(int rate) { return rate == 44100 || rate == 48000; }

inline std::uint32_t read_u32(const unsigned char* p) {
  return p[0] | (p[1] << 8) | (p[2] << 16) | (std::uint32_t(p[3]) << 24);
}
inline std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace detail

// Reads a 16- or 24-bit integer PCM WAV file. Samples are normalized by the
// type's max magnitude (16384 -> 0.5 for 16-bit input).
inline AudioBuffer read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on " + path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw UnsupportedFormat("not a RIFF/WAVE file: " + path);

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  std::uint32_t data_size = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(&bytes[pos]);
    std::uint32_t size = detail::read_u32(&bytes[pos + 4]);
    pos += 8;
    if (pos + size > bytes.size()) size = std::uint32_t(bytes.size() - pos);
    if (std::memcmp(id, "fmt ", 4) == 0 && size >= 16) {
      format = detail::read_u16(&bytes[pos]);
      channels = detail::read_u16(&bytes[pos + 2]);
      rate = detail::read_u32(&bytes[pos + 4]);
      bits = detail::read_u16(&bytes[pos + 14]);
      if (format == 0xFFFE && size >= 26) {
        // WAVE_FORMAT_EXTENSIBLE: the real format tag leads the SubFormat GUID.
        format = detail::read_u16(&bytes[pos + 24]);
      }
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = &bytes[pos];
      data_size = size;
    }
    pos += size + (size & 1);  // chunks are word-aligned
  }

  if (!have_fmt) throw UnsupportedFormat("missing fmt chunk: " + path);
  if (format == 3) throw UnsupportedFormat("float PCM is not supported");
  if (format != 1)
    throw UnsupportedFormat("unsupported codec tag " + std::to_string(format));
  if (channels < 1 || channels > 2)
    throw UnsupportedFormat(std::to_string(channels) + " channels");
  if (bits != 16 && bits != 24)
    throw UnsupportedFormat(std::to_string(bits) + "-bit samples");
  if (!detail::file_io_rate(static_cast<int>(rate)))
    throw UnsupportedFormat("sample rate " + std::to_string(rate));
  if (data == nullptr) throw UnsupportedFormat("missing data chunk: " + path);

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t n_frames = data_size / frame_bytes;

  AudioBuffer out;
  out.sample_rate = static_cast<int>(rate);
  out.channels.assign(channels, std::vector<float>(n_frames));
  const unsigned char* p = data;
  for (std::size_t i = 0; i < n_frames; ++i) {
    for (int c = 0; c < channels; ++c, p += bytes_per_sample) {
      std::int32_t v;
      if (bits == 16) {
        v = static_cast<std::int16_t>(p[0] | (p[1] << 8));
        out.channels[c][i] = static_cast<float>(v) / 32768.0f;
      } else {
        v = p[0] | (p[1] << 8) | (p[2] << 16);
        if (v & 0x800000) v |= ~0xFFFFFF;  // sign-extend
        out.channels[c][i] = static_cast<float>(v) / 8388608.0f;
      }
    }
  }
  return out;
}

// Writes 16-bit PCM. Amplitudes are clamped to [-1, 1]; a full-scale 1.0
// stores as 32767. Round trip through write/read is exact to 1 LSB.
inline void write_wav(const AudioBuffer& buffer, const std::string& path) {
  const int channels = buffer.channel_count();
  if (channels < 1 || channels > 2)
    throw InvalidParams("buffer must have 1 or 2 channels");
  for (const auto& ch : buffer.channels)
    if (ch.size() != buffer.frames())
      throw InvalidParams("channel lengths differ");
  if (!detail::file_io_rate(buffer.sample_rate))
    throw InvalidParams("file sample rate must be 44100 or 48000");

  const std::uint32_t n_frames = static_cast<std::uint32_t>(buffer.frames());
  const std::uint32_t data_size = n_frames * channels * 2;
  const std::uint32_t byte_rate = buffer.sample_rate * channels * 2;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");

  auto u16 = [&](std::uint16_t v) {
    char b[2] = {char(v & 0xFF), char(v >> 8)};
    out.write(b, 2);
  };
  auto u32 = [&](std::uint32_t v) {
    char b[4] = {char(v & 0xFF), char((v >> 8) & 0xFF), char((v >> 16) & 0xFF),
                 char(v >> 24)};
    out.write(b, 4);
  };

  out.write("RIFF", 4);
  u32(36 + data_size);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  u32(16);
  u16(1);  // integer PCM
  u16(static_cast<std::uint16_t>(channels));
  u32(static_cast<std::uint32_t>(buffer.sample_rate));
  u32(byte_rate);
  u16(static_cast<std::uint16_t>(channels * 2));  // block align
  u16(16);
  out.write("data", 4);
  u32(data_size);

  std::vector<char> frame(channels * 2);
  for (std::uint32_t i = 0; i < n_frames; ++i) {
    for (int c = 0; c < channels; ++c) {
      long v = std::lround(buffer.channels[c][i] * 32768.0);
      v = std::min(32767L, std::max(-32768L, v));
      frame[2 * c] = static_cast<char>(v & 0xFF);
      frame[2 * c + 1] = static_cast<char>((v >> 8) & 0xFF);
    }
    out.write(frame.data(), frame.size());
  }
  if (!out) throw IoError("write failure on " + path);
}

// Constant-tempo mono click track: a short sine burst at every beat instant
// k*60/tempo, silence elsewhere. The stand-in cover signal for tests and for
// the gen-cover command.
inline AudioBuffer synth_click_track(double tempo_bpm, int beats,
                                     int sample_rate, double click_ms = 10.0,
                                     double click_freq_hz = 1000.0) {
  if (tempo_bpm < 40.0 || tempo_bpm > 300.0)
    throw InvalidParams("tempo must be in [40, 300] bpm");
  if (beats < 1) throw InvalidParams("beats must be positive");
  if (sample_rate <= 0) throw InvalidParams("sample rate must be positive");
  const double beat_s = 60.0 / tempo_bpm;
  if (click_ms <= 0.0 || click_ms / 1000.0 >= beat_s)
    throw InvalidParams("click length must fit inside one beat period");

  const std::size_t total =
      static_cast<std::size_t>(std::llround(beats * beat_s * sample_rate));
  std::vector<float> samples(total, 0.0f);

  const std::size_t click_len =
      static_cast<std::size_t>(std::llround(click_ms / 1000.0 * sample_rate));
  const double fade_s = 0.001;
  const double amplitude = 0.8;
  for (int k = 0; k < beats; ++k) {
    const std::size_t start =
        static_cast<std::size_t>(std::llround(k * beat_s * sample_rate));
    for (std::size_t j = 0; j < click_len && start + j < total; ++j) {
      const double t = static_cast<double>(j) / sample_rate;
      const double remain = (click_len - 1.0 - j) / sample_rate;
      double env = 1.0;
      if (t < fade_s) env = t / fade_s;
      if (remain < fade_s) env = std::min(env, remain / fade_s);
      samples[start + j] = static_cast<float>(
          amplitude * env * std::sin(2.0 * M_PI * click_freq_hz * t));
    }
  }
  return AudioBuffer::mono(sample_rate, std::move(samples));
}

}  // namespace tempostego
