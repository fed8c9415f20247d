#pragma once

// Error types shared across the library. Every domain failure is an exception
// derived from Error; name() carries the stable identifier that the CLI prints
// on its diagnostic stream.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tempostego {

class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& detail)
      : std::runtime_error(name + ": " + detail), name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

// codec

class UnsupportedCharacter : public Error {
 public:
  UnsupportedCharacter(char ch, std::size_t position)
      : Error("UnsupportedCharacter",
              "character '" + std::string(1, ch) + "' at position " +
                  std::to_string(position) + " has no code"),
        character(ch),
        position(position) {}

  char character;
  std::size_t position;
};

class UnknownCode : public Error {
 public:
  UnknownCode(std::string run, std::size_t position)
      : Error("UnknownCode",
              "no table entry for run \"" + run + "\" at symbol index " +
                  std::to_string(position)),
        run(std::move(run)),
        position(position) {}

  std::string run;
  std::size_t position;
};

class MalformedGap : public Error {
 public:
  explicit MalformedGap(std::size_t position)
      : Error("MalformedGap", "run of 3+ interior zeros at symbol index " +
                                  std::to_string(position)),
        position(position) {}

  std::size_t position;
};

class ParseError : public Error {
 public:
  ParseError(char ch, std::size_t position)
      : Error("ParseError", "invalid character '" + std::string(1, ch) +
                                "' at index " + std::to_string(position)),
        character(ch),
        position(position) {}

  char character;
  std::size_t position;
};

// audio_io

class IoError : public Error {
 public:
  explicit IoError(const std::string& detail) : Error("IoError", detail) {}
};

class UnsupportedFormat : public Error {
 public:
  explicit UnsupportedFormat(const std::string& detail)
      : Error("UnsupportedFormat", detail) {}
};

class InvalidParams : public Error {
 public:
  explicit InvalidParams(const std::string& detail)
      : Error("InvalidParams", detail) {}
};

// tsm

class EmptySegment : public Error {
 public:
  EmptySegment() : Error("EmptySegment", "cannot stretch an empty segment") {}
};

// embedder

class InsufficientCapacity : public Error {
 public:
  InsufficientCapacity(std::size_t needed_units, std::size_t available_units)
      : Error("InsufficientCapacity",
              "message needs " + std::to_string(needed_units) +
                  " units but the cover holds " +
                  std::to_string(available_units)),
        needed_units(needed_units),
        available_units(available_units) {}

  std::size_t needed_units;
  std::size_t available_units;
};

// tracker

class AudioTooShort : public Error {
 public:
  explicit AudioTooShort(const std::string& detail)
      : Error("AudioTooShort", detail) {}
};

class TooFewOnsets : public Error {
 public:
  TooFewOnsets(std::size_t got, std::size_t needed)
      : Error("TooFewOnsets", "got " + std::to_string(got) + ", need at least " +
                                  std::to_string(needed)) {}
};

class UnstableTempo : public Error {
 public:
  explicit UnstableTempo(const std::string& detail)
      : Error("UnstableTempo", detail) {}
};

class TooFewBeats : public Error {
 public:
  TooFewBeats(std::size_t got, std::size_t needed)
      : Error("TooFewBeats", "got " + std::to_string(got) + ", need at least " +
                                 std::to_string(needed)) {}
};

// extractor

class NoMessage : public Error {
 public:
  NoMessage() : Error("NoMessage", "no non-reference tempo unit found") {}
};

// detector

class EmptySet : public Error {
 public:
  explicit EmptySet(const std::string& which)
      : Error("EmptySet", which + " sample set is empty") {}
};

}  // namespace tempostego
