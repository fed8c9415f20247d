#pragma once

// 3-value message code: text <-> streams over {PLUS, MINUS, ZERO}.
//
// Characters map to short PLUS/MINUS sequences (a Morse-derived table, dot ->
// PLUS, dash -> MINUS). ZERO is the reference/silence symbol and only appears
// as a gap: one ZERO between letters, exactly two between words. There is no
// intra-character gap and no end-of-message terminator at this layer.

#include <algorithm>
#include <cctype>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tempostego/errors.hpp"

namespace tempostego {

enum class Symbol : unsigned char { Plus, Minus, Zero };

using SymbolStream = std::vector<Symbol>;

inline char symbol_to_char(Symbol s) {
  switch (s) {
    case Symbol::Plus:
      return '+';
    case Symbol::Minus:
      return '-';
    default:
      return '0';
  }
}

// Character-to-code table. Codes are non-empty strings over {+, -}, pairwise
// distinct, so reverse lookup is unambiguous. Immutable after construction.
class CodeTable {
 public:
  // The adopted table: international Morse with dot -> '+', dash -> '-',
  // covering a-z, 0-9 and 18 punctuation marks. The '(' and ')' entries
  // follow standard international Morse ('(' = -+--+, ')' = -+--+-); see
  // docs/NOTES in README for why these two are called out.
  static const CodeTable& standard() {
    static const CodeTable table(standard_entries());
    return table;
  }

  explicit CodeTable(
      const std::vector<std::pair<char, std::string>>& entries) {
    for (const auto& [ch, code] : entries) {
      if (code.empty()) throw std::logic_error("empty code");
      for (char c : code) {
        if (c != '+' && c != '-') throw std::logic_error("bad code symbol");
      }
      if (!forward_.emplace(ch, code).second)
        throw std::logic_error("duplicate character");
      if (!reverse_.emplace(code, ch).second)
        throw std::logic_error("duplicate code");
    }
  }

  bool contains(char ch) const { return forward_.count(ch) != 0; }

  // Code for a character, or nullptr when unsupported.
  const std::string* code_for(char ch) const {
    auto it = forward_.find(ch);
    return it == forward_.end() ? nullptr : &it->second;
  }

  // Character for a code run, or 0 when the run matches no entry.
  char char_for(std::string_view code) const {
    auto it = reverse_.find(std::string(code));
    return it == reverse_.end() ? '\0' : it->second;
  }

  std::size_t size() const { return forward_.size(); }

  const std::map<char, std::string>& entries() const { return forward_; }

 private:
  static std::vector<std::pair<char, std::string>> standard_entries() {
    return {
        {'a', "+-"},     {'b', "-+++"},   {'c', "-+-+"},   {'d', "-++"},
        {'e', "+"},      {'f', "++-+"},   {'g', "--+"},    {'h', "++++"},
        {'i', "++"},     {'j', "+---"},   {'k', "-+-"},    {'l', "+-++"},
        {'m', "--"},     {'n', "-+"},     {'o', "---"},    {'p', "+--+"},
        {'q', "--+-"},   {'r', "+-+"},    {'s', "+++"},    {'t', "-"},
        {'u', "++-"},    {'v', "+++-"},   {'w', "+--"},    {'x', "-++-"},
        {'y', "-+--"},   {'z', "--++"},

        {'0', "-----"},  {'1', "+----"},  {'2', "++---"},  {'3', "+++--"},
        {'4', "++++-"},  {'5', "+++++"},  {'6', "-++++"},  {'7', "--+++"},
        {'8', "---++"},  {'9', "----+"},

        {',', "--++--"}, {'.', "+-+-+-"}, {':', "---+++"}, {';', "-+-+-+"},
        {'!', "-+-+--"}, {'?', "++--++"}, {'\'', "+----+"}, {'-', "--+++-"},
        {'_', "++--+-"}, {'/', "-++-+"},  {'(', "-+--+"},  {')', "-+--+-"},
        {'"', "+-++-+"}, {'=', "-+++-"},  {'+', "+-+-+"},  {'&', "+-+++"},
        {'@', "+--+-+"}, {'$', "+++-+-"},
    };
  }

  std::map<char, std::string> forward_;
  std::map<std::string, char> reverse_;
};

namespace detail {

inline void append_code(SymbolStream& out, const std::string& code) {
  for (char c : code)
    out.push_back(c == '+' ? Symbol::Plus : Symbol::Minus);
}

}  // namespace detail

// Encodes a message. Input is lowercased first; runs of whitespace collapse
// to a single word gap (two ZEROs), letters within a word are separated by
// one ZERO, and the stream has no leading or trailing ZEROs.
//
// Unsupported characters raise UnsupportedCharacter unless `lenient`, in
// which case they are skipped.
//
//   encode_text("sos")  -> +++0---0+++
//   encode_text("a b")  -> +-00-+++
inline SymbolStream encode_text(const std::string& message,
                                const CodeTable& table = CodeTable::standard(),
                                bool lenient = false) {
  SymbolStream out;
  int pending_zeros = 0;   // gap to emit before the next character
  bool any_emitted = false;
  for (std::size_t i = 0; i < message.size(); ++i) {
    const unsigned char raw = static_cast<unsigned char>(message[i]);
    if (std::isspace(raw)) {
      if (any_emitted) pending_zeros = 2;
      continue;
    }
    const char ch = static_cast<char>(std::tolower(raw));
    const std::string* code = table.code_for(ch);
    if (code == nullptr) {
      if (lenient) continue;
      throw UnsupportedCharacter(message[i], i);
    }
    if (any_emitted)
      out.insert(out.end(), std::max(pending_zeros, 1), Symbol::Zero);
    detail::append_code(out, *code);
    any_emitted = true;
    pending_zeros = 0;
  }
  return out;
}

// Decodes a symbol stream. Leading/trailing ZEROs are ignored; a single
// interior ZERO separates letters, two ZEROs emit a space. Runs of 3+
// interior ZEROs raise MalformedGap in strict mode and collapse to one
// space otherwise.
inline std::string decode_symbols(const SymbolStream& stream,
                                  const CodeTable& table = CodeTable::standard(),
                                  bool strict = false) {
  // Trim the ZERO padding on both ends.
  std::size_t begin = 0;
  std::size_t end = stream.size();
  while (begin < end && stream[begin] == Symbol::Zero) ++begin;
  while (end > begin && stream[end - 1] == Symbol::Zero) --end;

  std::string out;
  std::string run;
  std::size_t run_start = begin;
  int zeros = 0;

  auto flush_run = [&]() {
    if (run.empty()) return;
    const char ch = table.char_for(run);
    if (ch == '\0') throw UnknownCode(run, run_start);
    out.push_back(ch);
    run.clear();
  };

  for (std::size_t i = begin; i < end; ++i) {
    if (stream[i] == Symbol::Zero) {
      if (zeros == 0) flush_run();
      ++zeros;
      if (zeros == 3 && strict) throw MalformedGap(i - 2);
      continue;
    }
    if (zeros >= 2) out.push_back(' ');
    if (zeros > 0) run_start = i;
    zeros = 0;
    run.push_back(symbol_to_char(stream[i]));
  }
  flush_run();
  return out;
}

// Interchange form: one character per symbol over {+, -, 0}.

inline std::string symbols_to_text_form(const SymbolStream& stream) {
  std::string out;
  out.reserve(stream.size());
  for (Symbol s : stream) out.push_back(symbol_to_char(s));
  return out;
}

inline SymbolStream symbols_from_text_form(std::string_view text) {
  SymbolStream out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    switch (text[i]) {
      case '+':
        out.push_back(Symbol::Plus);
        break;
      case '-':
        out.push_back(Symbol::Minus);
        break;
      case '0':
        out.push_back(Symbol::Zero);
        break;
      default:
        throw ParseError(text[i], i);
    }
  }
  return out;
}

}  // namespace tempostego
