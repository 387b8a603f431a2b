#pragma once

// Tokenization, punctuation counting and n-gram generation.
//
// The token definition is fixed by a handful of worked examples: punctuation
// never becomes a token, a hyphen between two letters keeps a word whole
// ("close-downs"), and so does an apostrophe between two letters or digits
// ("don't"). Everything else that belongs to the punctuation set acts as a
// separator, exactly like whitespace.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "argmine/error.hpp"

namespace argmine {

namespace utf8 {

struct Decoded {
  char32_t cp;
  std::size_t length;  // bytes consumed, always >= 1
};

// Decodes one code point at `pos`. Malformed sequences decode as U+FFFD and
// consume a single byte so that scanning always makes progress.
inline Decoded decode(std::string_view s, std::size_t pos) {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) return {b0, 1};
  std::size_t len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return {0xFFFD, 1};
  }
  if (pos + len > s.size()) return {0xFFFD, 1};
  for (std::size_t i = 1; i < len; ++i) {
    const auto b = static_cast<unsigned char>(s[pos + i]);
    if ((b & 0xC0) != 0x80) return {0xFFFD, 1};
    cp = (cp << 6) | (b & 0x3F);
  }
  return {cp, len};
}

inline void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Full decode into code points; the second vector holds the byte offset of
// each code point plus a final entry equal to s.size().
inline std::vector<char32_t> decode_all(std::string_view s,
                                        std::vector<std::size_t>* offsets = nullptr) {
  std::vector<char32_t> cps;
  cps.reserve(s.size());
  if (offsets) {
    offsets->clear();
    offsets->reserve(s.size() + 1);
  }
  for (std::size_t pos = 0; pos < s.size();) {
    const auto d = decode(s, pos);
    if (offsets) offsets->push_back(pos);
    cps.push_back(d.cp);
    pos += d.length;
  }
  if (offsets) offsets->push_back(s.size());
  return cps;
}

}  // namespace utf8

inline bool is_space(char32_t c) {
  switch (c) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\f': case U'\v':
    case 0x00A0: case 0x1680: case 0x2028: case 0x2029: case 0x202F:
    case 0x205F: case 0x3000: case 0xFEFF:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200B;
  }
}

// Members of the punctuation set, ignoring the context rule for '-'.
inline bool is_punctuation_char(char32_t c) {
  switch (c) {
    case U'.': case U',': case U';': case U':': case U'!': case U'?':
    case U'\'': case U'"': case U'(': case U')': case U'[': case U']':
    case U'{': case U'}': case U'-':
    case 0x2013:  // en dash
    case 0x2014:  // em dash
    case 0x2026:  // horizontal ellipsis
    case 0x2018: case 0x2019:  // single curly quotes
    case 0x201C: case 0x201D:  // double curly quotes
      return true;
    default:
      return false;
  }
}

inline bool is_apostrophe(char32_t c) { return c == U'\'' || c == 0x2019; }

inline bool is_ascii_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

// Letters are ASCII letters plus any non-ASCII code point that is neither
// whitespace nor punctuation. Good enough for English essays with the odd
// accented name.
inline bool is_letter(char32_t c) {
  if ((c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z')) return true;
  return c >= 0x80 && !is_space(c) && !is_punctuation_char(c);
}

inline bool is_alnum(char32_t c) { return is_letter(c) || is_ascii_digit(c); }

inline bool is_upper(char32_t c) {
  return (c >= U'A' && c <= U'Z') || (c >= 0xC0 && c <= 0xDE && c != 0xD7);
}

namespace detail {

inline char32_t at(const std::vector<char32_t>& cps, std::size_t i) {
  return i < cps.size() ? cps[i] : U' ';
}

// Whether cps[i] is a punctuation mark in context. '-' only counts when it is
// not flanked by letters on both sides.
inline bool counts_as_punctuation(const std::vector<char32_t>& cps, std::size_t i) {
  const char32_t c = cps[i];
  if (!is_punctuation_char(c)) return false;
  if (c == U'-') {
    const char32_t prev = i > 0 ? cps[i - 1] : U' ';
    return !(is_letter(prev) && is_letter(at(cps, i + 1)));
  }
  return true;
}

// Whether cps[i] is glued into the surrounding word instead of splitting it.
inline bool joins_word(const std::vector<char32_t>& cps, std::size_t i) {
  const char32_t c = cps[i];
  const char32_t prev = i > 0 ? cps[i - 1] : U' ';
  const char32_t next = at(cps, i + 1);
  if (c == U'-') return is_letter(prev) && is_letter(next);
  if (is_apostrophe(c)) return is_alnum(prev) && is_alnum(next);
  return false;
}

}  // namespace detail

struct TokenList {
  std::vector<std::string> tokens;
  std::size_t punctuation_count = 0;

  std::size_t size() const { return tokens.size(); }
};

inline std::size_t count_punctuation(std::string_view text) {
  const auto cps = utf8::decode_all(text);
  std::size_t n = 0;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (detail::counts_as_punctuation(cps, i)) ++n;
  }
  return n;
}

inline TokenList tokenize(std::string_view text) {
  const auto cps = utf8::decode_all(text);
  TokenList out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.tokens.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i];
    if (detail::counts_as_punctuation(cps, i)) ++out.punctuation_count;
    if (is_space(c)) {
      flush();
    } else if (is_punctuation_char(c) && !detail::joins_word(cps, i)) {
      flush();
    } else {
      utf8::append(current, c);
    }
  }
  flush();
  return out;
}

// ASCII-only case folding; multi-byte sequences are left untouched.
inline std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) {
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
  }
  return out;
}

inline std::vector<std::string> lowercase_tokens(std::span<const std::string> tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(to_lower(t));
  return out;
}

// N-grams are represented as their lowercased tokens joined by a single
// space. Tokens never contain whitespace, so the encoding is unambiguous.
inline std::vector<std::string> ngrams(std::span<const std::string> tokens, int n) {
  if (n < 1 || n > 3) throw Error("ngram order must be 1, 2 or 3, got " + std::to_string(n));
  std::vector<std::string> out;
  const auto order = static_cast<std::size_t>(n);
  if (tokens.size() < order) return out;
  out.reserve(tokens.size() - order + 1);
  for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
    std::string gram = to_lower(tokens[i]);
    for (std::size_t j = 1; j < order; ++j) {
      gram.push_back(' ');
      gram += to_lower(tokens[i + j]);
    }
    out.push_back(std::move(gram));
  }
  return out;
}

}  // namespace argmine
