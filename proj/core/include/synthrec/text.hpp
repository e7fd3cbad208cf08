#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace synthrec {

// A single whitespace-free token. Offsets are in Unicode scalar values over
// the document text; byte offsets are kept alongside for regex matching.
struct Token {
  std::string text;
  std::size_t start = 0;       // codepoint offset, inclusive
  std::size_t end = 0;         // codepoint offset, exclusive
  std::size_t byte_start = 0;
  std::size_t byte_end = 0;
  std::string trailing_gap;    // whitespace between this token and the next
};

struct SentenceSpan {
  std::size_t first_token = 0;
  std::size_t last_token = 0;  // inclusive
};

// Immutable tokenized text. Detokenizing (leading gap + token texts + trailing
// gaps) reproduces `text` byte-for-byte.
struct Document {
  std::string id;
  std::string text;
  std::string leading_gap;  // whitespace before the first token
  std::vector<Token> tokens;
};

// Character-class tokenizer: splits on whitespace and at letter/digit/punct
// boundaries, keeping punctuation runs as single tokens.
Document tokenize(std::string_view text, std::string id = "");

// Sentences end at ".", "!", "?" tokens or a trailing gap holding a blank
// line; leftover tokens form a final sentence.
std::vector<SentenceSpan> split_sentences(const Document& doc);

// Vowel-group heuristic with the terminal silent-e subtraction. Tokens with
// no letters count 0; tokens with a letter count at least 1.
std::size_t count_syllables(std::string_view word);

// Original text with the given tokens substituted in place.
std::string render(const Document& doc,
                   const std::map<std::size_t, std::string>& replacements);

// Substring by codepoint offsets (UTF-8 aware).
std::string substr_codepoints(std::string_view text, std::size_t start,
                              std::size_t end);

// Number of Unicode scalar values in a UTF-8 string.
std::size_t codepoint_length(std::string_view text);

}  // namespace synthrec
