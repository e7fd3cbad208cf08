#include <doctest.h>

#include <cctype>

#include "synthrec/errors.hpp"
#include "synthrec/rng.hpp"
#include "synthrec/text.hpp"

using namespace synthrec;

namespace {

// Reference tokenizer: independent character-class splitter over ASCII.
std::vector<std::string> reference_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  int prev = 0;
  auto cls = [](unsigned char c) {
    if (std::isspace(c)) return 0;
    if (std::isalpha(c) || c >= 128) return 1;
    if (std::isdigit(c)) return 2;
    return 3;
  };
  for (unsigned char c : text) {
    int k = cls(c);
    if (k == 0 || (!cur.empty() && k != prev)) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    }
    if (k != 0) cur += static_cast<char>(c);
    prev = k;
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string random_text(Rng& rng, std::size_t len) {
  static const std::string alphabet = "abXY 019.,-!\n\t  ";
  std::string s;
  for (std::size_t i = 0; i < len; ++i)
    s += alphabet[rng.bounded(alphabet.size())];
  return s;
}

}  // namespace

TEST_CASE("tokenizer matches the reference splitter on random text") {
  Rng rng(11);
  for (int iter = 0; iter < 500; ++iter) {
    std::string text = random_text(rng, rng.bounded(60));
    Document doc = tokenize(text);
    auto expected = reference_tokens(text);
    REQUIRE(doc.tokens.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i)
      CHECK(doc.tokens[i].text == expected[i]);
  }
}

TEST_CASE("detokenization reproduces the input byte for byte") {
  Rng rng(12);
  for (int iter = 0; iter < 500; ++iter) {
    std::string text = random_text(rng, rng.bounded(80));
    Document doc = tokenize(text);
    CHECK(render(doc, {}) == text);
  }
  CHECK(render(tokenize("  leading and trailing  "), {}) ==
        "  leading and trailing  ");
}

TEST_CASE("token offsets index the original text") {
  Document doc = tokenize("Mr. Smith's 2nd visit...");
  std::vector<std::string> expected = {"Mr", ".",  "Smith", "'", "s",
                                       "2",  "nd", "visit", "..."};
  REQUIRE(doc.tokens.size() == expected.size());
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    CHECK(doc.tokens[i].text == expected[i]);
    CHECK(doc.text.substr(doc.tokens[i].byte_start,
                          doc.tokens[i].byte_end - doc.tokens[i].byte_start) ==
          expected[i]);
    CHECK(substr_codepoints(doc.text, doc.tokens[i].start, doc.tokens[i].end) ==
          expected[i]);
  }
}

TEST_CASE("utf-8 codepoint offsets differ from byte offsets") {
  Document doc = tokenize("caf\xc3\xa9 bar");
  REQUIRE(doc.tokens.size() == 2);
  CHECK(doc.tokens[0].text == "caf\xc3\xa9");
  CHECK(doc.tokens[0].end == 4);        // codepoints
  CHECK(doc.tokens[0].byte_end == 5);   // bytes
  CHECK(doc.tokens[1].start == 5);
  CHECK(codepoint_length("caf\xc3\xa9") == 4);
  CHECK(substr_codepoints("caf\xc3\xa9 bar", 0, 4) == "caf\xc3\xa9");
}

TEST_CASE("render substitutes tokens in place") {
  Document doc = tokenize("one two three");
  CHECK(render(doc, {{1, "TWO"}}) == "one TWO three");
  CHECK(render(doc, {{0, "[MASK]"}, {2, "[MASK]"}}) == "[MASK] two [MASK]");
  CHECK_THROWS_AS(render(doc, {{3, "x"}}), DataError);
}

TEST_CASE("render substitution matches the splice oracle on random docs") {
  Rng rng(13);
  for (int iter = 0; iter < 200; ++iter) {
    std::string text = random_text(rng, 20 + rng.bounded(60));
    Document doc = tokenize(text);
    if (doc.tokens.empty()) continue;
    std::size_t idx = rng.bounded(doc.tokens.size());
    std::string replacement = "R" + std::to_string(rng.bounded(100));
    // Oracle: splice by byte offsets.
    std::string expected = text.substr(0, doc.tokens[idx].byte_start) +
                           replacement + text.substr(doc.tokens[idx].byte_end);
    CHECK(render(doc, {{idx, replacement}}) == expected);
  }
}

TEST_CASE("sentences split at terminators and blank lines") {
  Document doc = tokenize("First one. Second!\n\nThird block\n\nlast bit");
  auto spans = split_sentences(doc);
  REQUIRE(spans.size() == 4);
  CHECK(doc.tokens[spans[0].last_token].text == ".");
  CHECK(doc.tokens[spans[1].last_token].text == "!");
  CHECK(doc.tokens[spans[2].last_token].text == "block");
  CHECK(spans[3].last_token == doc.tokens.size() - 1);
  // every token belongs to exactly one sentence
  CHECK(spans[0].first_token == 0);
  for (std::size_t i = 1; i < spans.size(); ++i)
    CHECK(spans[i].first_token == spans[i - 1].last_token + 1);
  CHECK(split_sentences(tokenize("")).empty());
}

TEST_CASE("syllable counting follows the vowel-group heuristic") {
  CHECK(count_syllables("the") == 1);
  CHECK(count_syllables("cat") == 1);
  CHECK(count_syllables("hospital") == 3);
  CHECK(count_syllables("severe") == 2);      // silent terminal e
  CHECK(count_syllables("queue") == 1);
  CHECK(count_syllables("rhythm") == 1);      // y as vowel
  CHECK(count_syllables("strength") == 1);
  CHECK(count_syllables("123") == 0);         // no letters
  CHECK(count_syllables("...") == 0);
  CHECK(count_syllables("x") == 1);           // letters imply at least 1
  CHECK(count_syllables("respiratory") == 5);
}
