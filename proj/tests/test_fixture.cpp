#include <doctest.h>

#include <set>

#include "synthrec/corpus.hpp"
#include "synthrec/masker.hpp"
#include "synthrec/medner.hpp"
#include "synthrec/phi.hpp"
#include "synthrec/text.hpp"

using namespace synthrec;

TEST_CASE("fixture corpus is deterministic and sized as requested") {
  Corpus a = generate_fixture_corpus(7, 12);
  Corpus b = generate_fixture_corpus(7, 12);
  CHECK(a.docs.size() == 12);
  CHECK(corpus_to_json(a) == corpus_to_json(b));
  Corpus c = generate_fixture_corpus(8, 12);
  CHECK(corpus_to_json(a) != corpus_to_json(c));
  std::set<std::string> ids;
  for (const auto& ad : a.docs) CHECK(ids.insert(ad.doc.id).second);
}

TEST_CASE("fixture gold spans are token-aligned and on-text") {
  Corpus corpus = generate_fixture_corpus(3, 10);
  for (const auto& ad : corpus.docs) {
    for (const auto& s : ad.gold_phi) {
      CHECK(s.token_last >= s.token_first);
      CHECK(s.token_last < ad.doc.tokens.size());
      CHECK(ad.doc.tokens[s.token_first].start == s.start);
      CHECK(ad.doc.tokens[s.token_last].end == s.end);
      // category/subtype belong to the known taxonomy
      CHECK_NOTHROW(map_to_hipaa(s.category, s.subtype));
    }
    for (const auto& s : ad.gold_med) {
      CHECK(s.token_last < ad.doc.tokens.size());
      CHECK((s.category == "PROBLEM" || s.category == "TEST" ||
             s.category == "TREATMENT"));
    }
  }
}

TEST_CASE("every fixture letter carries the slot types the templates promise") {
  Corpus corpus = generate_fixture_corpus(9, 15);
  for (const auto& ad : corpus.docs) {
    std::set<std::string> cats;
    for (const auto& s : ad.gold_phi) cats.insert(s.category);
    CHECK(cats.count("DATE"));
    CHECK(cats.count("NAME"));
    CHECK(!ad.gold_med.empty());
  }
}

TEST_CASE("the shipped ruleset covers every fixture gold hipaa token") {
  // The fixture generator and the default ruleset are co-designed: names are
  // always title-prefixed and the lexicons mirror the generator slot lists.
  // A survivor here means the two data files drifted apart.
  Corpus corpus = generate_fixture_corpus(21, 25);
  RuleSet rules = load_rules(default_data_dir() + "/phi_rules.json");
  for (const auto& ad : corpus.docs) {
    auto detected = detect_phi(ad.doc, rules);
    std::vector<bool> covered(ad.doc.tokens.size(), false);
    for (const auto& s : detected)
      for (std::size_t t = s.token_first; t <= s.token_last; ++t)
        covered[t] = true;
    for (const auto& s : ad.gold_phi) {
      if (!map_to_hipaa(s.category, s.subtype)) continue;
      for (std::size_t t = s.token_first; t <= s.token_last; ++t) {
        INFO("document ", ad.doc.id, " token ", t, " \"",
             ad.doc.tokens[t].text, "\" (", s.category, ")");
        CHECK(covered[t]);
      }
    }
  }
}

TEST_CASE("fixture medical spans are recoverable by the shipped gazetteer") {
  Corpus corpus = generate_fixture_corpus(4, 10);
  Gazetteer gaz = load_gazetteer(default_data_dir() + "/clinical_gazetteer.tsv",
                                 {"PROBLEM", "TEST", "TREATMENT"});
  for (const auto& ad : corpus.docs) {
    auto tagged = tag_medical(ad.doc, gaz);
    std::vector<bool> covered(ad.doc.tokens.size(), false);
    for (const auto& s : tagged)
      for (std::size_t t = s.token_first; t <= s.token_last; ++t)
        covered[t] = true;
    for (const auto& s : ad.gold_med)
      for (std::size_t t = s.token_first; t <= s.token_last; ++t) {
        INFO("document ", ad.doc.id, " med token \"", ad.doc.tokens[t].text, "\"");
        CHECK(covered[t]);
      }
  }
}
