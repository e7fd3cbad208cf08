#include <doctest.h>

#include <cstdlib>

#include "synthrec/errors.hpp"
#include "synthrec/phi.hpp"

using namespace synthrec;

namespace {

RuleSet shipped_rules() {
  return load_rules(default_data_dir() + "/phi_rules.json");
}

std::vector<AnnotationSpan> detect(const std::string& text, const RuleSet& rs) {
  return detect_phi(tokenize(text, "t"), rs);
}

bool has(const std::vector<AnnotationSpan>& spans, const std::string& category,
         const std::string& surface, const Document& doc) {
  for (const auto& s : spans) {
    std::string got;
    for (std::size_t t = s.token_first; t <= s.token_last; ++t) {
      got += doc.tokens[t].text;
      if (t != s.token_last) got += " ";
    }
    if (s.category == category && got == surface) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("shipped ruleset detects the core phi shapes") {
  RuleSet rs = shipped_rules();
  std::string text =
      "Dr. John Smith saw the patient on January 14, 2019 in Boston. "
      "MRN: 1234567. Call 555-123-4567 or fax 555-987-6543. "
      "The 83-year-old lives at 12 Oak Street, ZIP 02115. "
      "Email john.smith@example.org.";
  Document doc = tokenize(text, "t");
  auto spans = detect_phi(doc, rs);
  CHECK(has(spans, "NAME", "Dr . John Smith", doc));
  CHECK(has(spans, "DATE", "January 14 , 2019", doc));
  CHECK(has(spans, "LOCATION", "Boston", doc));
  CHECK(has(spans, "CONTACT", "555 - 123 - 4567", doc));
  CHECK(has(spans, "AGE", "83 - year - old", doc));
  bool found_id = false, found_email = false, found_zip = false;
  for (const auto& s : spans) {
    if (s.category == "ID") found_id = true;
    if (s.category == "CONTACT" &&
        doc.tokens[s.token_first].text == "john") found_email = true;
    if (s.category == "LOCATION" && doc.tokens[s.token_first].text == "02115")
      found_zip = true;
  }
  CHECK(found_id);
  CHECK(found_email);
  CHECK(found_zip);
}

TEST_CASE("detected spans never overlap and lower priority wins") {
  RuleSet rs = shipped_rules();
  // "02115" is both a zip candidate and a plain number; "January 14, 2019"
  // contains "2019" but the date rule has lower priority and claims it first.
  Document doc = tokenize("Seen January 14, 2019, zip 02115.", "t");
  auto spans = detect_phi(doc, rs);
  std::vector<bool> claimed(doc.tokens.size(), false);
  for (const auto& s : spans)
    for (std::size_t t = s.token_first; t <= s.token_last; ++t) {
      CHECK(!claimed[t]);
      claimed[t] = true;
    }
  CHECK(has(spans, "DATE", "January 14 , 2019", doc));
}

TEST_CASE("ruleset parsing rejects malformed inputs") {
  CHECK_THROWS_WITH_AS(
      parse_rules(R"({"rules":[{"name":"r","category":"WEIRD","kind":"pattern","pattern":"x","priority":1}]})"),
      doctest::Contains("unknown category"), DataError);
  CHECK_THROWS_WITH_AS(
      parse_rules(R"({"rules":[
        {"name":"a","category":"DATE","kind":"pattern","pattern":"x","priority":1},
        {"name":"b","category":"DATE","kind":"pattern","pattern":"y","priority":1}]})"),
      doctest::Contains("duplicate priority"), DataError);
  CHECK_THROWS_WITH_AS(
      parse_rules(R"({"rules":[{"name":"bad","category":"DATE","kind":"pattern","pattern":"[","priority":1}]})"),
      doctest::Contains("bad"), DataError);
  CHECK_THROWS_WITH_AS(
      parse_rules(R"({"rules":[{"name":"l","category":"NAME","kind":"lexicon","lexicon":"nope","priority":1}]})"),
      doctest::Contains("unknown lexicon"), DataError);
  CHECK_THROWS_AS(parse_rules("not json"), DataError);
}

TEST_CASE("lexicon rules match case-insensitively on single tokens") {
  RuleSet rs = parse_rules(R"({
    "lexicons": {"cities": ["boston", "tulsa"]},
    "rules": [{"name":"city","category":"LOCATION","kind":"lexicon",
               "lexicon":"cities","priority":1}]})");
  Document doc = tokenize("BOSTON and Tulsa but not bostonian", "t");
  auto spans = detect_phi(doc, rs);
  REQUIRE(spans.size() == 2);
  CHECK(doc.tokens[spans[0].token_first].text == "BOSTON");
  CHECK(doc.tokens[spans[1].token_first].text == "Tulsa");
}

TEST_CASE("hipaa mapping matches the category table") {
  CHECK(map_to_hipaa("NAME", "PATIENT"));
  CHECK_FALSE(map_to_hipaa("NAME", "DOCTOR"));
  CHECK_FALSE(map_to_hipaa("PROFESSION", ""));
  CHECK(map_to_hipaa("LOCATION", "STREET"));
  CHECK(map_to_hipaa("LOCATION", "CITY"));
  CHECK(map_to_hipaa("LOCATION", "ZIP"));
  CHECK(map_to_hipaa("LOCATION", "ORGANIZATION"));
  CHECK_FALSE(map_to_hipaa("LOCATION", "STATE"));
  CHECK(map_to_hipaa("AGE", ""));
  CHECK(map_to_hipaa("DATE", ""));
  CHECK(map_to_hipaa("CONTACT", "PHONE"));
  CHECK(map_to_hipaa("CONTACT", "FAX"));
  CHECK(map_to_hipaa("CONTACT", "EMAIL"));
  CHECK_FALSE(map_to_hipaa("CONTACT", "URL"));
  CHECK(map_to_hipaa("ID", "MEDICALRECORD"));
  CHECK(map_to_hipaa("ID", "SSN"));
  CHECK_THROWS_WITH_AS(map_to_hipaa("BOGUS", ""), doctest::Contains("known"),
                       DataError);
}

TEST_CASE("data dir resolves from the environment override first") {
  std::string compiled = default_data_dir();
  setenv("SYNTHRECORD_DATA_DIR", "/tmp/elsewhere", 1);
  CHECK(default_data_dir() == "/tmp/elsewhere");
  unsetenv("SYNTHRECORD_DATA_DIR");
  CHECK(default_data_dir() == compiled);
}
