#include "synthrec/phi.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "synthrec/errors.hpp"

namespace synthrec {

using nlohmann::json;

std::string default_data_dir() {
  if (const char* env = std::getenv("SYNTHRECORD_DATA_DIR")) return env;
#ifdef SYNTHREC_DATA_DIR
  return SYNTHREC_DATA_DIR;
#else
  return "data";
#endif
}

namespace {

const std::set<std::string> kCategories = {"DATE", "ID",  "NAME",
                                           "CONTACT", "AGE", "LOCATION"};

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

RuleSet parse_rules(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("ruleset JSON parse error: ") + e.what());
  }

  RuleSet rs;
  const json lexicons = j.value("lexicons", json::object());
  for (const auto& [name, words] : lexicons.items()) {
    std::set<std::string>& lex = rs.lexicons[name];
    for (const auto& w : words) lex.insert(lowercase(w.get<std::string>()));
  }

  std::set<int> priorities;
  for (const auto& rj : j.value("rules", json::array())) {
    PhiRule r;
    r.name = rj.at("name").get<std::string>();
    r.category = rj.at("category").get<std::string>();
    if (!kCategories.count(r.category))
      throw DataError("rule " + r.name + ": unknown category " + r.category);
    r.priority = rj.at("priority").get<int>();
    if (!priorities.insert(r.priority).second)
      throw DataError("rule " + r.name + ": duplicate priority " +
                      std::to_string(r.priority));
    r.icase = rj.value("icase", false);
    std::string kind = rj.at("kind").get<std::string>();
    if (kind == "pattern") {
      r.kind = RuleKind::Pattern;
      r.pattern_source = rj.at("pattern").get<std::string>();
      auto flags = std::regex::ECMAScript;
      if (r.icase) flags |= std::regex::icase;
      try {
        r.compiled = std::regex(r.pattern_source, flags);
      } catch (const std::regex_error& e) {
        throw DataError("rule " + r.name + ": pattern does not compile: " +
                        e.what());
      }
    } else if (kind == "lexicon") {
      r.kind = RuleKind::Lexicon;
      r.lexicon_ref = rj.at("lexicon").get<std::string>();
      if (!rs.lexicons.count(r.lexicon_ref))
        throw DataError("rule " + r.name + ": unknown lexicon " + r.lexicon_ref);
    } else {
      throw DataError("rule " + r.name + ": unknown kind " + kind);
    }
    rs.rules.push_back(std::move(r));
  }
  std::sort(rs.rules.begin(), rs.rules.end(),
            [](const PhiRule& a, const PhiRule& b) { return a.priority < b.priority; });
  return rs;
}

RuleSet load_rules(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open ruleset file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_rules(ss.str());
}

namespace {

struct Candidate {
  std::size_t token_first, token_last;
  int priority;
  const PhiRule* rule;
};

// Covering token range for a byte range; false if no token intersects.
bool byte_range_to_tokens(const Document& doc, std::size_t byte_start,
                          std::size_t byte_end, std::size_t& first,
                          std::size_t& last) {
  bool found = false;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const Token& t = doc.tokens[i];
    if (t.byte_end <= byte_start || t.byte_start >= byte_end) continue;
    if (!found) first = i;
    last = i;
    found = true;
  }
  return found;
}

}  // namespace

std::vector<AnnotationSpan> detect_phi(const Document& doc, const RuleSet& rules) {
  std::vector<Candidate> cands;
  for (const PhiRule& rule : rules.rules) {
    if (rule.kind == RuleKind::Pattern) {
      auto begin = std::sregex_iterator(doc.text.begin(), doc.text.end(),
                                        rule.compiled);
      for (auto it = begin; it != std::sregex_iterator(); ++it) {
        std::size_t bs = static_cast<std::size_t>(it->position());
        std::size_t be = bs + static_cast<std::size_t>(it->length());
        if (bs == be) continue;
        std::size_t first, last;
        if (byte_range_to_tokens(doc, bs, be, first, last))
          cands.push_back({first, last, rule.priority, &rule});
      }
    } else {
      const auto& lex = rules.lexicons.at(rule.lexicon_ref);
      for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
        if (lex.count(lowercase(doc.tokens[i].text)))
          cands.push_back({i, i, rule.priority, &rule});
      }
    }
  }

  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.priority != b.priority) return a.priority < b.priority;
    std::size_t la = a.token_last - a.token_first;
    std::size_t lb = b.token_last - b.token_first;
    if (la != lb) return la > lb;
    return a.token_first < b.token_first;
  });

  std::vector<bool> claimed(doc.tokens.size(), false);
  std::vector<AnnotationSpan> out;
  for (const Candidate& c : cands) {
    bool conflict = false;
    for (std::size_t i = c.token_first; i <= c.token_last; ++i)
      if (claimed[i]) conflict = true;
    if (conflict) continue;
    for (std::size_t i = c.token_first; i <= c.token_last; ++i) claimed[i] = true;
    AnnotationSpan s;
    s.ns = SpanNamespace::Phi;
    s.category = c.rule->category;
    s.token_first = c.token_first;
    s.token_last = c.token_last;
    s.start = doc.tokens[c.token_first].start;
    s.end = doc.tokens[c.token_last].end;
    s.source = SpanSource::Detector;
    s.rule = c.rule->name;
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(),
            [](const AnnotationSpan& a, const AnnotationSpan& b) {
              return a.token_first < b.token_first;
            });
  return out;
}

bool map_to_hipaa(const std::string& category, const std::string& subtype) {
  static const std::set<std::string> kKnownCategories = {
      "NAME", "PROFESSION", "LOCATION", "AGE", "DATE", "CONTACT", "ID"};
  if (!kKnownCategories.count(category))
    throw DataError("map_to_hipaa: unknown category " + category +
                    " (known: NAME, PROFESSION, LOCATION, AGE, DATE, CONTACT, ID)");
  if (category == "AGE" || category == "DATE" || category == "ID") return true;
  if (category == "NAME") return subtype == "PATIENT";
  if (category == "CONTACT")
    return subtype == "PHONE" || subtype == "FAX" || subtype == "EMAIL";
  if (category == "LOCATION")
    return subtype == "STREET" || subtype == "CITY" || subtype == "ZIP" ||
           subtype == "ORGANIZATION";
  return false;  // PROFESSION
}

}  // namespace synthrec
