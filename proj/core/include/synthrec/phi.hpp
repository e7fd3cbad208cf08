#pragma once

#include <map>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "synthrec/annotation.hpp"
#include "synthrec/text.hpp"

namespace synthrec {

enum class RuleKind { Pattern, Lexicon };

struct PhiRule {
  std::string name;
  std::string category;  // DATE, ID, NAME, CONTACT, AGE, LOCATION
  RuleKind kind = RuleKind::Pattern;
  std::string pattern_source;  // pattern kind
  std::string lexicon_ref;     // lexicon kind
  int priority = 0;            // lower value wins conflicts
  bool icase = false;
  std::regex compiled;
};

struct RuleSet {
  std::vector<PhiRule> rules;  // sorted by priority
  std::map<std::string, std::set<std::string>> lexicons;  // lowercased words
};

// Parse + compile a ruleset from its JSON text.
RuleSet parse_rules(const std::string& json_text);
RuleSet load_rules(const std::string& path);

// Match every rule against the raw text, expand matches to whole tokens and
// resolve overlaps by priority, then span length, then leftmost.
std::vector<AnnotationSpan> detect_phi(const Document& doc, const RuleSet& rules);

// True exactly for the HIPAA-mandated category/subtype pairs.
bool map_to_hipaa(const std::string& category, const std::string& subtype);

// Location of the shipped default ruleset and companion data files.
std::string default_data_dir();

}  // namespace synthrec
