#pragma once

#include <map>
#include <string>
#include <vector>

#include "synthrec/text.hpp"

namespace synthrec {

enum class PosTag { Noun, Verb, Adj, Adv, Pron, Det, Adp, Num, Punct, Other };

const char* to_string(PosTag tag);
PosTag pos_tag_from_string(const std::string& name);

struct PosLexicon {
  std::map<std::string, PosTag> words;  // lowercased
};

// File format: "word<TAB>TAG" lines, '#' comments.
PosLexicon load_pos_lexicon(const std::string& path);
PosLexicon parse_pos_lexicon(const std::string& text);

// Lexicon lookup first, then suffix rules, then the NOUN default. One tag per
// token, always.
std::vector<PosTag> tag_pos(const Document& doc, const PosLexicon& lexicon);

}  // namespace synthrec
