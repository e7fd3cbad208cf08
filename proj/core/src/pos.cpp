#include "synthrec/pos.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "synthrec/errors.hpp"

namespace synthrec {

const char* to_string(PosTag tag) {
  switch (tag) {
    case PosTag::Noun: return "NOUN";
    case PosTag::Verb: return "VERB";
    case PosTag::Adj: return "ADJ";
    case PosTag::Adv: return "ADV";
    case PosTag::Pron: return "PRON";
    case PosTag::Det: return "DET";
    case PosTag::Adp: return "ADP";
    case PosTag::Num: return "NUM";
    case PosTag::Punct: return "PUNCT";
    case PosTag::Other: return "OTHER";
  }
  return "?";
}

PosTag pos_tag_from_string(const std::string& name) {
  static const std::map<std::string, PosTag> kMap = {
      {"NOUN", PosTag::Noun}, {"VERB", PosTag::Verb}, {"ADJ", PosTag::Adj},
      {"ADV", PosTag::Adv},   {"PRON", PosTag::Pron}, {"DET", PosTag::Det},
      {"ADP", PosTag::Adp},   {"NUM", PosTag::Num},   {"PUNCT", PosTag::Punct},
      {"OTHER", PosTag::Other}};
  auto it = kMap.find(name);
  if (it == kMap.end()) throw DataError("unknown POS tag: " + name);
  return it->second;
}

namespace {

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

PosLexicon parse_pos_lexicon(const std::string& text) {
  PosLexicon lex;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw DataError("POS lexicon line " + std::to_string(lineno) +
                      ": expected word<TAB>TAG");
    lex.words[lowercase(line.substr(0, tab))] =
        pos_tag_from_string(line.substr(tab + 1));
  }
  return lex;
}

PosLexicon load_pos_lexicon(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open POS lexicon file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_pos_lexicon(ss.str());
}

std::vector<PosTag> tag_pos(const Document& doc, const PosLexicon& lexicon) {
  std::vector<PosTag> tags;
  tags.reserve(doc.tokens.size());
  for (const Token& t : doc.tokens) {
    std::string lower = lowercase(t.text);
    if (auto it = lexicon.words.find(lower); it != lexicon.words.end()) {
      tags.push_back(it->second);
      continue;
    }
    bool all_digit = true, any_alpha = false;
    for (char c : t.text) {
      if (!std::isdigit(static_cast<unsigned char>(c))) all_digit = false;
      if (std::isalpha(static_cast<unsigned char>(c))) any_alpha = true;
    }
    if (all_digit && !t.text.empty()) {
      tags.push_back(PosTag::Num);
    } else if (!any_alpha) {
      tags.push_back(PosTag::Punct);
    } else if (ends_with(lower, "ly")) {
      tags.push_back(PosTag::Adv);
    } else if (ends_with(lower, "ing") || ends_with(lower, "ed")) {
      tags.push_back(PosTag::Verb);
    } else if (ends_with(lower, "ous") || ends_with(lower, "ful") ||
               ends_with(lower, "ive") || ends_with(lower, "al")) {
      tags.push_back(PosTag::Adj);
    } else {
      tags.push_back(PosTag::Noun);
    }
  }
  return tags;
}

}  // namespace synthrec
