#include "synthrec/medner.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "synthrec/errors.hpp"

namespace synthrec {
namespace {

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Tokenizer-normalized key: lowercase tokens joined with single spaces.
std::string normalize_phrase(const std::string& phrase, std::size_t* n_tokens) {
  Document d = tokenize(phrase);
  std::string key;
  for (std::size_t i = 0; i < d.tokens.size(); ++i) {
    if (i) key += ' ';
    key += lowercase(d.tokens[i].text);
  }
  if (n_tokens) *n_tokens = d.tokens.size();
  return key;
}

}  // namespace

Gazetteer parse_gazetteer(const std::string& text,
                          const std::vector<std::string>& allowed_labels) {
  Gazetteer gaz;
  gaz.allowed_labels = allowed_labels;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw DataError("gazetteer line " + std::to_string(lineno) +
                      ": expected LABEL<TAB>phrase");
    std::string label = line.substr(0, tab);
    std::string phrase = line.substr(tab + 1);
    if (std::find(allowed_labels.begin(), allowed_labels.end(), label) ==
        allowed_labels.end())
      throw DataError("gazetteer line " + std::to_string(lineno) +
                      ": unknown label " + label);
    std::size_t n_tokens = 0;
    std::string key = normalize_phrase(phrase, &n_tokens);
    if (key.empty())
      throw DataError("gazetteer line " + std::to_string(lineno) + ": empty phrase");
    auto [it, inserted] = gaz.entries.emplace(key, label);
    if (!inserted) {
      if (it->second != label)
        std::cerr << "warning: gazetteer phrase \"" << key
                  << "\" already mapped to " << it->second << "; keeping first\n";
      continue;
    }
    gaz.max_phrase_len = std::max(gaz.max_phrase_len, n_tokens);
  }
  return gaz;
}

Gazetteer load_gazetteer(const std::string& path,
                         const std::vector<std::string>& allowed_labels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open gazetteer file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_gazetteer(ss.str(), allowed_labels);
}

std::vector<AnnotationSpan> tag_medical(const Document& doc, const Gazetteer& gaz) {
  std::vector<AnnotationSpan> out;
  std::vector<std::string> lowered(doc.tokens.size());
  for (std::size_t i = 0; i < doc.tokens.size(); ++i)
    lowered[i] = lowercase(doc.tokens[i].text);

  std::size_t i = 0;
  while (i < doc.tokens.size()) {
    std::size_t best_len = 0;
    const std::string* best_label = nullptr;
    std::string key;
    std::size_t max_len = std::min(gaz.max_phrase_len, doc.tokens.size() - i);
    for (std::size_t len = 1; len <= max_len; ++len) {
      if (len > 1) key += ' ';
      key += lowered[i + len - 1];
      auto it = gaz.entries.find(key);
      if (it != gaz.entries.end()) {
        best_len = len;
        best_label = &it->second;
      }
    }
    if (best_label) {
      AnnotationSpan s;
      s.ns = SpanNamespace::Med;
      s.category = *best_label;
      s.token_first = i;
      s.token_last = i + best_len - 1;
      s.start = doc.tokens[s.token_first].start;
      s.end = doc.tokens[s.token_last].end;
      s.source = SpanSource::Tagger;
      out.push_back(std::move(s));
      i += best_len;
    } else {
      ++i;
    }
  }
  return out;
}

}  // namespace synthrec
