#pragma once

#include <map>
#include <string>
#include <vector>

#include "synthrec/annotation.hpp"
#include "synthrec/text.hpp"

namespace synthrec {

// Pluggable medical tagger seam; the native implementation is a gazetteer.
class MedTagger {
 public:
  virtual ~MedTagger() = default;
  virtual std::vector<AnnotationSpan> tag(const Document& doc) const = 0;
};

struct Gazetteer {
  // key: tokenizer-normalized lowercase phrase (tokens joined by single space)
  std::map<std::string, std::string> entries;
  std::size_t max_phrase_len = 1;  // in tokens
  std::vector<std::string> allowed_labels;
};

// File format: "LABEL<TAB>phrase" lines, '#' comments. Phrases are
// re-tokenized so lookups match tokenizer output; duplicate phrases keep the
// first label with a warning.
Gazetteer load_gazetteer(const std::string& path,
                         const std::vector<std::string>& allowed_labels);
Gazetteer parse_gazetteer(const std::string& text,
                          const std::vector<std::string>& allowed_labels);

// Greedy longest-match left-to-right over lowercased token n-grams.
std::vector<AnnotationSpan> tag_medical(const Document& doc, const Gazetteer& gaz);

class GazetteerTagger : public MedTagger {
 public:
  explicit GazetteerTagger(Gazetteer gaz) : gaz_(std::move(gaz)) {}
  std::vector<AnnotationSpan> tag(const Document& doc) const override {
    return tag_medical(doc, gaz_);
  }
  const Gazetteer& gazetteer() const { return gaz_; }

 private:
  Gazetteer gaz_;
};

}  // namespace synthrec
