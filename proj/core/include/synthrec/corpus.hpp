#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "synthrec/annotation.hpp"
#include "synthrec/text.hpp"

namespace synthrec {

struct AnnotatedDocument {
  Document doc;
  std::vector<AnnotationSpan> gold_phi;
  std::vector<AnnotationSpan> gold_med;
};

struct Corpus {
  std::string name;
  std::vector<AnnotatedDocument> docs;
};

struct SplitSpec {
  std::vector<std::pair<std::string, double>> fractions;  // sum to 1
  std::uint64_t seed = 0;
};

// i2b2-style XML: a root element holding a TEXT block and a TAGS block whose
// elements carry start/end/TYPE attributes.
AnnotatedDocument parse_annotated_xml(const std::string& xml,
                                      const std::string& doc_id = "");

// Native JSON interchange format.
std::string corpus_to_json(const Corpus& corpus);
Corpus corpus_from_json(const std::string& json_text);
Corpus load_corpus_file(const std::string& path);
void save_corpus_file(const Corpus& corpus, const std::string& path);

// Deterministic gold-annotated letter corpus standing in for licensed data.
Corpus generate_fixture_corpus(std::uint64_t seed, std::size_t n_docs);

// Seeded shuffle + rounded-fraction partition; the last label absorbs the
// remainder.
std::map<std::string, Corpus> split_corpus(const Corpus& corpus,
                                           const SplitSpec& spec);

// Smallest covering token range for a character span; expands to whole
// tokens, warning when the span was not token-aligned.
void align_span_to_tokens(const Document& doc, AnnotationSpan& span);

}  // namespace synthrec
