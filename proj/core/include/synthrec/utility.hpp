#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "synthrec/corpus.hpp"
#include "synthrec/filler.hpp"
#include "synthrec/medner.hpp"
#include "synthrec/resemblance.hpp"

namespace synthrec {

struct LabeledSentence {
  std::vector<std::string> tokens;
  std::vector<std::string> tags;  // BIO over DISEASE/CHEMICAL
};

struct LabeledDataset {
  std::vector<LabeledSentence> sentences;
  std::size_t skipped_docs = 0;
};

// Sentence-segmented BIO dataset from a pluggable entity extractor
// (native default: the shipped DISEASE/CHEMICAL gazetteer).
LabeledDataset extract_entities(const std::vector<Document>& docs,
                                const MedTagger& extractor,
                                bool keep_all_o_sentences = true);

// Greedy averaged perceptron over word/affix/neighbor/previous-tag features.
class PerceptronTagger {
 public:
  void train(const LabeledDataset& ds, std::size_t epochs, std::uint64_t seed);
  std::vector<std::string> predict(const std::vector<std::string>& tokens) const;

 private:
  std::vector<std::string> features(const std::vector<std::string>& tokens,
                                    std::size_t i,
                                    const std::string& prev_tag) const;
  std::string best_tag(const std::vector<std::string>& feats) const;

  std::map<std::string, std::map<std::string, double>> weights_;
  std::vector<std::string> labels_;
};

struct EntityScore {
  std::map<std::string, PrfScore> per_label;
  PrfScore macro;
};

// Entity-level exact (boundary + label) match scoring.
EntityScore evaluate_tagger(const PerceptronTagger& tagger,
                            const LabeledDataset& test);

struct UtilityArm {
  std::string name;
  EntityScore score;
  std::size_t train_sentences = 0;
  std::size_t train_letters = 0;
};

struct UtilityReport {
  std::vector<UtilityArm> arms;  // real, synth_x1[, synth_x2]
  std::size_t test_docs = 0;
};

struct UtilityConfig {
  std::size_t epochs = 5;
  std::size_t multiplier = 1;  // synthetic letters per original letter
  std::uint64_t seed = 0;
  bool keep_all_o_sentences = true;
};

// Split real corpus 0.8/0.2, generate synthetic counterparts of the training
// docs, train one tagger per arm, evaluate all on the real test extraction.
UtilityReport run_utility_experiment(const Corpus& real,
                                     const GenerationPipeline& pipeline,
                                     const SystemPreset& preset,
                                     const MedTagger& extractor,
                                     const UtilityConfig& config);

std::string utility_report_to_json(const UtilityReport& report);

}  // namespace synthrec
