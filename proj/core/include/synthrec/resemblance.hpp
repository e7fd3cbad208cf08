#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "synthrec/corpus.hpp"
#include "synthrec/filler.hpp"
#include "synthrec/text.hpp"

namespace synthrec {

struct PrfScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

PrfScore make_prf(double precision, double recall);

struct RougeScores {
  PrfScore r1, r2, rl;
};

// Word-token ROUGE over lowercased streams; punctuation tokens included.
RougeScores rouge(const Document& candidate, const Document& reference);

// Context-free embeddings keep the score pipeline testable without a neural
// model; a remote provider can supply contextual vectors instead.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::vector<double> embed(const std::string& token,
                                    const std::vector<std::string>& context) const = 0;
  virtual std::size_t dimension() const = 0;
};

// Deterministic hashed random projection per token type.
class HashedProjectionProvider : public EmbeddingProvider {
 public:
  explicit HashedProjectionProvider(std::size_t dim = 64) : dim_(dim) {}
  std::vector<double> embed(const std::string& token,
                            const std::vector<std::string>& context) const override;
  std::size_t dimension() const override { return dim_; }

 private:
  std::size_t dim_;
};

// Greedy-matching token similarity: precision is the candidate-side mean of
// best cosine matches, recall the reference-side mean.
PrfScore embed_score(const Document& candidate, const Document& reference,
                     const EmbeddingProvider& provider);

struct ReadabilityScores {
  double fre = 0.0;
  double fkg = 0.0;
  double smog = 0.0;
};

ReadabilityScores readability(const Document& doc);

std::set<std::string> load_stopwords(const std::string& path);

// Mean per-document-pair overlap between top-k frequency-ranked words,
// stopwords and non-alphabetic tokens excluded.
std::map<std::size_t, double> topk_overlap(
    const Corpus& real, const std::vector<SyntheticDocument>& synth,
    const std::vector<std::size_t>& ks, const std::set<std::string>& stopwords);

}  // namespace synthrec
