#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "synthrec/corpus.hpp"
#include "synthrec/masker.hpp"

namespace synthrec {

struct FillCandidate {
  std::string token;
  double probability = 0.0;
};

// Ranked candidates for one masked position; probabilities positive and
// non-increasing, tokens unique, sum <= 1 after top-k truncation.
using FillDistribution = std::vector<FillCandidate>;

void validate_distribution(const FillDistribution& dist);

// Behavioral seam shared by the native count model and remote backends.
class FillModel {
 public:
  virtual ~FillModel() = default;

  // One distribution per requested position. `context` carries the sentinel
  // at masked positions; `mask_positions` are context-relative indices.
  virtual std::vector<FillDistribution> predict(
      const std::vector<std::string>& context,
      const std::vector<std::size_t>& mask_positions, std::size_t top_k) const = 0;

  // Maximum context length in tokens.
  virtual std::size_t window() const = 0;
};

struct TrainingConfig {
  double alpha = 5e-5;     // learning rate; forwarded to remote backends only
  std::size_t beta = 16;   // batch size; idem
  double phi = 1.0;        // PHI masking proportion during training
  double psi = 0.3;        // overall masking probability during training
  std::size_t patience = 2;
  double smoothing_k = 0.1;
  std::array<double, 4> lambda{0.3, 0.3, 0.3, 0.1};  // left, right, skip, unigram
  std::uint64_t seed = 0;
};

// Interpolated count model over (left-bigram, right-bigram, skip, unigram)
// statistics with add-k smoothing.
class NativeCountModel : public FillModel {
 public:
  static constexpr std::size_t kWindow = 21;  // 10 left + mask + 10 right

  std::vector<FillDistribution> predict(
      const std::vector<std::string>& context,
      const std::vector<std::size_t>& mask_positions,
      std::size_t top_k) const override;
  std::size_t window() const override { return kWindow; }

  std::size_t vocab_size() const { return vocab_.size(); }
  bool in_vocab(const std::string& token) const { return vocab_.count(token) > 0; }

  std::string to_json() const;
  static NativeCountModel from_json(const std::string& json_text);
  void save(const std::string& path) const;
  static NativeCountModel load(const std::string& path);

  friend NativeCountModel train_native(const Corpus& corpus,
                                       const TrainingConfig& config);

 private:
  std::map<std::string, std::size_t> vocab_;  // token -> unigram count
  std::unordered_map<std::string, std::map<std::string, std::size_t>> left_;
  std::unordered_map<std::string, std::map<std::string, std::size_t>> right_;
  std::unordered_map<std::string, std::map<std::string, std::size_t>> skip_;
  std::unordered_map<std::string, std::size_t> left_total_;
  std::unordered_map<std::string, std::size_t> right_total_;
  std::unordered_map<std::string, std::size_t> skip_total_;
  std::size_t unigram_total_ = 0;
  double smoothing_k_ = 0.1;
  std::array<double, 4> lambda_{0.3, 0.3, 0.3, 0.1};
};

// One deterministic counting pass per document under a (seed, doc_id)-derived
// training mask: masked tokens never serve as context but still count as
// prediction targets; the vocabulary holds only tokens seen unmasked.
NativeCountModel train_native(const Corpus& corpus, const TrainingConfig& config);

// The training mask used by train_native, exposed for perplexity evaluation
// of a consistently masked validation set.
std::vector<std::size_t> training_mask_positions(const AnnotatedDocument& ad,
                                                 double phi, double psi,
                                                 std::uint64_t seed);

// exp(mean -ln P(original)) over all masked positions, querying the full
// vocabulary; missing tokens are floored at 1e-12.
double perplexity(
    const FillModel& model,
    const std::vector<std::pair<MaskedDocument, std::vector<std::string>>>&
        masked_set);

struct GridSearchEntry {
  TrainingConfig config;
  double perplexity = 0.0;
};

struct GridSearchResult {
  TrainingConfig best_config;
  NativeCountModel model;  // winner retrained on train+validation
  std::vector<GridSearchEntry> report;
  std::size_t best_index = 0;
};

GridSearchResult grid_search(const Corpus& corpus,
                             const std::vector<TrainingConfig>& grid,
                             const SplitSpec& split);

}  // namespace synthrec
