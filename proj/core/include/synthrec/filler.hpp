#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "synthrec/corpus.hpp"
#include "synthrec/masker.hpp"
#include "synthrec/medner.hpp"
#include "synthrec/mlm.hpp"
#include "synthrec/phi.hpp"
#include "synthrec/pos.hpp"
#include "synthrec/rng.hpp"

namespace synthrec {

enum class FillAlgorithm { Simultaneous, Iterative };
enum class FillSelection { Deterministic, Stochastic };

struct FillConfig {
  FillAlgorithm algorithm = FillAlgorithm::Simultaneous;
  FillSelection selection = FillSelection::Stochastic;
  double temperature = 1.0;   // stochastic only
  std::size_t top_k = 50;
  std::size_t chunk_len = 21; // clamped to the model window at fill time
  std::uint64_t seed = 0;
};

struct SystemPreset {
  std::string name;
  MaskPolicy policy;
  FillConfig fill;
};

// The four shipped presets: S_0.5, S_0.7, I_0.7, I_0.9. All mask every PHI
// span, retain medical entities, and sample stochastically.
SystemPreset preset_by_name(const std::string& name);
std::vector<std::string> preset_names();

struct SyntheticDocument {
  std::string source_id;
  std::size_t variant_index = 0;
  std::string text;
  std::map<std::size_t, std::string> filled;  // token index -> chosen token
  FillConfig config_used;
};

// Deterministic: argmax with lexicographic tie-break. Stochastic: sample the
// top-k candidates with weights p^(1/tau).
std::string select_token(const FillDistribution& dist, const FillConfig& config,
                         Rng& rng);

// One model call per chunk holding at least one mask; chunk boundaries snap
// back to sentence ends.
SyntheticDocument fill_simultaneous(const MaskedDocument& md,
                                    const FillModel& model,
                                    const FillConfig& config);

// One model call per mask, left to right; earlier masks contribute their
// chosen tokens to later contexts, future masks keep their original tokens.
SyntheticDocument fill_iterative(const MaskedDocument& md, const FillModel& model,
                                 const FillConfig& config);

SyntheticDocument fill(const MaskedDocument& md, const FillModel& model,
                       const FillConfig& config);

struct GenerationPipeline {
  const RuleSet* rules = nullptr;
  const Gazetteer* gazetteer = nullptr;
  const PosLexicon* pos_lexicon = nullptr;
  const FillModel* model = nullptr;
};

struct GeneratedVariant {
  MaskPlan plan;
  SyntheticDocument synth;
};

// detect -> tag -> plan -> fill, once per variant with variant-derived seeds.
std::vector<GeneratedVariant> generate(const GenerationPipeline& pipeline,
                                       const AnnotatedDocument& doc,
                                       const SystemPreset& preset,
                                       std::size_t n_variants,
                                       std::uint64_t seed);

std::string fill_config_to_json(const FillConfig& config);
FillConfig fill_config_from_json(const std::string& json_text);

std::string synthetic_to_json(const SyntheticDocument& sd);
SyntheticDocument synthetic_from_json(const std::string& json_text);

}  // namespace synthrec
