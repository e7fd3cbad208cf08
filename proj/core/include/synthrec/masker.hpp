#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synthrec/annotation.hpp"
#include "synthrec/pos.hpp"
#include "synthrec/text.hpp"

namespace synthrec {

inline constexpr const char* kMaskSentinel = "[MASK]";

struct MaskPolicy {
  double phi_proportion = 1.0;                 // fraction of detected PHI spans
  std::map<std::string, double> med_ratios;    // MED label -> fraction, default 0
  std::map<PosTag, double> pos_ratios;         // POS tag -> fraction, default 0
  std::optional<double> overall_cap;           // limit on total masked fraction
  std::uint64_t seed = 0;
};

enum class MaskReasonKind { Phi, Med, Pos };

struct MaskGroup {
  MaskReasonKind kind = MaskReasonKind::Pos;
  std::string label;        // PHI category, MED label, or POS tag name
  std::size_t token_first = 0;
  std::size_t token_last = 0;  // inclusive
};

struct MaskPlan {
  std::string doc_id;
  std::vector<std::size_t> masked_positions;  // sorted
  std::vector<MaskGroup> span_groups;
  MaskPolicy policy_used;
};

struct MaskedDocument {
  Document doc;
  MaskPlan plan;

  // The masked letter: sentinel at every masked position.
  std::string masked_text() const;
};

// Combines the three phases under PHI > MED > POS precedence with exact-count
// (round-half-up) sampling per category. Deterministic in (inputs, seed).
MaskPlan build_mask_plan(const Document& doc,
                         const std::vector<AnnotationSpan>& phi_spans,
                         const std::vector<AnnotationSpan>& med_spans,
                         const std::vector<PosTag>& pos_tags,
                         const MaskPolicy& policy);

MaskedDocument apply_mask(const Document& doc, const MaskPlan& plan);

std::string mask_plan_to_json(const MaskPlan& plan);
MaskPlan mask_plan_from_json(const std::string& json_text);

std::string policy_to_json(const MaskPolicy& policy);
MaskPolicy policy_from_json(const std::string& json_text);

}  // namespace synthrec
