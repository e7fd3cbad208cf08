#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "synthrec/corpus.hpp"
#include "synthrec/filler.hpp"
#include "synthrec/masker.hpp"

namespace synthrec {

struct RecallResult {
  double recall = 1.0;
  std::size_t masked_gold_tokens = 0;
  std::size_t gold_tokens = 0;
  bool vacuous = false;  // zero gold tokens in the denominator
};

// Token-level micro-averaged recall of the mask plans against gold PHI.
RecallResult phi_recall(const std::vector<AnnotatedDocument>& gold,
                        const std::vector<MaskPlan>& plans, bool hipaa_only);

// An original document paired with its mask plan and one synthetic output.
struct PrivacyPair {
  const AnnotatedDocument* original = nullptr;
  const MaskPlan* plan = nullptr;
  const SyntheticDocument* synth = nullptr;
};

struct RateResult {
  double rate = 0.0;
  std::size_t hits = 0;
  std::size_t eligible = 0;
};

// Fraction of masked PHI span groups of >= min_tokens whose exact original
// token sequence (case-insensitive) reappears anywhere in the synthetic text.
RateResult reidentification_rate(const std::vector<PrivacyPair>& pairs,
                                 std::size_t min_tokens = 3);

// Per gold PHI span: longest contiguous token run shared with the synthetic
// stream. rate(t) = spans with run >= t / spans of length >= t.
std::map<std::size_t, RateResult> lcs_rates(
    const std::vector<PrivacyPair>& pairs,
    const std::vector<std::size_t>& thresholds = {3, 5, 7});

// Same rates restricted to spans eligible at every threshold, where the
// monotonicity property holds exactly.
std::map<std::size_t, RateResult> lcs_rates_common(
    const std::vector<PrivacyPair>& pairs,
    const std::vector<std::size_t>& thresholds = {3, 5, 7});

struct PrivacyReport {
  RecallResult recall_all;
  RecallResult recall_hipaa;
  RateResult reid;
  std::map<std::size_t, RateResult> lcs;
  std::map<std::size_t, RateResult> lcs_common;
};

PrivacyReport privacy_report(const std::vector<AnnotatedDocument>& gold,
                             const std::vector<MaskPlan>& plans,
                             const std::vector<PrivacyPair>& pairs);

std::string privacy_report_to_json(const PrivacyReport& report);

}  // namespace synthrec
