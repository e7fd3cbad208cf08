#include "synthrec/privacy.hpp"

#include <algorithm>

#include <json.hpp>

#include "synthrec/errors.hpp"
#include "synthrec/phi.hpp"

namespace synthrec {

using nlohmann::json;

namespace {

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> lowered_tokens(const Document& doc) {
  std::vector<std::string> out;
  out.reserve(doc.tokens.size());
  for (const auto& t : doc.tokens) out.push_back(lowercase(t.text));
  return out;
}

// Longest contiguous run of `needle` tokens appearing in `haystack`.
std::size_t longest_common_run(const std::vector<std::string>& needle,
                               const std::vector<std::string>& haystack) {
  std::size_t best = 0;
  std::vector<std::size_t> prev(haystack.size() + 1, 0), cur(haystack.size() + 1, 0);
  for (std::size_t i = 1; i <= needle.size(); ++i) {
    for (std::size_t j = 1; j <= haystack.size(); ++j) {
      cur[j] = needle[i - 1] == haystack[j - 1] ? prev[j - 1] + 1 : 0;
      best = std::max(best, cur[j]);
    }
    std::swap(prev, cur);
  }
  return best;
}

bool sequence_occurs(const std::vector<std::string>& needle,
                     const std::vector<std::string>& haystack) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  for (std::size_t j = 0; j + needle.size() <= haystack.size(); ++j) {
    if (std::equal(needle.begin(), needle.end(), haystack.begin() + j)) return true;
  }
  return false;
}

void check_pair(const PrivacyPair& p) {
  if (!p.original || !p.plan || !p.synth)
    throw DataError("privacy pair is incomplete");
  if (p.plan->doc_id != p.original->doc.id ||
      p.synth->source_id != p.original->doc.id)
    throw DataError("privacy pair mismatch: plan " + p.plan->doc_id +
                    ", synth source " + p.synth->source_id + ", original " +
                    p.original->doc.id);
}

}  // namespace

RecallResult phi_recall(const std::vector<AnnotatedDocument>& gold,
                        const std::vector<MaskPlan>& plans, bool hipaa_only) {
  if (gold.size() != plans.size())
    throw DataError("phi_recall: " + std::to_string(gold.size()) +
                    " documents vs " + std::to_string(plans.size()) + " plans");
  RecallResult r;
  for (std::size_t d = 0; d < gold.size(); ++d) {
    if (plans[d].doc_id != gold[d].doc.id)
      throw DataError("phi_recall: plan " + plans[d].doc_id +
                      " does not match document " + gold[d].doc.id);
    std::vector<bool> masked(gold[d].doc.tokens.size(), false);
    for (std::size_t t : plans[d].masked_positions) masked[t] = true;
    for (const auto& s : gold[d].gold_phi) {
      if (hipaa_only && !map_to_hipaa(s.category, s.subtype)) continue;
      for (std::size_t t = s.token_first; t <= s.token_last; ++t) {
        ++r.gold_tokens;
        if (masked[t]) ++r.masked_gold_tokens;
      }
    }
  }
  if (r.gold_tokens == 0) {
    r.recall = 1.0;
    r.vacuous = true;
  } else {
    r.recall = static_cast<double>(r.masked_gold_tokens) / r.gold_tokens;
  }
  return r;
}

RateResult reidentification_rate(const std::vector<PrivacyPair>& pairs,
                                 std::size_t min_tokens) {
  if (min_tokens < 1) throw DataError("reidentification_rate: min_tokens >= 1");
  RateResult r;
  for (const auto& p : pairs) {
    check_pair(p);
    auto synth_tokens = lowered_tokens(tokenize(p.synth->text));
    for (const auto& g : p.plan->span_groups) {
      if (g.kind != MaskReasonKind::Phi) continue;
      std::size_t len = g.token_last - g.token_first + 1;
      if (len < min_tokens) continue;
      ++r.eligible;
      std::vector<std::string> original;
      for (std::size_t t = g.token_first; t <= g.token_last; ++t)
        original.push_back(lowercase(p.original->doc.tokens[t].text));
      if (sequence_occurs(original, synth_tokens)) ++r.hits;
    }
  }
  if (r.eligible == 0)
    throw DataError(
        "reidentification_rate: no masked PHI spans of the required length; "
        "use a larger corpus");
  r.rate = static_cast<double>(r.hits) / r.eligible;
  return r;
}

namespace {

std::map<std::size_t, RateResult> lcs_rates_impl(
    const std::vector<PrivacyPair>& pairs,
    const std::vector<std::size_t>& thresholds, bool common_eligible_set) {
  std::size_t max_t = 0;
  for (std::size_t t : thresholds) max_t = std::max(max_t, t);

  std::map<std::size_t, RateResult> out;
  for (std::size_t t : thresholds) out[t] = RateResult{};

  for (const auto& p : pairs) {
    check_pair(p);
    auto synth_tokens = lowered_tokens(tokenize(p.synth->text));
    for (const auto& s : p.original->gold_phi) {
      std::size_t len = s.token_last - s.token_first + 1;
      std::vector<std::string> original;
      for (std::size_t t = s.token_first; t <= s.token_last; ++t)
        original.push_back(lowercase(p.original->doc.tokens[t].text));
      std::size_t run = longest_common_run(original, synth_tokens);
      for (std::size_t t : thresholds) {
        std::size_t required_len = common_eligible_set ? max_t : t;
        if (len < required_len) continue;
        ++out[t].eligible;
        if (run >= t) ++out[t].hits;
      }
    }
  }
  for (auto& [t, r] : out)
    r.rate = r.eligible ? static_cast<double>(r.hits) / r.eligible : 0.0;
  return out;
}

}  // namespace

std::map<std::size_t, RateResult> lcs_rates(
    const std::vector<PrivacyPair>& pairs,
    const std::vector<std::size_t>& thresholds) {
  return lcs_rates_impl(pairs, thresholds, false);
}

std::map<std::size_t, RateResult> lcs_rates_common(
    const std::vector<PrivacyPair>& pairs,
    const std::vector<std::size_t>& thresholds) {
  return lcs_rates_impl(pairs, thresholds, true);
}

PrivacyReport privacy_report(const std::vector<AnnotatedDocument>& gold,
                             const std::vector<MaskPlan>& plans,
                             const std::vector<PrivacyPair>& pairs) {
  PrivacyReport rep;
  rep.recall_all = phi_recall(gold, plans, false);
  rep.recall_hipaa = phi_recall(gold, plans, true);
  rep.reid = reidentification_rate(pairs);
  rep.lcs = lcs_rates(pairs);
  rep.lcs_common = lcs_rates_common(pairs);
  return rep;
}

std::string privacy_report_to_json(const PrivacyReport& report) {
  auto recall_json = [](const RecallResult& r) {
    return json{{"recall", r.recall},
                {"masked_gold_tokens", r.masked_gold_tokens},
                {"gold_tokens", r.gold_tokens},
                {"vacuous", r.vacuous}};
  };
  auto rate_json = [](const RateResult& r) {
    return json{{"rate", r.rate}, {"hits", r.hits}, {"eligible", r.eligible}};
  };
  json lcs = json::object(), lcs_common = json::object();
  for (const auto& [t, r] : report.lcs) {
    if (r.eligible == 0) {
      lcs[std::to_string(t)] = {{"note", "no spans of required length"}};
      continue;
    }
    lcs[std::to_string(t)] = rate_json(r);
  }
  for (const auto& [t, r] : report.lcs_common)
    lcs_common[std::to_string(t)] = rate_json(r);
  return json{{"metric", "privacy"},
              {"recall_all", recall_json(report.recall_all)},
              {"recall_hipaa", recall_json(report.recall_hipaa)},
              {"reidentification", rate_json(report.reid)},
              {"lcs_rates", lcs},
              {"lcs_rates_common_eligible", lcs_common}}
      .dump(2);
}

}  // namespace synthrec
