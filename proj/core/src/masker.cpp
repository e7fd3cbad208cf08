#include "synthrec/masker.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "synthrec/errors.hpp"
#include "synthrec/rng.hpp"

namespace synthrec {

using nlohmann::json;

namespace {

void check_spans(const Document& doc, const std::vector<AnnotationSpan>& spans,
                 const char* what) {
  std::set<std::size_t> used;
  for (const auto& s : spans) {
    if (s.token_last >= doc.tokens.size() || s.token_first > s.token_last)
      throw DataError(std::string(what) + " span out of bounds in document " +
                      doc.id);
    for (std::size_t i = s.token_first; i <= s.token_last; ++i)
      if (!used.insert(i).second)
        throw DataError(std::string(what) + " spans overlap at token " +
                        std::to_string(i) + " in document " + doc.id);
  }
}

Rng phase_rng(const MaskPolicy& policy, const std::string& doc_id,
              std::string_view phase, std::string_view label = "") {
  StreamKey key;
  key.mix("mask").mix(policy.seed).mix(doc_id).mix(phase).mix(label);
  return key.rng();
}

}  // namespace

MaskPlan build_mask_plan(const Document& doc,
                         const std::vector<AnnotationSpan>& phi_spans,
                         const std::vector<AnnotationSpan>& med_spans,
                         const std::vector<PosTag>& pos_tags,
                         const MaskPolicy& policy) {
  check_spans(doc, phi_spans, "PHI");
  check_spans(doc, med_spans, "MED");
  if (pos_tags.size() != doc.tokens.size())
    throw DataError("POS tag count does not match token count in document " +
                    doc.id);

  MaskPlan plan;
  plan.doc_id = doc.id;
  plan.policy_used = policy;

  // claimed = owned by some phase; masked spans land in span_groups.
  std::vector<bool> claimed(doc.tokens.size(), false);
  std::vector<bool> masked(doc.tokens.size(), false);

  // Phase 1: PHI. Selected spans are masked whole; unselected PHI spans stay
  // claimed so lower phases never touch them.
  {
    std::size_t want = round_half_up(policy.phi_proportion * phi_spans.size());
    Rng rng = phase_rng(policy, doc.id, "phi");
    auto picks = rng.sample_without_replacement(phi_spans.size(), want);
    std::set<std::size_t> chosen(picks.begin(), picks.end());
    for (std::size_t i = 0; i < phi_spans.size(); ++i) {
      const auto& s = phi_spans[i];
      for (std::size_t t = s.token_first; t <= s.token_last; ++t) claimed[t] = true;
      if (chosen.count(i)) {
        for (std::size_t t = s.token_first; t <= s.token_last; ++t) masked[t] = true;
        plan.span_groups.push_back(
            {MaskReasonKind::Phi, s.category, s.token_first, s.token_last});
      }
    }
  }

  // Phase 2: MED. Only spans untouched by PHI are visible; all of them claim
  // their tokens whether masked or retained.
  {
    std::map<std::string, std::vector<std::size_t>> by_label;
    std::vector<bool> visible(med_spans.size(), false);
    for (std::size_t i = 0; i < med_spans.size(); ++i) {
      const auto& s = med_spans[i];
      bool free = true;
      for (std::size_t t = s.token_first; t <= s.token_last; ++t)
        if (claimed[t]) free = false;
      if (!free) continue;
      visible[i] = true;
      for (std::size_t t = s.token_first; t <= s.token_last; ++t) claimed[t] = true;
      by_label[s.category].push_back(i);
    }
    for (const auto& [label, members] : by_label) {
      double ratio = 0.0;
      if (auto it = policy.med_ratios.find(label); it != policy.med_ratios.end())
        ratio = it->second;
      std::size_t want = round_half_up(ratio * members.size());
      if (want == 0) continue;
      Rng rng = phase_rng(policy, doc.id, "med", label);
      for (std::size_t pick : rng.sample_without_replacement(members.size(), want)) {
        const auto& s = med_spans[members[pick]];
        for (std::size_t t = s.token_first; t <= s.token_last; ++t) masked[t] = true;
        plan.span_groups.push_back(
            {MaskReasonKind::Med, s.category, s.token_first, s.token_last});
      }
    }
  }

  // Phase 3: POS over unclaimed tokens, one group per token. Selection order
  // is recorded so the overall cap can drop the most recent picks first.
  std::vector<std::size_t> pos_selection_order;
  {
    std::map<PosTag, std::vector<std::size_t>> by_tag;
    for (std::size_t t = 0; t < doc.tokens.size(); ++t)
      if (!claimed[t]) by_tag[pos_tags[t]].push_back(t);
    for (const auto& [tag, ratio] : policy.pos_ratios) {
      auto it = by_tag.find(tag);
      if (it == by_tag.end() || ratio <= 0.0) continue;
      const auto& members = it->second;
      std::size_t want = round_half_up(ratio * members.size());
      Rng rng = phase_rng(policy, doc.id, "pos", to_string(tag));
      for (std::size_t pick : rng.sample_without_replacement(members.size(), want)) {
        std::size_t t = members[pick];
        masked[t] = true;
        pos_selection_order.push_back(t);
        plan.span_groups.push_back({MaskReasonKind::Pos, to_string(tag), t, t});
      }
    }
  }

  // Overall cap: shed POS picks newest-first; PHI/MED are never dropped.
  if (policy.overall_cap && !doc.tokens.empty()) {
    auto total_masked = [&] {
      return static_cast<std::size_t>(
          std::count(masked.begin(), masked.end(), true));
    };
    double cap = *policy.overall_cap;
    while (!pos_selection_order.empty() &&
           static_cast<double>(total_masked()) / doc.tokens.size() > cap) {
      std::size_t t = pos_selection_order.back();
      pos_selection_order.pop_back();
      masked[t] = false;
      auto it = std::find_if(plan.span_groups.begin(), plan.span_groups.end(),
                             [&](const MaskGroup& g) {
                               return g.kind == MaskReasonKind::Pos &&
                                      g.token_first == t;
                             });
      if (it != plan.span_groups.end()) plan.span_groups.erase(it);
    }
  }

  for (std::size_t t = 0; t < masked.size(); ++t)
    if (masked[t]) plan.masked_positions.push_back(t);
  return plan;
}

std::string MaskedDocument::masked_text() const {
  std::map<std::size_t, std::string> repl;
  for (std::size_t t : plan.masked_positions) repl[t] = kMaskSentinel;
  return render(doc, repl);
}

MaskedDocument apply_mask(const Document& doc, const MaskPlan& plan) {
  if (plan.doc_id != doc.id)
    throw DataError("mask plan for document " + plan.doc_id +
                    " applied to document " + doc.id);
  for (std::size_t t : plan.masked_positions)
    if (t >= doc.tokens.size())
      throw DataError("mask plan position " + std::to_string(t) +
                      " out of range for document " + doc.id);
  return MaskedDocument{doc, plan};
}

namespace {

const char* kind_name(MaskReasonKind k) {
  switch (k) {
    case MaskReasonKind::Phi: return "PHI";
    case MaskReasonKind::Med: return "MED";
    case MaskReasonKind::Pos: return "POS";
  }
  return "?";
}

MaskReasonKind kind_from_name(const std::string& s) {
  if (s == "PHI") return MaskReasonKind::Phi;
  if (s == "MED") return MaskReasonKind::Med;
  if (s == "POS") return MaskReasonKind::Pos;
  throw DataError("unknown mask reason kind: " + s);
}

}  // namespace

std::string policy_to_json(const MaskPolicy& policy) {
  json med = json::object(), pos = json::object();
  for (const auto& [label, r] : policy.med_ratios) med[label] = r;
  for (const auto& [tag, r] : policy.pos_ratios) pos[to_string(tag)] = r;
  json j{{"phi_proportion", policy.phi_proportion},
         {"med_ratios", med},
         {"pos_ratios", pos},
         {"seed", policy.seed}};
  if (policy.overall_cap) j["overall_cap"] = *policy.overall_cap;
  return j.dump(2);
}

MaskPolicy policy_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("policy JSON parse error: ") + e.what());
  }
  MaskPolicy p;
  p.phi_proportion = j.value("phi_proportion", 1.0);
  const json med = j.value("med_ratios", json::object());
  for (const auto& [label, r] : med.items()) p.med_ratios[label] = r.get<double>();
  const json pos = j.value("pos_ratios", json::object());
  for (const auto& [tag, r] : pos.items())
    p.pos_ratios[pos_tag_from_string(tag)] = r.get<double>();
  if (j.contains("overall_cap")) p.overall_cap = j["overall_cap"].get<double>();
  p.seed = j.value("seed", 0ull);
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(p.phi_proportion))
    throw DataError("phi_proportion outside [0,1]");
  for (const auto& [_, r] : p.med_ratios)
    if (!in_unit(r)) throw DataError("med ratio outside [0,1]");
  for (const auto& [_, r] : p.pos_ratios)
    if (!in_unit(r)) throw DataError("pos ratio outside [0,1]");
  if (p.overall_cap && !in_unit(*p.overall_cap))
    throw DataError("overall_cap outside [0,1]");
  return p;
}

std::string mask_plan_to_json(const MaskPlan& plan) {
  json groups = json::array();
  for (const auto& g : plan.span_groups)
    groups.push_back({{"kind", kind_name(g.kind)},
                      {"label", g.label},
                      {"first", g.token_first},
                      {"last", g.token_last}});
  return json{{"doc_id", plan.doc_id},
              {"masked_positions", plan.masked_positions},
              {"span_groups", groups},
              {"policy", json::parse(policy_to_json(plan.policy_used))}}
      .dump(2);
}

MaskPlan mask_plan_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("mask plan JSON parse error: ") + e.what());
  }
  MaskPlan plan;
  plan.doc_id = j.at("doc_id").get<std::string>();
  plan.masked_positions = j.at("masked_positions").get<std::vector<std::size_t>>();
  for (const auto& gj : j.at("span_groups")) {
    MaskGroup g;
    g.kind = kind_from_name(gj.at("kind").get<std::string>());
    g.label = gj.at("label").get<std::string>();
    g.token_first = gj.at("first").get<std::size_t>();
    g.token_last = gj.at("last").get<std::size_t>();
    plan.span_groups.push_back(std::move(g));
  }
  if (j.contains("policy"))
    plan.policy_used = policy_from_json(j["policy"].dump());
  return plan;
}

}  // namespace synthrec
