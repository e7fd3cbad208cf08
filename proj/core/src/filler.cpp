#include "synthrec/filler.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "synthrec/errors.hpp"

namespace synthrec {

using nlohmann::json;

SystemPreset preset_by_name(const std::string& name) {
  SystemPreset p;
  p.name = name;
  p.policy.phi_proportion = 1.0;
  p.fill.selection = FillSelection::Stochastic;
  double ratio;
  if (name == "S_0.5") {
    p.fill.algorithm = FillAlgorithm::Simultaneous;
    ratio = 0.5;
  } else if (name == "S_0.7") {
    p.fill.algorithm = FillAlgorithm::Simultaneous;
    ratio = 0.7;
  } else if (name == "I_0.7") {
    p.fill.algorithm = FillAlgorithm::Iterative;
    ratio = 0.7;
  } else if (name == "I_0.9") {
    p.fill.algorithm = FillAlgorithm::Iterative;
    ratio = 0.9;
  } else {
    throw DataError("unknown preset: " + name +
                    " (known: S_0.5, S_0.7, I_0.7, I_0.9)");
  }
  p.policy.pos_ratios = {{PosTag::Noun, ratio},
                         {PosTag::Verb, ratio},
                         {PosTag::Adj, ratio}};
  return p;
}

std::vector<std::string> preset_names() {
  return {"S_0.5", "S_0.7", "I_0.7", "I_0.9"};
}

std::string select_token(const FillDistribution& dist, const FillConfig& config,
                         Rng& rng) {
  if (dist.empty()) throw DataError("select_token: empty distribution");
  if (config.selection == FillSelection::Deterministic) {
    // Candidates are rank-sorted; scan the leading probability ties.
    const double top = dist[0].probability;
    const std::string* best = &dist[0].token;
    for (const auto& c : dist) {
      if (c.probability < top) break;
      if (c.token < *best) best = &c.token;
    }
    return *best;
  }
  std::size_t n = std::min(config.top_k, dist.size());
  std::vector<double> weights(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    weights[i] = std::pow(dist[i].probability, 1.0 / config.temperature);
    sum += weights[i];
  }
  double u = rng.uniform01() * sum;
  for (std::size_t i = 0; i < n; ++i) {
    u -= weights[i];
    if (u < 0.0) return dist[i].token;
  }
  return dist[n - 1].token;
}

namespace {

Rng position_rng(const FillConfig& config, const std::string& doc_id,
                 std::size_t position) {
  StreamKey key;
  key.mix("fill").mix(config.seed).mix(doc_id).mix(
      static_cast<std::uint64_t>(position));
  return key.rng();
}

struct Chunk {
  std::size_t first, last;  // inclusive token range
};

// Consecutive chunks of <= chunk_len tokens, snapped backward to the nearest
// sentence end inside the chunk.
std::vector<Chunk> make_chunks(const Document& doc, std::size_t chunk_len) {
  std::vector<Chunk> chunks;
  auto sentences = split_sentences(doc);
  std::vector<bool> sentence_end(doc.tokens.size(), false);
  for (const auto& s : sentences) sentence_end[s.last_token] = true;

  std::size_t start = 0;
  while (start < doc.tokens.size()) {
    std::size_t tentative = std::min(start + chunk_len - 1, doc.tokens.size() - 1);
    std::size_t end = tentative;
    if (tentative + 1 < doc.tokens.size()) {
      for (std::size_t i = tentative + 1; i-- > start;) {
        if (sentence_end[i]) {
          end = i;
          break;
        }
      }
    }
    chunks.push_back({start, end});
    start = end + 1;
  }
  return chunks;
}

SyntheticDocument make_result(const MaskedDocument& md, const FillConfig& config,
                              std::map<std::size_t, std::string> filled) {
  SyntheticDocument sd;
  sd.source_id = md.doc.id;
  sd.config_used = config;
  sd.filled = std::move(filled);
  sd.text = render(md.doc, sd.filled);
  return sd;
}

}  // namespace

SyntheticDocument fill_simultaneous(const MaskedDocument& md,
                                    const FillModel& model,
                                    const FillConfig& config) {
  if (config.chunk_len < 3) throw DataError("fill: chunk_len must be >= 3");
  const std::size_t chunk_len = std::min(config.chunk_len, model.window());
  std::vector<bool> masked(md.doc.tokens.size(), false);
  for (std::size_t t : md.plan.masked_positions) masked[t] = true;

  std::map<std::size_t, std::string> filled;
  auto chunks = make_chunks(md.doc, chunk_len);
  for (std::size_t ci = 0; ci < chunks.size(); ++ci) {
    const Chunk& chunk = chunks[ci];
    std::vector<std::size_t> rel_masks;
    std::vector<std::string> ctx;
    for (std::size_t i = chunk.first; i <= chunk.last; ++i) {
      if (masked[i]) {
        rel_masks.push_back(i - chunk.first);
        ctx.push_back(kMaskSentinel);
      } else {
        ctx.push_back(md.doc.tokens[i].text);
      }
    }
    if (rel_masks.empty()) continue;
    std::vector<FillDistribution> dists;
    try {
      dists = model.predict(ctx, rel_masks, config.top_k);
    } catch (const Error& e) {
      throw DataError("fill_simultaneous: model failed on chunk " +
                      std::to_string(ci) + " of " + md.doc.id + ": " + e.what());
    }
    for (std::size_t k = 0; k < rel_masks.size(); ++k) {
      std::size_t pos = chunk.first + rel_masks[k];
      Rng rng = position_rng(config, md.doc.id, pos);
      filled[pos] = select_token(dists[k], config, rng);
    }
  }
  return make_result(md, config, std::move(filled));
}

SyntheticDocument fill_iterative(const MaskedDocument& md, const FillModel& model,
                                 const FillConfig& config) {
  if (config.chunk_len < 3) throw DataError("fill: chunk_len must be >= 3");
  const std::size_t w = model.window();
  std::vector<bool> masked(md.doc.tokens.size(), false);
  for (std::size_t t : md.plan.masked_positions) masked[t] = true;

  std::map<std::size_t, std::string> filled;
  for (std::size_t mi = 0; mi < md.plan.masked_positions.size(); ++mi) {
    std::size_t pos = md.plan.masked_positions[mi];
    std::size_t lo = pos >= w / 2 ? pos - w / 2 : 0;
    std::size_t hi = std::min(md.doc.tokens.size(), lo + w);
    std::vector<std::string> ctx;
    ctx.reserve(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
      if (i == pos) {
        ctx.push_back(kMaskSentinel);
      } else if (masked[i]) {
        auto it = filled.find(i);
        // Already-processed masks show their chosen token, future masks keep
        // the original until their turn.
        ctx.push_back(it != filled.end() ? it->second : md.doc.tokens[i].text);
      } else {
        ctx.push_back(md.doc.tokens[i].text);
      }
    }
    std::vector<FillDistribution> dists;
    try {
      dists = model.predict(ctx, {pos - lo}, config.top_k);
    } catch (const Error& e) {
      throw DataError("fill_iterative: model failed on mask " +
                      std::to_string(mi) + " of " + md.doc.id + ": " + e.what());
    }
    Rng rng = position_rng(config, md.doc.id, pos);
    filled[pos] = select_token(dists[0], config, rng);
  }
  return make_result(md, config, std::move(filled));
}

SyntheticDocument fill(const MaskedDocument& md, const FillModel& model,
                       const FillConfig& config) {
  return config.algorithm == FillAlgorithm::Simultaneous
             ? fill_simultaneous(md, model, config)
             : fill_iterative(md, model, config);
}

std::vector<GeneratedVariant> generate(const GenerationPipeline& pipeline,
                                       const AnnotatedDocument& doc,
                                       const SystemPreset& preset,
                                       std::size_t n_variants,
                                       std::uint64_t seed) {
  if (n_variants < 1) throw DataError("generate: n_variants must be >= 1");
  if (!pipeline.rules || !pipeline.gazetteer || !pipeline.pos_lexicon ||
      !pipeline.model)
    throw DataError("generate: pipeline is missing a component");

  std::vector<AnnotationSpan> phi_spans, med_spans;
  std::vector<PosTag> pos_tags;
  try {
    phi_spans = detect_phi(doc.doc, *pipeline.rules);
  } catch (const Error& e) {
    throw DataError(std::string("generate: PHI detection failed: ") + e.what());
  }
  try {
    med_spans = tag_medical(doc.doc, *pipeline.gazetteer);
    // MED spans that collide with detected PHI lose to the PHI phase inside
    // the masker; no filtering needed here.
  } catch (const Error& e) {
    throw DataError(std::string("generate: medical tagging failed: ") + e.what());
  }
  pos_tags = tag_pos(doc.doc, *pipeline.pos_lexicon);

  std::vector<GeneratedVariant> out;
  for (std::size_t v = 0; v < n_variants; ++v) {
    StreamKey key;
    key.mix("variant").mix(seed).mix(static_cast<std::uint64_t>(v));
    MaskPolicy policy = preset.policy;
    policy.seed = key.value();
    MaskPlan plan;
    try {
      plan = build_mask_plan(doc.doc, phi_spans, med_spans, pos_tags, policy);
    } catch (const Error& e) {
      throw DataError(std::string("generate: masking failed: ") + e.what());
    }
    MaskedDocument md = apply_mask(doc.doc, plan);
    FillConfig config = preset.fill;
    config.seed = key.value();
    SyntheticDocument sd;
    try {
      sd = fill(md, *pipeline.model, config);
    } catch (const Error& e) {
      throw DataError(std::string("generate: filling failed: ") + e.what());
    }
    sd.variant_index = v;
    out.push_back({std::move(plan), std::move(sd)});
  }
  return out;
}

namespace {

const char* algorithm_name(FillAlgorithm a) {
  return a == FillAlgorithm::Simultaneous ? "simultaneous" : "iterative";
}

const char* selection_name(FillSelection s) {
  return s == FillSelection::Deterministic ? "deterministic" : "stochastic";
}

}  // namespace

std::string fill_config_to_json(const FillConfig& config) {
  return json{{"algorithm", algorithm_name(config.algorithm)},
              {"selection", selection_name(config.selection)},
              {"temperature", config.temperature},
              {"top_k", config.top_k},
              {"chunk_len", config.chunk_len},
              {"seed", config.seed}}
      .dump(2);
}

FillConfig fill_config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("fill config JSON parse error: ") + e.what());
  }
  FillConfig c;
  std::string alg = j.value("algorithm", "simultaneous");
  if (alg == "simultaneous")
    c.algorithm = FillAlgorithm::Simultaneous;
  else if (alg == "iterative")
    c.algorithm = FillAlgorithm::Iterative;
  else
    throw DataError("unknown fill algorithm: " + alg);
  std::string sel = j.value("selection", "stochastic");
  if (sel == "deterministic")
    c.selection = FillSelection::Deterministic;
  else if (sel == "stochastic")
    c.selection = FillSelection::Stochastic;
  else
    throw DataError("unknown fill selection: " + sel);
  c.temperature = j.value("temperature", 1.0);
  if (c.temperature <= 0.0) throw DataError("temperature must be > 0");
  c.top_k = j.value("top_k", std::size_t{50});
  c.chunk_len = j.value("chunk_len", std::size_t{21});
  if (c.chunk_len < 3) throw DataError("chunk_len must be >= 3");
  c.seed = j.value("seed", 0ull);
  return c;
}

std::string synthetic_to_json(const SyntheticDocument& sd) {
  json filled = json::object();
  for (const auto& [pos, tok] : sd.filled) filled[std::to_string(pos)] = tok;
  return json{{"source_id", sd.source_id},
              {"variant_index", sd.variant_index},
              {"text", sd.text},
              {"filled", filled},
              {"config", json::parse(fill_config_to_json(sd.config_used))}}
      .dump(2);
}

SyntheticDocument synthetic_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("synthetic document JSON parse error: ") +
                    e.what());
  }
  SyntheticDocument sd;
  sd.source_id = j.at("source_id").get<std::string>();
  sd.variant_index = j.at("variant_index").get<std::size_t>();
  sd.text = j.at("text").get<std::string>();
  for (auto& [pos, tok] : j.at("filled").items())
    sd.filled[std::stoul(pos)] = tok.get<std::string>();
  if (j.contains("config"))
    sd.config_used = fill_config_from_json(j["config"].dump());
  return sd;
}

}  // namespace synthrec
