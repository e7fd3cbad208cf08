#include "synthrec/mlm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "synthrec/errors.hpp"
#include "synthrec/rng.hpp"

namespace synthrec {

using nlohmann::json;

void validate_distribution(const FillDistribution& dist) {
  if (dist.empty()) throw ProtocolError("fill distribution is empty");
  double sum = 0.0, prev = std::numeric_limits<double>::infinity();
  std::set<std::string> seen;
  for (const auto& c : dist) {
    if (c.probability <= 0.0)
      throw ProtocolError("fill distribution has non-positive probability for \"" +
                          c.token + "\"");
    if (c.probability > prev + 1e-12)
      throw ProtocolError("fill distribution probabilities not non-increasing");
    if (!seen.insert(c.token).second)
      throw ProtocolError("fill distribution repeats token \"" + c.token + "\"");
    prev = c.probability;
    sum += c.probability;
  }
  if (sum > 1.0 + 1e-9)
    throw ProtocolError("fill distribution probabilities sum above 1");
}

std::vector<std::size_t> training_mask_positions(const AnnotatedDocument& ad,
                                                 double phi, double psi,
                                                 std::uint64_t seed) {
  const std::size_t n = ad.doc.tokens.size();
  std::vector<bool> masked(n, false), is_phi(n, false);

  StreamKey key;
  key.mix("train-mask").mix(seed).mix(ad.doc.id);
  Rng rng = key.rng();

  for (const auto& s : ad.gold_phi)
    for (std::size_t t = s.token_first; t <= s.token_last; ++t) is_phi[t] = true;

  std::size_t phi_want = round_half_up(phi * ad.gold_phi.size());
  for (std::size_t pick :
       rng.sample_without_replacement(ad.gold_phi.size(), phi_want)) {
    const auto& s = ad.gold_phi[pick];
    for (std::size_t t = s.token_first; t <= s.token_last; ++t) masked[t] = true;
  }

  // Fill with non-PHI tokens up to the overall probability psi.
  std::size_t target = round_half_up(psi * n);
  std::size_t have = std::count(masked.begin(), masked.end(), true);
  if (have < target) {
    std::vector<std::size_t> pool;
    for (std::size_t t = 0; t < n; ++t)
      if (!masked[t] && !is_phi[t]) pool.push_back(t);
    for (std::size_t pick : rng.sample_without_replacement(
             pool.size(), std::min(pool.size(), target - have)))
      masked[pool[pick]] = true;
  }

  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < n; ++t)
    if (masked[t]) out.push_back(t);
  return out;
}

NativeCountModel train_native(const Corpus& corpus, const TrainingConfig& config) {
  if (corpus.docs.empty()) throw DataError("train_native: empty corpus");
  NativeCountModel m;
  m.smoothing_k_ = config.smoothing_k;
  m.lambda_ = config.lambda;
  double lsum = config.lambda[0] + config.lambda[1] + config.lambda[2] +
                config.lambda[3];
  if (std::abs(lsum - 1.0) > 1e-9)
    throw DataError("train_native: lambda weights must sum to 1");

  for (const auto& ad : corpus.docs) {
    const auto& tokens = ad.doc.tokens;
    std::vector<bool> masked(tokens.size(), false);
    for (std::size_t t :
         training_mask_positions(ad, config.phi, config.psi, config.seed))
      masked[t] = true;

    // Nearest unmasked neighbors for every position.
    std::vector<int> left(tokens.size(), -1), right(tokens.size(), -1);
    int last = -1;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      left[i] = last;
      if (!masked[i]) last = static_cast<int>(i);
    }
    last = -1;
    for (std::size_t i = tokens.size(); i-- > 0;) {
      right[i] = last;
      if (!masked[i]) last = static_cast<int>(i);
    }

    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const std::string& w = tokens[i].text;
      if (!masked[i]) {
        ++m.vocab_[w];
        ++m.unigram_total_;
      }
      if (left[i] >= 0) {
        const std::string& l = tokens[left[i]].text;
        ++m.left_[l][w];
        ++m.left_total_[l];
        if (right[i] >= 0) {
          std::string lr = l + '\x1f' + tokens[right[i]].text;
          ++m.skip_[lr][w];
          ++m.skip_total_[lr];
        }
      }
      if (right[i] >= 0) {
        const std::string& r = tokens[right[i]].text;
        ++m.right_[r][w];
        ++m.right_total_[r];
      }
    }
  }
  if (m.vocab_.empty())
    throw DataError("train_native: vocabulary empty after masking");
  return m;
}

std::vector<FillDistribution> NativeCountModel::predict(
    const std::vector<std::string>& context,
    const std::vector<std::size_t>& mask_positions, std::size_t top_k) const {
  if (top_k < 1) throw DataError("predict: top_k must be >= 1");
  for (std::size_t p : mask_positions)
    if (p >= context.size())
      throw DataError("predict: mask position " + std::to_string(p) +
                      " outside context of length " +
                      std::to_string(context.size()));

  const double k = smoothing_k_;
  const double v = static_cast<double>(vocab_.size());

  std::vector<FillDistribution> out;
  out.reserve(mask_positions.size());
  for (std::size_t pos : mask_positions) {
    const std::string* l = nullptr;
    const std::string* r = nullptr;
    for (std::size_t i = pos; i-- > 0;) {
      if (context[i] != kMaskSentinel) {
        l = &context[i];
        break;
      }
    }
    for (std::size_t i = pos + 1; i < context.size(); ++i) {
      if (context[i] != kMaskSentinel) {
        r = &context[i];
        break;
      }
    }

    struct Term {
      const std::map<std::string, std::size_t>* counts;
      double total;
      double weight;
    };
    std::vector<Term> terms;
    auto add_term = [&](const auto& table, const auto& totals,
                        const std::string& key, double weight) {
      if (weight <= 0.0) return;
      auto ct = totals.find(key);
      double total = ct != totals.end() ? static_cast<double>(ct->second) : 0.0;
      if (total == 0.0 && k == 0.0) return;  // no evidence, unsmoothed
      auto it = table.find(key);
      terms.push_back({it != table.end() ? &it->second : nullptr, total, weight});
    };
    if (l) add_term(left_, left_total_, *l, lambda_[0]);
    if (r) add_term(right_, right_total_, *r, lambda_[1]);
    if (l && r) add_term(skip_, skip_total_, *l + '\x1f' + *r, lambda_[2]);

    double unigram_weight = lambda_[3];
    double weight_sum = unigram_weight;
    for (const auto& t : terms) weight_sum += t.weight;
    if (weight_sum <= 0.0) {
      // All context terms dropped and no unigram weight; fall back to unigram.
      unigram_weight = 1.0;
      weight_sum = 1.0;
      terms.clear();
    }

    FillDistribution dist;
    dist.reserve(vocab_.size());
    double total_score = 0.0;
    for (const auto& [w, uc] : vocab_) {
      double score =
          unigram_weight / weight_sum *
          (static_cast<double>(uc) + k) /
          (static_cast<double>(unigram_total_) + k * v);
      for (const auto& t : terms) {
        double c = 0.0;
        if (t.counts) {
          auto it = t.counts->find(w);
          if (it != t.counts->end()) c = static_cast<double>(it->second);
        }
        score += t.weight / weight_sum * (c + k) / (t.total + k * v);
      }
      if (score > 0.0) dist.push_back({w, score});
      total_score += score;
    }
    if (dist.empty())
      throw DataError("predict: model assigns zero probability everywhere");
    for (auto& c : dist) c.probability /= total_score;
    std::sort(dist.begin(), dist.end(), [](const FillCandidate& a,
                                           const FillCandidate& b) {
      if (a.probability != b.probability) return a.probability > b.probability;
      return a.token < b.token;
    });
    if (dist.size() > top_k) dist.resize(top_k);
    out.push_back(std::move(dist));
  }
  return out;
}

double perplexity(
    const FillModel& model,
    const std::vector<std::pair<MaskedDocument, std::vector<std::string>>>&
        masked_set) {
  const std::size_t w = model.window();
  double nll_sum = 0.0;
  std::size_t n = 0;
  for (const auto& [md, originals] : masked_set) {
    const auto& positions = md.plan.masked_positions;
    if (originals.size() != positions.size())
      throw DataError("perplexity: original-token list does not match plan for " +
                      md.doc.id);
    std::vector<bool> masked(md.doc.tokens.size(), false);
    for (std::size_t t : positions) masked[t] = true;

    for (std::size_t mi = 0; mi < positions.size(); ++mi) {
      std::size_t pos = positions[mi];
      std::size_t lo = pos >= w / 2 ? pos - w / 2 : 0;
      std::size_t hi = std::min(md.doc.tokens.size(), lo + w);
      std::vector<std::string> ctx;
      ctx.reserve(hi - lo);
      for (std::size_t i = lo; i < hi; ++i)
        ctx.push_back(masked[i] ? std::string(kMaskSentinel)
                                : md.doc.tokens[i].text);
      auto dists = model.predict(
          ctx, {pos - lo}, std::numeric_limits<std::size_t>::max());
      double p = 1e-12;
      for (const auto& c : dists[0]) {
        if (c.token == originals[mi]) {
          p = std::max(c.probability, 1e-12);
          break;
        }
      }
      nll_sum += -std::log(p);
      ++n;
    }
  }
  if (n == 0) throw DataError("perplexity: no masked positions");
  return std::exp(nll_sum / static_cast<double>(n));
}

GridSearchResult grid_search(const Corpus& corpus,
                             const std::vector<TrainingConfig>& grid,
                             const SplitSpec& split) {
  if (grid.empty()) throw DataError("grid_search: empty grid");
  auto parts = split_corpus(corpus, split);
  if (parts.size() < 2)
    throw DataError("grid_search: split must define two partitions");
  const Corpus& train = parts.at(split.fractions.at(0).first);
  const Corpus& valid = parts.at(split.fractions.at(1).first);

  // Validation masking fixed from the split seed alone, identical for every
  // candidate config.
  std::vector<std::pair<MaskedDocument, std::vector<std::string>>> val_set;
  for (const auto& ad : valid.docs) {
    MaskPlan plan;
    plan.doc_id = ad.doc.id;
    plan.masked_positions = training_mask_positions(ad, 1.0, 0.3, split.seed);
    std::vector<std::string> originals;
    for (std::size_t t : plan.masked_positions)
      originals.push_back(ad.doc.tokens[t].text);
    val_set.emplace_back(MaskedDocument{ad.doc, std::move(plan)},
                         std::move(originals));
  }

  GridSearchResult result;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    NativeCountModel m;
    try {
      m = train_native(train, grid[i]);
    } catch (const Error& e) {
      throw DataError("grid_search: config " + std::to_string(i) +
                      " failed to train: " + e.what());
    }
    double ppl = perplexity(m, val_set);
    result.report.push_back({grid[i], ppl});
    if (ppl < best) {
      best = ppl;
      result.best_index = i;
    }
  }
  result.best_config = grid[result.best_index];

  Corpus merged = train;
  merged.name = corpus.name + ":merged";
  for (const auto& d : valid.docs) merged.docs.push_back(d);
  result.model = train_native(merged, result.best_config);
  return result;
}

std::string NativeCountModel::to_json() const {
  auto table_to_json = [](const auto& table) {
    json j = json::object();
    for (const auto& [key, counts] : table) {
      json inner = json::object();
      for (const auto& [w, c] : counts) inner[w] = c;
      j[key] = std::move(inner);
    }
    return j;
  };
  json vocab = json::object();
  for (const auto& [w, c] : vocab_) vocab[w] = c;
  return json{{"format", "synthrec-count-model"},
              {"version", 1},
              {"smoothing_k", smoothing_k_},
              {"lambda", lambda_},
              {"vocab", vocab},
              {"left", table_to_json(left_)},
              {"right", table_to_json(right_)},
              {"skip", table_to_json(skip_)}}
      .dump();
}

NativeCountModel NativeCountModel::from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("model JSON parse error: ") + e.what());
  }
  if (!j.contains("version"))
    throw DataError("model file missing mandatory version field");
  if (j.value("format", "") != "synthrec-count-model" ||
      j["version"].get<int>() != 1)
    throw DataError("unsupported model file format/version");

  NativeCountModel m;
  m.smoothing_k_ = j.at("smoothing_k").get<double>();
  auto lam = j.at("lambda").get<std::vector<double>>();
  if (lam.size() != 4) throw DataError("model file: lambda must have 4 entries");
  std::copy(lam.begin(), lam.end(), m.lambda_.begin());
  for (auto& [w, c] : j.at("vocab").items()) {
    std::size_t n = c.get<std::size_t>();
    m.vocab_[w] = n;
    m.unigram_total_ += n;
  }
  auto load_table = [](const json& src, auto& table, auto& totals) {
    for (auto& [key, counts] : src.items()) {
      auto& inner = table[key];
      std::size_t total = 0;
      for (auto& [w, c] : counts.items()) {
        std::size_t n = c.template get<std::size_t>();
        inner[w] = n;
        total += n;
      }
      totals[key] = total;
    }
  };
  load_table(j.at("left"), m.left_, m.left_total_);
  load_table(j.at("right"), m.right_, m.right_total_);
  load_table(j.at("skip"), m.skip_, m.skip_total_);
  return m;
}

void NativeCountModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  out << to_json() << '\n';
}

NativeCountModel NativeCountModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace synthrec
