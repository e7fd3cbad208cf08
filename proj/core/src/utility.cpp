#include "synthrec/utility.hpp"

#include <algorithm>
#include <iostream>
#include <set>
#include <tuple>

#include <json.hpp>

#include "synthrec/errors.hpp"
#include "synthrec/rng.hpp"

namespace synthrec {

using nlohmann::json;

LabeledDataset extract_entities(const std::vector<Document>& docs,
                                const MedTagger& extractor,
                                bool keep_all_o_sentences) {
  LabeledDataset ds;
  for (const auto& doc : docs) {
    std::vector<AnnotationSpan> spans;
    try {
      spans = extractor.tag(doc);
    } catch (const std::exception& e) {
      std::cerr << "warning: extractor failed on document " << doc.id << ": "
                << e.what() << "; skipping\n";
      ++ds.skipped_docs;
      continue;
    }
    std::vector<std::string> tags(doc.tokens.size(), "O");
    for (const auto& s : spans) {
      tags[s.token_first] = "B-" + s.category;
      for (std::size_t t = s.token_first + 1; t <= s.token_last; ++t)
        tags[t] = "I-" + s.category;
    }
    for (const auto& sent : split_sentences(doc)) {
      LabeledSentence ls;
      bool any_entity = false;
      for (std::size_t t = sent.first_token; t <= sent.last_token; ++t) {
        ls.tokens.push_back(doc.tokens[t].text);
        ls.tags.push_back(tags[t]);
        if (tags[t] != "O") any_entity = true;
      }
      if (any_entity || keep_all_o_sentences)
        ds.sentences.push_back(std::move(ls));
    }
  }
  return ds;
}

std::vector<std::string> PerceptronTagger::features(
    const std::vector<std::string>& tokens, std::size_t i,
    const std::string& prev_tag) const {
  const std::string& w = tokens[i];
  std::string lower = w;
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  bool digit = !w.empty() && std::all_of(w.begin(), w.end(), [](unsigned char c) {
    return std::isdigit(c);
  });
  std::vector<std::string> f;
  f.reserve(8);
  f.push_back("bias");
  f.push_back("w=" + w);
  f.push_back("lw=" + lower);
  f.push_back("p3=" + lower.substr(0, std::min<std::size_t>(3, lower.size())));
  f.push_back("s3=" + (lower.size() > 3 ? lower.substr(lower.size() - 3) : lower));
  if (digit) f.push_back("digit");
  f.push_back("prev=" + (i > 0 ? tokens[i - 1] : std::string("<s>")));
  f.push_back("next=" + (i + 1 < tokens.size() ? tokens[i + 1] : std::string("</s>")));
  f.push_back("ptag=" + prev_tag);
  return f;
}

std::string PerceptronTagger::best_tag(const std::vector<std::string>& feats) const {
  std::string best;
  double best_score = 0.0;
  bool first = true;
  for (const auto& label : labels_) {
    double score = 0.0;
    for (const auto& f : feats) {
      auto fit = weights_.find(f);
      if (fit == weights_.end()) continue;
      auto lit = fit->second.find(label);
      if (lit != fit->second.end()) score += lit->second;
    }
    // Ties go to the lexicographically smaller label for determinism.
    if (first || score > best_score || (score == best_score && label < best)) {
      best = label;
      best_score = score;
      first = false;
    }
  }
  return best;
}

void PerceptronTagger::train(const LabeledDataset& ds, std::size_t epochs,
                             std::uint64_t seed) {
  if (ds.sentences.empty()) throw DataError("train_tagger: empty dataset");
  if (epochs < 1) throw DataError("train_tagger: epochs must be >= 1");

  std::set<std::string> label_set;
  for (const auto& s : ds.sentences)
    for (const auto& t : s.tags) label_set.insert(t);
  labels_.assign(label_set.begin(), label_set.end());

  std::map<std::string, std::map<std::string, double>> totals;
  std::map<std::string, std::map<std::string, std::size_t>> stamps;
  std::size_t step = 0;

  auto bump = [&](const std::string& f, const std::string& tag, double delta) {
    totals[f][tag] +=
        weights_[f][tag] * static_cast<double>(step - stamps[f][tag]);
    stamps[f][tag] = step;
    weights_[f][tag] += delta;
  };

  std::vector<std::size_t> order(ds.sentences.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    StreamKey key;
    key.mix("perceptron").mix(seed).mix(static_cast<std::uint64_t>(epoch));
    Rng rng = key.rng();
    rng.shuffle(order);
    for (std::size_t si : order) {
      const LabeledSentence& s = ds.sentences[si];
      std::string prev = "<start>";
      for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        ++step;
        auto feats = features(s.tokens, i, prev);
        std::string guess = best_tag(feats);
        if (guess != s.tags[i]) {
          for (const auto& f : feats) {
            bump(f, s.tags[i], 1.0);
            bump(f, guess, -1.0);
          }
        }
        prev = guess;
      }
    }
  }

  // Finalize averaged weights.
  for (auto& [f, by_tag] : weights_) {
    for (auto& [tag, w] : by_tag) {
      double total =
          totals[f][tag] + w * static_cast<double>(step - stamps[f][tag]);
      w = total / static_cast<double>(step);
    }
  }
}

std::vector<std::string> PerceptronTagger::predict(
    const std::vector<std::string>& tokens) const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  std::string prev = "<start>";
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string tag =
        labels_.empty() ? "O" : best_tag(features(tokens, i, prev));
    out.push_back(tag);
    prev = tag;
  }
  return out;
}

namespace {

struct Entity {
  std::size_t sentence, first, last;
  std::string label;
  bool operator<(const Entity& o) const {
    return std::tie(sentence, first, last, label) <
           std::tie(o.sentence, o.first, o.last, o.label);
  }
};

std::set<Entity> collect_entities(const std::vector<std::vector<std::string>>& tags) {
  std::set<Entity> out;
  for (std::size_t s = 0; s < tags.size(); ++s) {
    const auto& seq = tags[s];
    std::size_t i = 0;
    while (i < seq.size()) {
      if (seq[i].rfind("B-", 0) == 0) {
        std::string label = seq[i].substr(2);
        std::size_t j = i + 1;
        while (j < seq.size() && seq[j] == "I-" + label) ++j;
        out.insert({s, i, j - 1, label});
        i = j;
      } else {
        ++i;
      }
    }
  }
  return out;
}

}  // namespace

EntityScore evaluate_tagger(const PerceptronTagger& tagger,
                            const LabeledDataset& test) {
  std::vector<std::vector<std::string>> gold_tags, pred_tags;
  for (const auto& s : test.sentences) {
    gold_tags.push_back(s.tags);
    pred_tags.push_back(tagger.predict(s.tokens));
  }
  auto gold = collect_entities(gold_tags);
  auto pred = collect_entities(pred_tags);

  std::set<std::string> labels;
  for (const auto& e : gold) labels.insert(e.label);
  for (const auto& e : pred) labels.insert(e.label);

  EntityScore score;
  double macro_p = 0.0, macro_r = 0.0;
  for (const auto& label : labels) {
    std::size_t tp = 0, gold_n = 0, pred_n = 0;
    for (const auto& e : gold)
      if (e.label == label) ++gold_n;
    for (const auto& e : pred) {
      if (e.label != label) continue;
      ++pred_n;
      if (gold.count(e)) ++tp;
    }
    double p = pred_n ? static_cast<double>(tp) / pred_n : 0.0;
    double r = gold_n ? static_cast<double>(tp) / gold_n : 0.0;
    score.per_label[label] = make_prf(p, r);
    macro_p += p;
    macro_r += r;
  }
  if (!labels.empty())
    score.macro = make_prf(macro_p / labels.size(), macro_r / labels.size());
  return score;
}

UtilityReport run_utility_experiment(const Corpus& real,
                                     const GenerationPipeline& pipeline,
                                     const SystemPreset& preset,
                                     const MedTagger& extractor,
                                     const UtilityConfig& config) {
  if (real.docs.size() < 10)
    throw DataError("run_utility_experiment: need at least 10 documents");
  if (config.multiplier < 1 || config.multiplier > 2)
    throw DataError("run_utility_experiment: multiplier must be 1 or 2");

  SplitSpec spec;
  spec.fractions = {{"train", 0.8}, {"test", 0.2}};
  spec.seed = config.seed;
  auto parts = split_corpus(real, spec);
  const Corpus& train = parts.at("train");
  const Corpus& test = parts.at("test");

  auto docs_of = [](const Corpus& c) {
    std::vector<Document> out;
    for (const auto& ad : c.docs) out.push_back(ad.doc);
    return out;
  };

  LabeledDataset test_ds =
      extract_entities(docs_of(test), extractor, config.keep_all_o_sentences);

  UtilityReport report;
  report.test_docs = test.docs.size();

  auto run_arm = [&](const std::string& name, const std::vector<Document>& docs) {
    LabeledDataset ds =
        extract_entities(docs, extractor, config.keep_all_o_sentences);
    PerceptronTagger tagger;
    tagger.train(ds, config.epochs, config.seed);
    UtilityArm arm;
    arm.name = name;
    arm.score = evaluate_tagger(tagger, test_ds);
    arm.train_sentences = ds.sentences.size();
    arm.train_letters = docs.size();
    report.arms.push_back(std::move(arm));
  };

  run_arm("real", docs_of(train));

  // All variants generated in one pass per document so the x1 arm is a prefix
  // of the x2 arm.
  std::vector<std::vector<Document>> variants(config.multiplier);
  for (const auto& ad : train.docs) {
    auto gen = generate(pipeline, ad, preset, config.multiplier, config.seed);
    for (std::size_t v = 0; v < gen.size(); ++v) {
      Document d = tokenize(gen[v].synth.text,
                            ad.doc.id + "#v" + std::to_string(v));
      for (std::size_t m = v; m < config.multiplier; ++m)
        variants[m].push_back(d);
    }
  }
  for (std::size_t m = 0; m < config.multiplier; ++m)
    run_arm("synth_x" + std::to_string(m + 1), variants[m]);
  return report;
}

std::string utility_report_to_json(const UtilityReport& report) {
  auto prf_json = [](const PrfScore& s) {
    return json{{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
  };
  json arms = json::array();
  for (const auto& arm : report.arms) {
    json per_label = json::object();
    for (const auto& [label, s] : arm.score.per_label)
      per_label[label] = prf_json(s);
    arms.push_back({{"name", arm.name},
                    {"per_label", per_label},
                    {"macro", prf_json(arm.score.macro)},
                    {"train_sentences", arm.train_sentences},
                    {"train_letters", arm.train_letters}});
  }
  return json{{"metric", "utility"},
              {"arms", arms},
              {"test_docs", report.test_docs}}
      .dump(2);
}

}  // namespace synthrec
