#include <doctest.h>

#include <map>

#include "synthrec/errors.hpp"
#include "synthrec/filler.hpp"

using namespace synthrec;

namespace {

// Records every model call; answers with a configurable token list.
struct ProbeModel : FillModel {
  mutable std::vector<std::vector<std::string>> contexts;
  mutable std::vector<std::vector<std::size_t>> positions;
  std::size_t win = 21;
  // Token emitted for the n-th selection overall (by call order).
  mutable std::size_t counter = 0;

  std::vector<FillDistribution> predict(
      const std::vector<std::string>& context,
      const std::vector<std::size_t>& pos, std::size_t) const override {
    contexts.push_back(context);
    positions.push_back(pos);
    std::vector<FillDistribution> out;
    for (std::size_t i = 0; i < pos.size(); ++i)
      out.push_back({{"chosen" + std::to_string(counter++), 1.0}});
    return out;
  }
  std::size_t window() const override { return win; }
};

MaskedDocument masked(const std::string& text,
                      std::vector<std::size_t> positions) {
  MaskedDocument md;
  md.doc = tokenize(text, "d");
  md.plan.doc_id = "d";
  md.plan.masked_positions = std::move(positions);
  return md;
}

}  // namespace

TEST_CASE("presets carry the documented mask ratios and algorithms") {
  for (const auto& name : preset_names()) {
    SystemPreset p = preset_by_name(name);
    CHECK(p.policy.phi_proportion == 1.0);
    CHECK(p.policy.med_ratios.empty());  // medical content is retained
    CHECK(p.fill.selection == FillSelection::Stochastic);
    double ratio = p.policy.pos_ratios.at(PosTag::Noun);
    CHECK(p.policy.pos_ratios.at(PosTag::Verb) == ratio);
    CHECK(p.policy.pos_ratios.at(PosTag::Adj) == ratio);
  }
  CHECK(preset_by_name("S_0.5").policy.pos_ratios.at(PosTag::Noun) == 0.5);
  CHECK(preset_by_name("S_0.7").fill.algorithm == FillAlgorithm::Simultaneous);
  CHECK(preset_by_name("I_0.9").fill.algorithm == FillAlgorithm::Iterative);
  CHECK(preset_by_name("I_0.9").policy.pos_ratios.at(PosTag::Adj) == 0.9);
  CHECK_THROWS_AS(preset_by_name("X_1.0"), DataError);
}

TEST_CASE("simultaneous filling issues one call per chunk holding a mask") {
  // Three sentences of 4 tokens each; chunk_len 8 snaps back to sentence ends,
  // so chunks are [s1+s2][s3].
  ProbeModel model;
  MaskedDocument md = masked("a b c. d e f. g h i.", {1, 9});
  FillConfig config;
  config.algorithm = FillAlgorithm::Simultaneous;
  config.selection = FillSelection::Deterministic;
  config.chunk_len = 8;
  fill_simultaneous(md, model, config);
  REQUIRE(model.contexts.size() == 2);
  CHECK(model.contexts[0] ==
        std::vector<std::string>{"a", "[MASK]", "c", ".", "d", "e", "f", "."});
  CHECK(model.positions[0] == std::vector<std::size_t>{1});
  CHECK(model.contexts[1] == std::vector<std::string>{"g", "[MASK]", "i", "."});
  CHECK(model.positions[1] == std::vector<std::size_t>{1});
}

TEST_CASE("simultaneous filling skips chunks without masks") {
  ProbeModel model;
  MaskedDocument md = masked("a b c. d e f. g h i.", {9});
  FillConfig config;
  config.algorithm = FillAlgorithm::Simultaneous;
  config.selection = FillSelection::Deterministic;
  config.chunk_len = 4;
  fill_simultaneous(md, model, config);
  REQUIRE(model.contexts.size() == 1);  // only the chunk holding token 9
  CHECK(model.positions[0].size() == 1);
}

TEST_CASE("simultaneous filling groups all masks of a chunk into one call") {
  ProbeModel model;
  MaskedDocument md = masked("a b c d e f.", {1, 2, 4});
  FillConfig config;
  config.algorithm = FillAlgorithm::Simultaneous;
  config.selection = FillSelection::Deterministic;
  config.chunk_len = 21;
  fill_simultaneous(md, model, config);
  REQUIRE(model.contexts.size() == 1);
  CHECK(model.positions[0] == std::vector<std::size_t>{1, 2, 4});
}

TEST_CASE("iterative filling feeds chosen tokens forward, originals backward") {
  ProbeModel model;
  MaskedDocument md = masked("ta tb tc td te tf", {1, 3, 5});
  FillConfig config;
  config.algorithm = FillAlgorithm::Iterative;
  config.selection = FillSelection::Deterministic;
  auto sd = fill_iterative(md, model, config);
  REQUIRE(model.contexts.size() == 3);  // one call per mask
  // First mask: sentinel at 1, future masks keep their original tokens.
  CHECK(model.contexts[0] ==
        std::vector<std::string>{"ta", "[MASK]", "tc", "td", "te", "tf"});
  // Second mask: earlier mask shows its chosen replacement.
  CHECK(model.contexts[1] ==
        std::vector<std::string>{"ta", "chosen0", "tc", "[MASK]", "te", "tf"});
  // Third mask: both earlier choices visible, sentinel at the current mask.
  CHECK(model.contexts[2] ==
        std::vector<std::string>{"ta", "chosen0", "tc", "chosen1", "te",
                                 "[MASK]"});
  CHECK(sd.text == "ta chosen0 tc chosen1 te chosen2");
  CHECK(sd.filled.at(3) == "chosen1");
}

TEST_CASE("iterative filling windows long documents around each mask") {
  ProbeModel model;
  model.win = 5;
  auto word = [](int i) {
    return std::string("w") + char('a' + i / 10) + char('a' + i % 10);
  };
  std::string text;
  for (int i = 0; i < 30; ++i) text += word(i) + " ";
  MaskedDocument md = masked(text, {15});
  FillConfig config;
  config.algorithm = FillAlgorithm::Iterative;
  config.selection = FillSelection::Deterministic;
  fill_iterative(md, model, config);
  REQUIRE(model.contexts.size() == 1);
  CHECK(model.contexts[0] ==
        std::vector<std::string>{word(13), word(14), "[MASK]", word(16), word(17)});
  CHECK(model.positions[0] == std::vector<std::size_t>{2});
}

TEST_CASE("deterministic selection takes the argmax with lexicographic ties") {
  Rng rng(1);
  FillConfig config;
  config.selection = FillSelection::Deterministic;
  CHECK(select_token({{"zeta", 0.6}, {"alpha", 0.3}}, config, rng) == "zeta");
  CHECK(select_token({{"zeta", 0.4}, {"beta", 0.4}, {"alpha", 0.2}}, config,
                     rng) == "beta");
  CHECK_THROWS_AS(select_token({}, config, rng), DataError);
}

TEST_CASE("stochastic selection tracks the distribution within monte-carlo noise") {
  FillDistribution dist = {{"a", 0.6}, {"b", 0.3}, {"c", 0.1}};
  FillConfig config;
  config.selection = FillSelection::Stochastic;
  std::map<std::string, int> freq;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    Rng rng(1000 + i);
    ++freq[select_token(dist, config, rng)];
  }
  CHECK(freq["a"] / double(n) == doctest::Approx(0.6).epsilon(0.035));
  CHECK(freq["b"] / double(n) == doctest::Approx(0.3).epsilon(0.07));
  CHECK(freq["c"] / double(n) == doctest::Approx(0.1).epsilon(0.2));

  // Low temperature sharpens towards the mode.
  config.temperature = 0.2;
  int a_hits = 0;
  for (int i = 0; i < 2000; ++i) {
    Rng rng(5000 + i);
    if (select_token(dist, config, rng) == "a") ++a_hits;
  }
  CHECK(a_hits > 1800);

  // top_k truncation removes the tail entirely.
  config.temperature = 1.0;
  config.top_k = 2;
  for (int i = 0; i < 500; ++i) {
    Rng rng(i);
    CHECK(select_token(dist, config, rng) != "c");
  }
}

TEST_CASE("an empty mask plan reproduces the letter without model calls") {
  ProbeModel model;
  MaskedDocument md = masked("nothing to do here.", {});
  FillConfig config;
  for (auto alg : {FillAlgorithm::Simultaneous, FillAlgorithm::Iterative}) {
    config.algorithm = alg;
    auto sd = fill(md, model, config);
    CHECK(sd.text == "nothing to do here.");
    CHECK(sd.filled.empty());
  }
  CHECK(model.contexts.empty());
}

TEST_CASE("filling is deterministic in the seed") {
  TrainingConfig tc;
  tc.psi = 0.0;
  Corpus train = generate_fixture_corpus(1, 10);
  NativeCountModel model = train_native(train, tc);
  MaskedDocument md = masked("The patient was seen today and was well.", {1, 4, 7});
  FillConfig config;
  config.selection = FillSelection::Stochastic;
  config.seed = 11;
  for (auto alg : {FillAlgorithm::Simultaneous, FillAlgorithm::Iterative}) {
    config.algorithm = alg;
    auto a = fill(md, model, config);
    auto b = fill(md, model, config);
    CHECK(a.text == b.text);
    config.seed = 12;
    auto c = fill(md, model, config);
    config.seed = 11;
    // Unmasked positions always survive verbatim.
    for (std::size_t t = 0; t < md.doc.tokens.size(); ++t) {
      if (t == 1 || t == 4 || t == 7) continue;
      CHECK(c.filled.count(t) == 0);
    }
  }
}

TEST_CASE("fill config json round-trips and validates") {
  FillConfig config;
  config.algorithm = FillAlgorithm::Iterative;
  config.selection = FillSelection::Deterministic;
  config.temperature = 0.7;
  config.top_k = 12;
  config.chunk_len = 9;
  config.seed = 5;
  FillConfig back = fill_config_from_json(fill_config_to_json(config));
  CHECK(back.algorithm == config.algorithm);
  CHECK(back.selection == config.selection);
  CHECK(back.temperature == config.temperature);
  CHECK(back.top_k == config.top_k);
  CHECK(back.chunk_len == config.chunk_len);
  CHECK(back.seed == config.seed);
  CHECK_THROWS_AS(fill_config_from_json(R"({"algorithm":"sideways"})"), DataError);
  CHECK_THROWS_AS(fill_config_from_json(R"({"temperature":0})"), DataError);
  CHECK_THROWS_AS(fill_config_from_json(R"({"chunk_len":2})"), DataError);
}

TEST_CASE("generation wraps stage failures with stage and document names") {
  struct FailingModel : FillModel {
    std::vector<FillDistribution> predict(const std::vector<std::string>&,
                                          const std::vector<std::size_t>&,
                                          std::size_t) const override {
      throw TransportError("backend down");
    }
    std::size_t window() const override { return 21; }
  };
  Corpus corpus = generate_fixture_corpus(1, 1);
  RuleSet rules = load_rules(default_data_dir() + "/phi_rules.json");
  Gazetteer gaz = load_gazetteer(default_data_dir() + "/clinical_gazetteer.tsv",
                                 {"PROBLEM", "TEST", "TREATMENT"});
  PosLexicon lex = load_pos_lexicon(default_data_dir() + "/pos_lexicon.tsv");
  FailingModel bad;
  GenerationPipeline pipeline{&rules, &gaz, &lex, &bad};
  CHECK_THROWS_WITH_AS(
      generate(pipeline, corpus.docs[0], preset_by_name("S_0.5"), 1, 1),
      doctest::Contains("filling failed"), DataError);
  GenerationPipeline incomplete{&rules, &gaz, nullptr, &bad};
  CHECK_THROWS_AS(
      generate(incomplete, corpus.docs[0], preset_by_name("S_0.5"), 1, 1),
      DataError);
}

TEST_CASE("generate produces the requested number of deterministic variants") {
  Corpus corpus = generate_fixture_corpus(3, 3);
  TrainingConfig tc;
  NativeCountModel model = train_native(corpus, tc);
  RuleSet rules = load_rules(default_data_dir() + "/phi_rules.json");
  Gazetteer gaz = load_gazetteer(default_data_dir() + "/clinical_gazetteer.tsv",
                                 {"PROBLEM", "TEST", "TREATMENT"});
  PosLexicon lex = load_pos_lexicon(default_data_dir() + "/pos_lexicon.tsv");
  GenerationPipeline pipeline{&rules, &gaz, &lex, &model};
  auto a = generate(pipeline, corpus.docs[0], preset_by_name("I_0.7"), 2, 9);
  auto b = generate(pipeline, corpus.docs[0], preset_by_name("I_0.7"), 2, 9);
  REQUIRE(a.size() == 2);
  CHECK(a[0].synth.text == b[0].synth.text);
  CHECK(a[1].synth.text == b[1].synth.text);
  CHECK(a[0].synth.variant_index == 0);
  CHECK(a[1].synth.variant_index == 1);
  // Variants use different masking seeds, so they differ with high probability.
  CHECK(a[0].plan.masked_positions != a[1].plan.masked_positions);
}
