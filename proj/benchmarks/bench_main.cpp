#include <benchmark/benchmark.h>

#include "synthrec/corpus.hpp"
#include "synthrec/filler.hpp"
#include "synthrec/masker.hpp"
#include "synthrec/medner.hpp"
#include "synthrec/mlm.hpp"
#include "synthrec/phi.hpp"
#include "synthrec/pos.hpp"
#include "synthrec/resemblance.hpp"

namespace {

using namespace synthrec;

const Corpus& corpus() {
  static Corpus c = generate_fixture_corpus(11, 50);
  return c;
}

const RuleSet& rules() {
  static RuleSet r = load_rules(default_data_dir() + "/phi_rules.json");
  return r;
}

void BM_Tokenize(benchmark::State& state) {
  const std::string& text = corpus().docs[0].doc.text;
  for (auto _ : state) benchmark::DoNotOptimize(tokenize(text));
}
BENCHMARK(BM_Tokenize);

void BM_DetectPhi(benchmark::State& state) {
  const Document& doc = corpus().docs[0].doc;
  for (auto _ : state) benchmark::DoNotOptimize(detect_phi(doc, rules()));
}
BENCHMARK(BM_DetectPhi);

void BM_MaskPlan(benchmark::State& state) {
  const AnnotatedDocument& ad = corpus().docs[0];
  auto gaz = load_gazetteer(default_data_dir() + "/clinical_gazetteer.tsv",
                            {"PROBLEM", "TEST", "TREATMENT"});
  auto lex = load_pos_lexicon(default_data_dir() + "/pos_lexicon.tsv");
  auto phi = detect_phi(ad.doc, rules());
  auto med = tag_medical(ad.doc, gaz);
  auto pos = tag_pos(ad.doc, lex);
  MaskPolicy policy = preset_by_name("S_0.7").policy;
  for (auto _ : state)
    benchmark::DoNotOptimize(build_mask_plan(ad.doc, phi, med, pos, policy));
}
BENCHMARK(BM_MaskPlan);

void BM_TrainNative(benchmark::State& state) {
  TrainingConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(train_native(corpus(), cfg));
}
BENCHMARK(BM_TrainNative);

void BM_Rouge(benchmark::State& state) {
  const Document& a = corpus().docs[0].doc;
  const Document& b = corpus().docs[1].doc;
  for (auto _ : state) benchmark::DoNotOptimize(rouge(a, b));
}
BENCHMARK(BM_Rouge);

}  // namespace
