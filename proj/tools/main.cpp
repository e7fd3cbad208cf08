#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "synthrec/corpus.hpp"
#include "synthrec/errors.hpp"
#include "synthrec/filler.hpp"
#include "synthrec/masker.hpp"
#include "synthrec/medner.hpp"
#include "synthrec/mlm.hpp"
#include "synthrec/phi.hpp"
#include "synthrec/pos.hpp"
#include "synthrec/privacy.hpp"
#include "synthrec/remote.hpp"
#include "synthrec/resemblance.hpp"
#include "synthrec/utility.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace synthrec;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << content;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct DataFiles {
  RuleSet rules;
  Gazetteer gazetteer;
  PosLexicon pos_lexicon;
};

DataFiles load_data_files() {
  std::string dir = default_data_dir();
  DataFiles d;
  d.rules = load_rules(dir + "/phi_rules.json");
  d.gazetteer = load_gazetteer(dir + "/clinical_gazetteer.tsv",
                               {"PROBLEM", "TEST", "TREATMENT"});
  d.pos_lexicon = load_pos_lexicon(dir + "/pos_lexicon.tsv");
  return d;
}

TrainingConfig training_config_from_json(const json& j) {
  TrainingConfig c;
  c.alpha = j.value("alpha", c.alpha);
  c.beta = j.value("beta", c.beta);
  c.phi = j.value("phi", c.phi);
  c.psi = j.value("psi", c.psi);
  c.patience = j.value("patience", c.patience);
  c.smoothing_k = j.value("smoothing_k", c.smoothing_k);
  if (j.contains("lambda")) {
    auto l = j.at("lambda");
    if (!l.is_array() || l.size() != 4)
      throw DataError("training config: lambda must hold 4 weights");
    for (std::size_t i = 0; i < 4; ++i) c.lambda[i] = l[i].get<double>();
  }
  c.seed = j.value("seed", c.seed);
  return c;
}

json training_config_to_json(const TrainingConfig& c) {
  return json{{"alpha", c.alpha},       {"beta", c.beta},
              {"phi", c.phi},           {"psi", c.psi},
              {"patience", c.patience}, {"smoothing_k", c.smoothing_k},
              {"lambda", c.lambda},     {"seed", c.seed}};
}

struct GenerateOptions {
  std::string input;
  std::string out;
  std::string preset = "I_0.7";
  std::string model_path;
  std::string backend = "native";
  std::string endpoint;
  std::uint64_t seed = 0;
  std::size_t multiplier = 1;
  std::size_t workers = 0;  // 0 = hardware concurrency
};

struct Backend {
  std::unique_ptr<FillModel> owned;
  const FillModel* model = nullptr;
};

Backend make_backend(const GenerateOptions& opt) {
  Backend b;
  if (opt.backend == "native") {
    if (opt.model_path.empty())
      throw DataError("native backend requires --model");
    b.owned = std::make_unique<NativeCountModel>(
        NativeCountModel::load(opt.model_path));
  } else if (opt.backend == "remote") {
    if (opt.endpoint.empty())
      throw DataError("remote backend requires --endpoint");
    b.owned = std::make_unique<RemoteFillModel>(opt.endpoint);
  } else {
    throw DataError("unknown backend: " + opt.backend);
  }
  b.model = b.owned.get();
  return b;
}

void run_generate(const GenerateOptions& opt) {
  Corpus corpus = load_corpus_file(opt.input);
  DataFiles data = load_data_files();
  Backend backend = make_backend(opt);
  SystemPreset preset = preset_by_name(opt.preset);

  GenerationPipeline pipeline;
  pipeline.rules = &data.rules;
  pipeline.gazetteer = &data.gazetteer;
  pipeline.pos_lexicon = &data.pos_lexicon;
  pipeline.model = backend.model;

  std::size_t workers = opt.workers ? opt.workers
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, corpus.docs.size());

  std::vector<std::vector<GeneratedVariant>> results(corpus.docs.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mu;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= corpus.docs.size()) return;
      try {
        results[i] =
            generate(pipeline, corpus.docs[i], preset, opt.multiplier, opt.seed);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
    json variants = json::array();
    for (const auto& v : results[i]) {
      variants.push_back({{"plan", json::parse(mask_plan_to_json(v.plan))},
                          {"synth", json::parse(synthetic_to_json(v.synth))}});
    }
    json doc = {{"doc_id", corpus.docs[i].doc.id}, {"variants", variants}};
    write_file(opt.out + "/docs/" + corpus.docs[i].doc.id + ".json",
               doc.dump(2) + "\n");
  }

  json manifest = {{"tool", "synthrec"},
                   {"command", "generate"},
                   {"input", fs::absolute(opt.input).string()},
                   {"input_hash", fnv1a_hex(read_file(opt.input))},
                   {"preset", opt.preset},
                   {"backend", opt.backend},
                   {"endpoint", opt.endpoint},
                   {"model", opt.model_path.empty()
                                 ? ""
                                 : fs::absolute(opt.model_path).string()},
                   {"model_hash", opt.model_path.empty()
                                      ? ""
                                      : fnv1a_hex(read_file(opt.model_path))},
                   {"seed", opt.seed},
                   {"multiplier", opt.multiplier}};
  write_file(opt.out + "/manifest.json", manifest.dump(2) + "\n");
}

// Reads a generate output tree back into privacy pairs.
struct GeneratedTree {
  std::vector<MaskPlan> plans;                      // variant 0, corpus order
  std::vector<std::vector<MaskPlan>> all_plans;     // per doc, per variant
  std::vector<std::vector<SyntheticDocument>> all_synth;
};

GeneratedTree load_generated(const Corpus& corpus, const std::string& dir) {
  GeneratedTree tree;
  for (const auto& ad : corpus.docs) {
    std::string path = dir + "/docs/" + ad.doc.id + ".json";
    json doc = json::parse(read_file(path));
    std::vector<MaskPlan> plans;
    std::vector<SyntheticDocument> synths;
    for (const auto& v : doc.at("variants")) {
      plans.push_back(mask_plan_from_json(v.at("plan").dump()));
      synths.push_back(synthetic_from_json(v.at("synth").dump()));
    }
    if (plans.empty()) throw DataError("no variants recorded for " + ad.doc.id);
    tree.plans.push_back(plans.front());
    tree.all_plans.push_back(std::move(plans));
    tree.all_synth.push_back(std::move(synths));
  }
  return tree;
}

int run_eval_resemblance(const std::string& input, const std::string& synth_dir,
                         const std::string& out) {
  Corpus corpus = load_corpus_file(input);
  GeneratedTree tree = load_generated(corpus, synth_dir);
  auto stopwords = load_stopwords(default_data_dir() + "/stopwords.txt");
  HashedProjectionProvider provider;

  double r1 = 0, r2 = 0, rl = 0, emb = 0;
  double fre_real = 0, fkg_real = 0, smog_real = 0;
  double fre_synth = 0, fkg_synth = 0, smog_synth = 0;
  std::size_t pairs = 0;
  std::vector<SyntheticDocument> flat;
  for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
    const Document& real = corpus.docs[i].doc;
    auto rr = readability(real);
    fre_real += rr.fre;
    fkg_real += rr.fkg;
    smog_real += rr.smog;
    for (const auto& sd : tree.all_synth[i]) {
      Document synth = tokenize(sd.text, sd.source_id);
      auto scores = rouge(synth, real);
      r1 += scores.r1.f1;
      r2 += scores.r2.f1;
      rl += scores.rl.f1;
      emb += embed_score(synth, real, provider).f1;
      auto rs = readability(synth);
      fre_synth += rs.fre;
      fkg_synth += rs.fkg;
      smog_synth += rs.smog;
      ++pairs;
      flat.push_back(sd);
    }
  }
  if (pairs == 0) throw DataError("no synthetic documents found in " + synth_dir);
  auto overlap = topk_overlap(corpus, flat, {5, 10}, stopwords);

  const double n = static_cast<double>(pairs);
  const double nd = static_cast<double>(corpus.docs.size());
  json overlap_json = json::object();
  for (const auto& [k, v] : overlap) overlap_json[std::to_string(k)] = v;
  json report = {
      {"metric", "resemblance"},
      {"pairs", pairs},
      {"rouge", {{"rouge1_f", r1 / n}, {"rouge2_f", r2 / n}, {"rougeL_f", rl / n}}},
      {"embedding_f", emb / n},
      {"readability",
       {{"real", {{"fre", fre_real / nd}, {"fkg", fkg_real / nd}, {"smog", smog_real / nd}}},
        {"synthetic",
         {{"fre", fre_synth / n}, {"fkg", fkg_synth / n}, {"smog", smog_synth / n}}}}},
      {"topk_overlap", overlap_json}};
  write_file(out, report.dump(2) + "\n");
  std::cout << "wrote " << out << "\n";
  return 0;
}

int run_eval_privacy(const std::string& input, const std::string& synth_dir,
                     const std::string& out, bool hipaa_only) {
  Corpus corpus = load_corpus_file(input);
  GeneratedTree tree = load_generated(corpus, synth_dir);
  std::vector<PrivacyPair> pairs;
  for (std::size_t i = 0; i < corpus.docs.size(); ++i)
    for (std::size_t v = 0; v < tree.all_synth[i].size(); ++v)
      pairs.push_back(
          {&corpus.docs[i], &tree.all_plans[i][v], &tree.all_synth[i][v]});
  PrivacyReport report = privacy_report(corpus.docs, tree.plans, pairs);
  json j = json::parse(privacy_report_to_json(report));
  j["summary_recall"] =
      hipaa_only ? report.recall_hipaa.recall : report.recall_all.recall;
  write_file(out, j.dump(2) + "\n");
  std::cout << "wrote " << out << "\n";
  return 0;
}

}  // namespace

int dispatch(int argc, char** argv) {
  CLI::App app{"Synthetic medical record generation toolkit"};
  app.require_subcommand(1);

  // fixture
  auto* fixture = app.add_subcommand("fixture", "Generate the gold-annotated fixture corpus");
  std::uint64_t fx_seed = 0;
  std::size_t fx_n = 50;
  std::string fx_out;
  fixture->add_option("--seed", fx_seed, "Corpus seed")->required()
      ->envname("SYNTHRECORD_SEED");
  fixture->add_option("--n", fx_n, "Number of letters");
  fixture->add_option("--out", fx_out, "Output corpus JSON")->required();

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Convert annotated XML letters to corpus JSON");
  std::vector<std::string> in_inputs;
  std::string in_out, in_name = "ingested";
  ingest->add_option("--input", in_inputs, "XML files")->required()
      ->check(CLI::ExistingFile);
  ingest->add_option("--out", in_out, "Output corpus JSON")->required();
  ingest->add_option("--name", in_name, "Corpus name");

  // train
  auto* train = app.add_subcommand("train", "Train the native count model (optionally over a config grid)");
  std::string tr_input, tr_out, tr_grid, tr_report;
  std::uint64_t tr_seed = 0;
  train->add_option("--input", tr_input, "Corpus JSON")->required()
      ->check(CLI::ExistingFile);
  train->add_option("--out", tr_out, "Output model JSON")->required();
  train->add_option("--grid", tr_grid, "Grid JSON ({\"split_seed\": n, \"grid\": [config...]})")
      ->check(CLI::ExistingFile);
  train->add_option("--report", tr_report, "Grid-search report JSON");
  train->add_option("--seed", tr_seed, "Training seed (no-grid mode)")
      ->envname("SYNTHRECORD_SEED");

  // mask
  auto* mask = app.add_subcommand("mask", "Emit mask plans and masked letters");
  std::string mk_input, mk_out, mk_preset = "I_0.7", mk_policy;
  std::uint64_t mk_seed = 0;
  mask->add_option("--input", mk_input, "Corpus JSON")->required()
      ->check(CLI::ExistingFile);
  mask->add_option("--out", mk_out, "Output directory")->required();
  mask->add_option("--preset", mk_preset, "Preset name");
  mask->add_option("--policy", mk_policy, "Custom policy JSON (overrides preset)")
      ->check(CLI::ExistingFile);
  mask->add_option("--seed", mk_seed, "Masking seed")->required()
      ->envname("SYNTHRECORD_SEED");

  // fill
  auto* fill_cmd = app.add_subcommand("fill", "Fill previously emitted mask plans");
  std::string fl_input, fl_plans, fl_model, fl_out, fl_preset = "I_0.7", fl_config;
  std::uint64_t fl_seed = 0;
  fill_cmd->add_option("--input", fl_input, "Corpus JSON")->required()
      ->check(CLI::ExistingFile);
  fill_cmd->add_option("--plans", fl_plans, "Directory produced by `mask`")->required();
  fill_cmd->add_option("--model", fl_model, "Native model JSON")->required()
      ->check(CLI::ExistingFile);
  fill_cmd->add_option("--out", fl_out, "Output directory")->required();
  fill_cmd->add_option("--preset", fl_preset, "Preset supplying the fill config");
  fill_cmd->add_option("--fill-config", fl_config, "Custom fill config JSON")
      ->check(CLI::ExistingFile);
  fill_cmd->add_option("--seed", fl_seed, "Fill seed")->required()
      ->envname("SYNTHRECORD_SEED");

  // generate
  auto* gen = app.add_subcommand("generate", "End-to-end synthetic letter generation");
  GenerateOptions go;
  gen->add_option("--input", go.input, "Corpus JSON")->required()
      ->check(CLI::ExistingFile);
  gen->add_option("--out", go.out, "Output directory")->required();
  gen->add_option("--preset", go.preset, "Preset name");
  gen->add_option("--model", go.model_path, "Native model JSON");
  gen->add_option("--backend", go.backend, "native | remote")
      ->envname("SYNTHRECORD_BACKEND");
  gen->add_option("--endpoint", go.endpoint, "Remote backend endpoint")
      ->envname("SYNTHRECORD_ENDPOINT");
  gen->add_option("--seed", go.seed, "Generation seed")->required()
      ->envname("SYNTHRECORD_SEED");
  gen->add_option("--multiplier", go.multiplier, "Variants per letter");
  gen->add_option("--workers", go.workers, "Worker pool size")
      ->envname("SYNTHRECORD_WORKERS");

  // eval
  auto* eval = app.add_subcommand("eval", "Evaluation reports");
  eval->require_subcommand(1);
  auto* ev_res = eval->add_subcommand("resemblance", "ROUGE/embedding/readability/top-k report");
  std::string er_input, er_synth, er_out;
  ev_res->add_option("--input", er_input, "Real corpus JSON")->required()
      ->check(CLI::ExistingFile);
  ev_res->add_option("--synth", er_synth, "Directory produced by `generate`")->required();
  ev_res->add_option("--out", er_out, "Report JSON path")->required();

  auto* ev_priv = eval->add_subcommand("privacy", "Recall/re-identification/LCS report");
  std::string ep_input, ep_synth, ep_out;
  bool ep_hipaa = false;
  ev_priv->add_option("--input", ep_input, "Real corpus JSON")->required()
      ->check(CLI::ExistingFile);
  ev_priv->add_option("--synth", ep_synth, "Directory produced by `generate`")->required();
  ev_priv->add_option("--out", ep_out, "Report JSON path")->required();
  ev_priv->add_flag("--hipaa-only", ep_hipaa, "Summarize recall over HIPAA categories only");

  auto* ev_util = eval->add_subcommand("utility", "Downstream NER utility report");
  std::string eu_input, eu_model, eu_out, eu_preset = "I_0.7";
  std::uint64_t eu_seed = 0;
  std::size_t eu_mult = 1, eu_epochs = 5;
  ev_util->add_option("--input", eu_input, "Real corpus JSON")->required()
      ->check(CLI::ExistingFile);
  ev_util->add_option("--model", eu_model, "Native model JSON")->required()
      ->check(CLI::ExistingFile);
  ev_util->add_option("--out", eu_out, "Report JSON path")->required();
  ev_util->add_option("--preset", eu_preset, "Preset name");
  ev_util->add_option("--seed", eu_seed, "Experiment seed")->required()
      ->envname("SYNTHRECORD_SEED");
  ev_util->add_option("--multiplier", eu_mult, "Synthetic letters per original");
  ev_util->add_option("--epochs", eu_epochs, "Tagger training epochs");

  // replay
  auto* replay = app.add_subcommand("replay", "Re-run a generation from its manifest");
  std::string rp_manifest, rp_out;
  replay->add_option("--manifest", rp_manifest, "manifest.json from `generate`")->required()
      ->check(CLI::ExistingFile);
  replay->add_option("--out", rp_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (fixture->parsed()) {
    Corpus corpus = generate_fixture_corpus(fx_seed, fx_n);
    save_corpus_file(corpus, fx_out);
    std::cout << "wrote " << fx_out << " (" << corpus.docs.size() << " letters)\n";
    return 0;
  }

  if (ingest->parsed()) {
    Corpus corpus;
    corpus.name = in_name;
    for (const auto& path : in_inputs) {
      std::string id = fs::path(path).stem().string();
      corpus.docs.push_back(parse_annotated_xml(read_file(path), id));
    }
    save_corpus_file(corpus, in_out);
    std::cout << "wrote " << in_out << " (" << corpus.docs.size() << " letters)\n";
    return 0;
  }

  if (train->parsed()) {
    Corpus corpus = load_corpus_file(tr_input);
    if (tr_grid.empty()) {
      TrainingConfig cfg;
      cfg.seed = tr_seed;
      NativeCountModel model = train_native(corpus, cfg);
      model.save(tr_out);
      std::cout << "wrote " << tr_out << " (vocab " << model.vocab_size() << ")\n";
      return 0;
    }
    json grid_json = json::parse(read_file(tr_grid));
    std::vector<TrainingConfig> grid;
    for (const auto& entry : grid_json.at("grid"))
      grid.push_back(training_config_from_json(entry));
    SplitSpec split;
    split.fractions = {{"train", 0.8}, {"validation", 0.2}};
    split.seed = grid_json.value("split_seed", tr_seed);
    GridSearchResult result = grid_search(corpus, grid, split);
    result.model.save(tr_out);
    json report = json::array();
    for (std::size_t i = 0; i < result.report.size(); ++i)
      report.push_back({{"config", training_config_to_json(result.report[i].config)},
                        {"perplexity", result.report[i].perplexity},
                        {"selected", i == result.best_index}});
    std::string report_path = tr_report.empty() ? tr_out + ".report.json" : tr_report;
    write_file(report_path, json{{"grid", report}}.dump(2) + "\n");
    std::cout << "wrote " << tr_out << " (config " << result.best_index
              << " of " << grid.size() << " selected)\n";
    return 0;
  }

  if (mask->parsed()) {
    Corpus corpus = load_corpus_file(mk_input);
    DataFiles data = load_data_files();
    MaskPolicy policy = mk_policy.empty()
                            ? preset_by_name(mk_preset).policy
                            : policy_from_json(read_file(mk_policy));
    policy.seed = mk_seed;
    for (const auto& ad : corpus.docs) {
      auto phi = detect_phi(ad.doc, data.rules);
      auto med = tag_medical(ad.doc, data.gazetteer);
      auto pos = tag_pos(ad.doc, data.pos_lexicon);
      MaskPlan plan = build_mask_plan(ad.doc, phi, med, pos, policy);
      write_file(mk_out + "/" + ad.doc.id + ".plan.json",
                 mask_plan_to_json(plan) + "\n");
      write_file(mk_out + "/" + ad.doc.id + ".masked.txt",
                 apply_mask(ad.doc, plan).masked_text());
    }
    std::cout << "wrote " << corpus.docs.size() << " plans to " << mk_out << "\n";
    return 0;
  }

  if (fill_cmd->parsed()) {
    Corpus corpus = load_corpus_file(fl_input);
    NativeCountModel model = NativeCountModel::load(fl_model);
    FillConfig config = fl_config.empty()
                            ? preset_by_name(fl_preset).fill
                            : fill_config_from_json(read_file(fl_config));
    config.seed = fl_seed;
    for (const auto& ad : corpus.docs) {
      MaskPlan plan =
          mask_plan_from_json(read_file(fl_plans + "/" + ad.doc.id + ".plan.json"));
      SyntheticDocument sd = fill(apply_mask(ad.doc, plan), model, config);
      write_file(fl_out + "/" + ad.doc.id + ".synth.json",
                 synthetic_to_json(sd) + "\n");
    }
    std::cout << "wrote " << corpus.docs.size() << " letters to " << fl_out << "\n";
    return 0;
  }

  if (gen->parsed()) {
    run_generate(go);
    std::cout << "wrote " << go.out << "\n";
    return 0;
  }

  if (ev_res->parsed()) return run_eval_resemblance(er_input, er_synth, er_out);
  if (ev_priv->parsed()) return run_eval_privacy(ep_input, ep_synth, ep_out, ep_hipaa);

  if (ev_util->parsed()) {
    Corpus corpus = load_corpus_file(eu_input);
    DataFiles data = load_data_files();
    NativeCountModel model = NativeCountModel::load(eu_model);
    GenerationPipeline pipeline;
    pipeline.rules = &data.rules;
    pipeline.gazetteer = &data.gazetteer;
    pipeline.pos_lexicon = &data.pos_lexicon;
    pipeline.model = &model;
    Gazetteer extractor_gaz = load_gazetteer(
        default_data_dir() + "/disease_chemical.tsv", {"DISEASE", "CHEMICAL"});
    GazetteerTagger extractor(extractor_gaz);
    UtilityConfig config;
    config.seed = eu_seed;
    config.multiplier = eu_mult;
    config.epochs = eu_epochs;
    UtilityReport report = run_utility_experiment(
        corpus, pipeline, preset_by_name(eu_preset), extractor, config);
    write_file(eu_out, utility_report_to_json(report) + "\n");
    std::cout << "wrote " << eu_out << "\n";
    return 0;
  }

  if (replay->parsed()) {
    json manifest = json::parse(read_file(rp_manifest));
    if (manifest.value("command", "") != "generate")
      throw DataError("manifest does not describe a generate run");
    GenerateOptions opt;
    opt.input = manifest.at("input").get<std::string>();
    opt.out = rp_out;
    opt.preset = manifest.at("preset").get<std::string>();
    opt.backend = manifest.at("backend").get<std::string>();
    opt.endpoint = manifest.value("endpoint", "");
    opt.model_path = manifest.value("model", "");
    opt.seed = manifest.at("seed").get<std::uint64_t>();
    opt.multiplier = manifest.at("multiplier").get<std::size_t>();
    if (!opt.input.empty() && fnv1a_hex(read_file(opt.input)) !=
                                  manifest.value("input_hash", ""))
      throw DataError("replay: input file changed since the manifest was written");
    if (!opt.model_path.empty() && fnv1a_hex(read_file(opt.model_path)) !=
                                       manifest.value("model_hash", ""))
      throw DataError("replay: model file changed since the manifest was written");
    run_generate(opt);
    std::cout << "wrote " << rp_out << "\n";
    return 0;
  }

  return 1;
}

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const TransportError& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return 3;
  } catch (const ProtocolError& e) {
    std::cerr << "backend error: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
