#include "synthrec/resemblance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "synthrec/errors.hpp"
#include "synthrec/rng.hpp"

namespace synthrec {
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

std::map<std::vector<std::string>, std::size_t> ngram_counts(
    const std::vector<std::string>& tokens, std::size_t n) {
  std::map<std::vector<std::string>, std::size_t> counts;
  if (tokens.size() < n) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i)
    ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  return counts;
}

PrfScore ngram_rouge(const std::vector<std::string>& cand,
                     const std::vector<std::string>& ref, std::size_t n) {
  auto cc = ngram_counts(cand, n);
  auto rc = ngram_counts(ref, n);
  std::size_t cand_total = 0, ref_total = 0, clipped = 0;
  for (const auto& [g, c] : cc) {
    cand_total += c;
    auto it = rc.find(g);
    if (it != rc.end()) clipped += std::min(c, it->second);
  }
  for (const auto& [g, c] : rc) ref_total += c;
  if (cand_total == 0 && ref_total == 0) return make_prf(1.0, 1.0);
  double p = cand_total ? static_cast<double>(clipped) / cand_total : 0.0;
  double r = ref_total ? static_cast<double>(clipped) / ref_total : 0.0;
  return make_prf(p, r);
}

std::size_t lcs_length(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

PrfScore make_prf(double precision, double recall) {
  PrfScore s;
  s.precision = precision;
  s.recall = recall;
  s.f1 = (precision + recall) > 0.0
             ? 2.0 * precision * recall / (precision + recall)
             : 0.0;
  return s;
}

RougeScores rouge(const Document& candidate, const Document& reference) {
  auto cand = lowered_tokens(candidate);
  auto ref = lowered_tokens(reference);
  RougeScores out;
  out.r1 = ngram_rouge(cand, ref, 1);
  out.r2 = ngram_rouge(cand, ref, 2);
  if (cand.empty() && ref.empty()) {
    out.rl = make_prf(1.0, 1.0);
  } else if (cand.empty() || ref.empty()) {
    out.rl = make_prf(0.0, 0.0);
  } else {
    double lcs = static_cast<double>(lcs_length(cand, ref));
    out.rl = make_prf(lcs / cand.size(), lcs / ref.size());
  }
  return out;
}

std::vector<double> HashedProjectionProvider::embed(
    const std::string& token, const std::vector<std::string>&) const {
  StreamKey key;
  key.mix("embed").mix(token);
  Rng rng = key.rng();
  std::vector<double> v(dim_);
  double norm = 0.0;
  for (double& x : v) {
    // Box-Muller gaussian from the deterministic uniform stream.
    double u1 = std::max(rng.uniform01(), 1e-12);
    double u2 = rng.uniform01();
    x = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    norm += x * x;
  }
  norm = std::sqrt(norm);
  if (norm > 0)
    for (double& x : v) x /= norm;
  return v;
}

namespace {

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

PrfScore embed_score(const Document& candidate, const Document& reference,
                     const EmbeddingProvider& provider) {
  auto cand = lowered_tokens(candidate);
  auto ref = lowered_tokens(reference);
  if (cand.empty() && ref.empty()) return make_prf(1.0, 1.0);
  if (cand.empty() || ref.empty()) return make_prf(0.0, 0.0);

  std::map<std::string, std::vector<double>> cache;
  auto vec = [&](const std::string& tok,
                 const std::vector<std::string>& ctx) -> const std::vector<double>& {
    auto it = cache.find(tok);
    if (it == cache.end())
      it = cache.emplace(tok, provider.embed(tok, ctx)).first;
    return it->second;
  };

  auto side = [&](const std::vector<std::string>& from,
                  const std::vector<std::string>& to) {
    double sum = 0.0;
    for (const auto& ft : from) {
      double best = -1.0;
      for (const auto& tt : to) best = std::max(best, cosine(vec(ft, from), vec(tt, to)));
      sum += std::max(best, 0.0);
    }
    return sum / from.size();
  };
  return make_prf(side(cand, ref), side(ref, cand));
}

ReadabilityScores readability(const Document& doc) {
  auto sentences = split_sentences(doc);
  std::size_t words = 0, syllables = 0, polysyllables = 0;
  for (const auto& t : doc.tokens) {
    std::size_t syl = count_syllables(t.text);
    if (syl == 0) continue;  // no letters: not a word
    ++words;
    syllables += syl;
    if (syl >= 3) ++polysyllables;
  }
  if (words == 0 || sentences.empty())
    throw DataError("readability requires at least one word and one sentence");

  const double w = static_cast<double>(words);
  const double s = static_cast<double>(sentences.size());
  const double sy = static_cast<double>(syllables);
  ReadabilityScores out;
  out.fre = 206.835 - 1.015 * (w / s) - 84.6 * (sy / w);
  out.fkg = 0.39 * (w / s) + 11.8 * (sy / w) - 15.59;
  out.smog = 1.0430 * std::sqrt(static_cast<double>(polysyllables) * 30.0 / s) +
             3.1291;
  return out;
}

std::set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stopword file: " + path);
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (!line.empty()) out.insert(lowercase(line));
  }
  return out;
}

namespace {

std::vector<std::string> ranked_words(const Document& doc,
                                      const std::set<std::string>& stopwords) {
  std::map<std::string, std::size_t> freq;
  for (const auto& t : doc.tokens) {
    bool alpha = !t.text.empty() &&
                 std::all_of(t.text.begin(), t.text.end(), [](unsigned char c) {
                   return std::isalpha(c);
                 });
    if (!alpha) continue;
    std::string w = lowercase(t.text);
    if (stopwords.count(w)) continue;
    ++freq[w];
  }
  std::vector<std::pair<std::string, std::size_t>> items(freq.begin(), freq.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> out;
  out.reserve(items.size());
  for (auto& [w, _] : items) out.push_back(std::move(w));
  return out;
}

}  // namespace

std::map<std::size_t, double> topk_overlap(
    const Corpus& real, const std::vector<SyntheticDocument>& synth,
    const std::vector<std::size_t>& ks, const std::set<std::string>& stopwords) {
  std::map<std::string, const AnnotatedDocument*> by_id;
  for (const auto& ad : real.docs) by_id[ad.doc.id] = &ad;

  std::map<std::size_t, double> sums;
  for (std::size_t k : ks) sums[k] = 0.0;
  if (synth.empty()) return sums;

  for (const auto& sd : synth) {
    auto it = by_id.find(sd.source_id);
    if (it == by_id.end())
      throw DataError("topk_overlap: synthetic document has no source \"" +
                      sd.source_id + "\" in the real corpus");
    auto real_rank = ranked_words(it->second->doc, stopwords);
    auto synth_rank = ranked_words(tokenize(sd.text), stopwords);
    for (std::size_t k : ks) {
      std::set<std::string> a(real_rank.begin(),
                              real_rank.begin() + std::min(k, real_rank.size()));
      std::set<std::string> b(synth_rank.begin(),
                              synth_rank.begin() + std::min(k, synth_rank.size()));
      std::size_t overlap = 0;
      for (const auto& w : a)
        if (b.count(w)) ++overlap;
      sums[k] += static_cast<double>(overlap);
    }
  }
  for (auto& [k, v] : sums) v /= static_cast<double>(synth.size());
  return sums;
}

}  // namespace synthrec
