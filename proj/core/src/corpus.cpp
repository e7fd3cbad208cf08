#include "synthrec/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "synthrec/errors.hpp"
#include "synthrec/rng.hpp"

namespace synthrec {

using nlohmann::json;

void align_span_to_tokens(const Document& doc, AnnotationSpan& span) {
  bool found = false;
  std::size_t first = 0, last = 0;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const Token& t = doc.tokens[i];
    if (t.end <= span.start || t.start >= span.end) continue;
    if (!found) first = i;
    last = i;
    found = true;
  }
  if (!found)
    throw DataError("annotation [" + std::to_string(span.start) + "," +
                    std::to_string(span.end) + ") covers no tokens in document " +
                    doc.id);
  span.token_first = first;
  span.token_last = last;
  if (doc.tokens[first].start != span.start || doc.tokens[last].end != span.end) {
    std::cerr << "warning: span [" << span.start << "," << span.end
              << ") in document " << doc.id
              << " is not token-aligned; expanded to covering tokens\n";
    span.start = doc.tokens[first].start;
    span.end = doc.tokens[last].end;
  }
}

namespace {

struct XmlCursor {
  const std::string& s;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos && i < s.size(); ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw DataError("XML parse error at line " + std::to_string(line) +
                    ", column " + std::to_string(col) + ": " + msg);
  }
};

std::string xml_unescape(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != '&') {
      out += raw[i];
      continue;
    }
    auto rest = raw.substr(i);
    if (rest.rfind("&amp;", 0) == 0) {
      out += '&';
      i += 4;
    } else if (rest.rfind("&lt;", 0) == 0) {
      out += '<';
      i += 3;
    } else if (rest.rfind("&gt;", 0) == 0) {
      out += '>';
      i += 3;
    } else if (rest.rfind("&quot;", 0) == 0) {
      out += '"';
      i += 5;
    } else if (rest.rfind("&apos;", 0) == 0) {
      out += '\'';
      i += 5;
    } else {
      out += raw[i];
    }
  }
  return out;
}

// Extracts the content of the first <TEXT>...</TEXT> element, honoring CDATA.
std::string extract_text_block(XmlCursor& cur) {
  std::size_t open = cur.s.find("<TEXT");
  if (open == std::string::npos) {
    cur.pos = cur.s.size();
    cur.fail("missing TEXT element");
  }
  std::size_t body = cur.s.find('>', open);
  if (body == std::string::npos) {
    cur.pos = open;
    cur.fail("unterminated TEXT start tag");
  }
  ++body;
  if (cur.s.compare(body, 9, "<![CDATA[") == 0) {
    std::size_t cend = cur.s.find("]]>", body + 9);
    if (cend == std::string::npos) {
      cur.pos = body;
      cur.fail("unterminated CDATA section");
    }
    return cur.s.substr(body + 9, cend - body - 9);
  }
  std::size_t close = cur.s.find("</TEXT>", body);
  if (close == std::string::npos) {
    cur.pos = body;
    cur.fail("missing </TEXT>");
  }
  return xml_unescape(std::string_view(cur.s).substr(body, close - body));
}

std::map<std::string, std::string> parse_attributes(XmlCursor& cur,
                                                    std::string_view tag_body) {
  std::map<std::string, std::string> attrs;
  std::size_t i = 0;
  while (i < tag_body.size()) {
    while (i < tag_body.size() && std::isspace(static_cast<unsigned char>(tag_body[i])))
      ++i;
    if (i >= tag_body.size()) break;
    std::size_t eq = tag_body.find('=', i);
    if (eq == std::string::npos) break;
    std::string key(tag_body.substr(i, eq - i));
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back())))
      key.pop_back();
    std::size_t q1 = tag_body.find('"', eq);
    if (q1 == std::string::npos) cur.fail("attribute " + key + " missing quote");
    std::size_t q2 = tag_body.find('"', q1 + 1);
    if (q2 == std::string::npos) cur.fail("attribute " + key + " unterminated");
    attrs[key] = xml_unescape(tag_body.substr(q1 + 1, q2 - q1 - 1));
    i = q2 + 1;
  }
  return attrs;
}

}  // namespace

AnnotatedDocument parse_annotated_xml(const std::string& xml,
                                      const std::string& doc_id) {
  XmlCursor cur{xml};
  std::string text = extract_text_block(cur);

  AnnotatedDocument out;
  out.doc = tokenize(text, doc_id);
  const std::size_t text_cp_len = codepoint_length(text);

  std::size_t tags_open = xml.find("<TAGS");
  if (tags_open == std::string::npos) return out;  // no annotations
  std::size_t tags_end = xml.find("</TAGS>", tags_open);
  if (tags_end == std::string::npos) tags_end = xml.size();

  std::size_t i = xml.find('>', tags_open);
  if (i == std::string::npos) {
    cur.pos = tags_open;
    cur.fail("unterminated TAGS start tag");
  }
  ++i;
  while (i < tags_end) {
    std::size_t open = xml.find('<', i);
    if (open == std::string::npos || open >= tags_end) break;
    std::size_t close = xml.find('>', open);
    if (close == std::string::npos) {
      cur.pos = open;
      cur.fail("unterminated tag");
    }
    std::string_view inner(xml.data() + open + 1, close - open - 1);
    i = close + 1;
    if (inner.empty() || inner[0] == '/' || inner[0] == '!' || inner[0] == '?')
      continue;
    if (!inner.empty() && inner.back() == '/') inner.remove_suffix(1);
    std::size_t name_end = 0;
    while (name_end < inner.size() &&
           !std::isspace(static_cast<unsigned char>(inner[name_end])))
      ++name_end;
    std::string element(inner.substr(0, name_end));
    cur.pos = open;
    auto attrs = parse_attributes(cur, inner.substr(name_end));

    AnnotationSpan span;
    span.ns = SpanNamespace::Phi;
    span.category = element;
    span.source = SpanSource::Gold;
    auto need = [&](const char* key) -> const std::string& {
      auto it = attrs.find(key);
      if (it == attrs.end())
        throw DataError("tag <" + element + "> in document " + doc_id +
                        " missing attribute " + key);
      return it->second;
    };
    try {
      span.start = std::stoul(need("start"));
      span.end = std::stoul(need("end"));
    } catch (const std::invalid_argument&) {
      throw DataError("tag <" + element + "> has non-numeric offsets");
    }
    if (auto it = attrs.find("TYPE"); it != attrs.end()) span.subtype = it->second;
    if (span.start >= span.end || span.end > text_cp_len)
      throw DataError("tag <" + element + "> offsets [" +
                      std::to_string(span.start) + "," + std::to_string(span.end) +
                      ") fall outside text of length " +
                      std::to_string(text_cp_len));
    if (auto it = attrs.find("text"); it != attrs.end()) {
      std::string actual = substr_codepoints(text, span.start, span.end);
      if (actual != it->second)
        throw DataError("tag <" + element + "> recorded text \"" + it->second +
                        "\" does not match span content \"" + actual + "\"");
    }
    align_span_to_tokens(out.doc, span);
    out.gold_phi.push_back(span);
  }
  return out;
}

namespace {

json span_to_json(const AnnotationSpan& s) {
  json j{{"category", s.category}, {"start", s.start}, {"end", s.end}};
  if (!s.subtype.empty()) j["subtype"] = s.subtype;
  return j;
}

AnnotationSpan span_from_json(const json& j, SpanNamespace ns) {
  AnnotationSpan s;
  s.ns = ns;
  s.source = SpanSource::Gold;
  s.category = j.at("category").get<std::string>();
  s.subtype = j.value("subtype", "");
  s.start = j.at("start").get<std::size_t>();
  s.end = j.at("end").get<std::size_t>();
  return s;
}

}  // namespace

std::string corpus_to_json(const Corpus& corpus) {
  json docs = json::array();
  for (const auto& ad : corpus.docs) {
    json phi = json::array(), med = json::array();
    for (const auto& s : ad.gold_phi) phi.push_back(span_to_json(s));
    for (const auto& s : ad.gold_med) med.push_back(span_to_json(s));
    docs.push_back({{"id", ad.doc.id},
                    {"text", ad.doc.text},
                    {"phi", phi},
                    {"med", med}});
  }
  return json{{"name", corpus.name}, {"docs", docs}}.dump(2);
}

Corpus corpus_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("corpus JSON parse error: ") + e.what());
  }
  Corpus corpus;
  corpus.name = j.value("name", "");
  std::set<std::string> seen_ids;
  for (const auto& dj : j.at("docs")) {
    AnnotatedDocument ad;
    std::string id = dj.at("id").get<std::string>();
    if (!seen_ids.insert(id).second)
      throw DataError("duplicate document id in corpus: " + id);
    ad.doc = tokenize(dj.at("text").get<std::string>(), id);
    for (const auto& sj : dj.value("phi", json::array())) {
      auto s = span_from_json(sj, SpanNamespace::Phi);
      align_span_to_tokens(ad.doc, s);
      ad.gold_phi.push_back(s);
    }
    for (const auto& sj : dj.value("med", json::array())) {
      auto s = span_from_json(sj, SpanNamespace::Med);
      align_span_to_tokens(ad.doc, s);
      ad.gold_med.push_back(s);
    }
    corpus.docs.push_back(std::move(ad));
  }
  return corpus;
}

Corpus load_corpus_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return corpus_from_json(ss.str());
}

void save_corpus_file(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write corpus file: " + path);
  out << corpus_to_json(corpus) << '\n';
}

std::map<std::string, Corpus> split_corpus(const Corpus& corpus,
                                           const SplitSpec& spec) {
  if (corpus.docs.empty()) throw DataError("split_corpus: empty corpus");
  double sum = 0;
  for (const auto& [label, f] : spec.fractions) sum += f;
  if (sum < 1.0 - 1e-9 || sum > 1.0 + 1e-9)
    throw DataError("split fractions must sum to 1");

  std::vector<std::size_t> order(corpus.docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  StreamKey key;
  key.mix("split").mix(spec.seed);
  Rng rng = key.rng();
  rng.shuffle(order);

  std::map<std::string, Corpus> out;
  std::size_t cursor = 0;
  for (std::size_t s = 0; s < spec.fractions.size(); ++s) {
    const auto& [label, frac] = spec.fractions[s];
    std::size_t take = (s + 1 == spec.fractions.size())
                           ? order.size() - cursor
                           : std::min(order.size() - cursor,
                                      round_half_up(frac * order.size()));
    Corpus part;
    part.name = corpus.name + ":" + label;
    for (std::size_t i = 0; i < take; ++i)
      part.docs.push_back(corpus.docs[order[cursor + i]]);
    cursor += take;
    out.emplace(label, std::move(part));
  }
  return out;
}

}  // namespace synthrec
