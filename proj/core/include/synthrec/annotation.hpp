#pragma once

#include <cstddef>
#include <string>

namespace synthrec {

enum class SpanNamespace { Phi, Med, Pos };
enum class SpanSource { Detector, Gold, Tagger };

// A categorized span over a document, addressed both by character offsets
// (source of truth) and by the covering token range.
struct AnnotationSpan {
  SpanNamespace ns = SpanNamespace::Phi;
  std::string category;       // e.g. DATE, NAME, PROBLEM, NOUN
  std::string subtype;        // e.g. PATIENT, PHONE; empty when none
  std::size_t start = 0;      // codepoint offset, inclusive
  std::size_t end = 0;        // codepoint offset, exclusive
  std::size_t token_first = 0;
  std::size_t token_last = 0; // inclusive
  SpanSource source = SpanSource::Detector;
  std::string rule;           // detector rule name, when applicable
};

inline const char* to_string(SpanNamespace ns) {
  switch (ns) {
    case SpanNamespace::Phi: return "PHI";
    case SpanNamespace::Med: return "MED";
    case SpanNamespace::Pos: return "POS";
  }
  return "?";
}

}  // namespace synthrec
