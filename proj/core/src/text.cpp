#include "synthrec/text.hpp"

#include <cctype>

#include "synthrec/errors.hpp"

namespace synthrec {
namespace {

enum class CharClass { Space, Letter, Digit, Punct };

bool is_ascii_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' ||
         c == U'\v';
}

CharClass classify(char32_t c) {
  if (is_ascii_space(c)) return CharClass::Space;
  if (c < 128) {
    if (std::isalpha(static_cast<int>(c))) return CharClass::Letter;
    if (std::isdigit(static_cast<int>(c))) return CharClass::Digit;
    return CharClass::Punct;
  }
  // Non-ASCII scalars are treated as letters.
  return CharClass::Letter;
}

// Decodes one UTF-8 sequence; malformed bytes fall back to Latin-1 so the
// tokenizer never rejects input.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
  unsigned char b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xe0) == 0xc0) {
    len = 2;
    cp = b0 & 0x1f;
  } else if ((b0 & 0xf0) == 0xe0) {
    len = 3;
    cp = b0 & 0x0f;
  } else if ((b0 & 0xf8) == 0xf0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return b0;
  }
  if (i + len > s.size()) {
    ++i;
    return b0;
  }
  for (int k = 1; k < len; ++k) {
    unsigned char bk = static_cast<unsigned char>(s[i + k]);
    if ((bk & 0xc0) != 0x80) {
      ++i;
      return b0;
    }
    cp = (cp << 6) | (bk & 0x3f);
  }
  i += len;
  return cp;
}

bool is_vowel(char c) {
  switch (std::tolower(static_cast<unsigned char>(c))) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
    case 'y':
      return true;
    default:
      return false;
  }
}

}  // namespace

std::size_t codepoint_length(std::string_view text) {
  std::size_t n = 0, i = 0;
  while (i < text.size()) {
    decode_utf8(text, i);
    ++n;
  }
  return n;
}

std::string substr_codepoints(std::string_view text, std::size_t start,
                              std::size_t end) {
  std::size_t cp = 0, i = 0, byte_start = text.size(), byte_end = text.size();
  while (i < text.size()) {
    if (cp == start) byte_start = i;
    if (cp == end) {
      byte_end = i;
      break;
    }
    decode_utf8(text, i);
    ++cp;
  }
  if (cp == start) byte_start = i;
  if (byte_start > byte_end) return "";
  return std::string(text.substr(byte_start, byte_end - byte_start));
}

Document tokenize(std::string_view text, std::string id) {
  Document doc;
  doc.id = std::move(id);
  doc.text = std::string(text);

  std::size_t i = 0;       // byte cursor
  std::size_t cp = 0;      // codepoint cursor
  Token current;
  bool in_token = false;
  CharClass prev = CharClass::Space;

  auto flush = [&](std::size_t byte_pos, std::size_t cp_pos) {
    if (!in_token) return;
    current.end = cp_pos;
    current.byte_end = byte_pos;
    doc.tokens.push_back(current);
    current = Token{};
    in_token = false;
  };

  while (i < text.size()) {
    std::size_t byte_pos = i;
    char32_t c = decode_utf8(text, i);
    CharClass cls = classify(c);
    std::string_view raw = text.substr(byte_pos, i - byte_pos);

    if (cls == CharClass::Space) {
      flush(byte_pos, cp);
      if (doc.tokens.empty())
        doc.leading_gap.append(raw);
      else
        doc.tokens.back().trailing_gap.append(raw);
    } else {
      if (in_token && cls != prev) flush(byte_pos, cp);
      if (!in_token) {
        in_token = true;
        current.start = cp;
        current.byte_start = byte_pos;
      }
      current.text.append(raw);
      prev = cls;
    }
    ++cp;
  }
  flush(text.size(), cp);
  return doc;
}

std::vector<SentenceSpan> split_sentences(const Document& doc) {
  std::vector<SentenceSpan> spans;
  if (doc.tokens.empty()) return spans;

  auto has_blank_line = [](const std::string& gap) {
    int breaks = 0;
    for (char c : gap)
      if (c == '\n') ++breaks;
    return breaks >= 2;
  };

  std::size_t first = 0;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const Token& t = doc.tokens[i];
    bool terminator = t.text == "." || t.text == "!" || t.text == "?";
    bool blank = has_blank_line(t.trailing_gap);
    if (terminator || blank || i + 1 == doc.tokens.size()) {
      spans.push_back({first, i});
      first = i + 1;
    }
  }
  return spans;
}

std::size_t count_syllables(std::string_view word) {
  bool has_letter = false;
  std::size_t groups = 0;
  bool in_group = false;
  char last_letter = 0;
  for (char c : word) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      has_letter = true;
      last_letter = c;
      if (is_vowel(c)) {
        if (!in_group) ++groups;
        in_group = true;
      } else {
        in_group = false;
      }
    } else {
      in_group = false;
    }
  }
  if (!has_letter) return 0;
  if (groups >= 2 && std::tolower(static_cast<unsigned char>(last_letter)) == 'e' &&
      !word.empty() &&
      std::tolower(static_cast<unsigned char>(word.back())) == 'e') {
    --groups;
  }
  return groups == 0 ? 1 : groups;
}

std::string render(const Document& doc,
                   const std::map<std::size_t, std::string>& replacements) {
  for (const auto& [idx, _] : replacements) {
    if (idx >= doc.tokens.size())
      throw DataError("render: replacement index " + std::to_string(idx) +
                      " out of range (document has " +
                      std::to_string(doc.tokens.size()) + " tokens)");
  }
  std::string out = doc.leading_gap;
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    auto it = replacements.find(i);
    out += (it != replacements.end()) ? it->second : doc.tokens[i].text;
    out += doc.tokens[i].trailing_gap;
  }
  return out;
}

}  // namespace synthrec
