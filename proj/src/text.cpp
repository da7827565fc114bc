#include "crossdom/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace crossdom {

namespace {

bool is_ascii_ws(char32_t cp) {
  return cp == U' ' || cp == U'\t' || cp == U'\n' || cp == U'\r' ||
         cp == U'\f' || cp == U'\v';
}

bool is_whitespace(char32_t cp) {
  return is_ascii_ws(cp) || cp == 0x00A0 || cp == 0x2028 || cp == 0x2029;
}

bool is_ascii_punct(char32_t cp) {
  return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
         (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
}

bool is_punct(char32_t cp) {
  if (is_ascii_punct(cp)) return true;
  switch (cp) {
    case 0x00A1:  // inverted exclamation
    case 0x00BF:  // inverted question
    case 0x00AB:  // «
    case 0x00BB:  // »
    case 0x2018:
    case 0x2019:
    case 0x201C:
    case 0x201D:
    case 0x2013:  // en dash
    case 0x2014:  // em dash
    case 0x2026:  // ellipsis
      return true;
    default:
      return false;
  }
}

bool is_word_char(char32_t cp) {
  return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') ||
         (cp >= U'0' && cp <= U'9') || cp == U'_';
}

char32_t lower_cp(char32_t cp) {
  if (cp >= U'A' && cp <= U'Z') return cp + 0x20;
  // Latin-1 uppercase block, skipping the multiplication sign.
  if (cp >= 0x00C0 && cp <= 0x00DE && cp != 0x00D7) return cp + 0x20;
  // Latin Extended-A pairs upper/lower alternately up to U+0137.
  if (cp >= 0x0100 && cp <= 0x0137 && (cp % 2) == 0) return cp + 1;
  return cp;
}

bool is_latin_letter(char32_t cp) {
  if (cp >= U'a' && cp <= U'z') return true;
  if (cp >= U'A' && cp <= U'Z') return true;
  if (cp >= 0x00C0 && cp <= 0x00FF && cp != 0x00D7 && cp != 0x00F7) return true;
  if (cp >= 0x0100 && cp <= 0x017F) return true;
  return false;
}

bool is_clean_char(char32_t cp) {
  return is_latin_letter(cp) || (cp >= U'0' && cp <= U'9') || cp == U'\'' ||
         cp == U'*';
}

std::string lowercase(std::string_view token) {
  auto cps = decode_utf8(token);
  for (auto& cp : cps) cp = lower_cp(cp);
  return encode_utf8(cps);
}

bool all_emoji(const std::vector<char32_t>& cps) {
  return !cps.empty() && std::all_of(cps.begin(), cps.end(), is_emoji);
}

bool matches_handle_or_tag(const std::vector<char32_t>& cps) {
  if (cps.size() < 2) return false;
  if (cps[0] != U'@' && cps[0] != U'#') return false;
  return std::all_of(cps.begin() + 1, cps.end(), is_word_char);
}

// Longest @handle / #tag prefix, or 0 when none.
std::size_t handle_prefix_len(const std::vector<char32_t>& cps, std::size_t at) {
  if (at >= cps.size() || (cps[at] != U'@' && cps[at] != U'#')) return 0;
  std::size_t end = at + 1;
  while (end < cps.size() && is_word_char(cps[end])) ++end;
  return end - at > 1 ? end - at : 0;
}

void emit(std::vector<std::string>& out, const std::vector<char32_t>& cps,
          std::size_t from, std::size_t to) {
  if (to <= from) return;
  out.push_back(encode_utf8({cps.begin() + static_cast<long>(from),
                             cps.begin() + static_cast<long>(to)}));
}

// One maximal non-emoji, non-whitespace run of codepoints.
void tokenize_segment(const std::vector<char32_t>& seg,
                      std::vector<std::string>& out) {
  if (seg.empty()) return;
  bool any_non_punct = std::any_of(seg.begin(), seg.end(),
                                   [](char32_t c) { return !is_punct(c); });
  if (!any_non_punct) {
    // Emoticon-style chunks (":)", "<3") survive as one token.
    emit(out, seg, 0, seg.size());
    return;
  }
  std::size_t begin = 0;
  std::size_t end = seg.size();
  // Trailing punctuation, queued so it comes out after the body.
  std::size_t tail = end;
  while (tail > begin && is_punct(seg[tail - 1])) --tail;
  // Leading punctuation, unless it opens a handle or hashtag.
  while (begin < tail && is_punct(seg[begin]) &&
         handle_prefix_len(seg, begin) == 0) {
    emit(out, seg, begin, begin + 1);
    ++begin;
  }
  if (begin < tail) {
    std::size_t hp = handle_prefix_len(seg, begin);
    if (hp > 0 && begin + hp < tail) {
      // "@user.name" -> "@user" plus the rest, re-processed.
      emit(out, seg, begin, begin + hp);
      std::vector<char32_t> rest(seg.begin() + static_cast<long>(begin + hp),
                                 seg.begin() + static_cast<long>(tail));
      tokenize_segment(rest, out);
    } else {
      emit(out, seg, begin, tail);
    }
  }
  for (std::size_t i = tail; i < end; ++i) emit(out, seg, i, i + 1);
}

bool looks_like_url(const std::string& lowered) {
  return lowered.rfind("http://", 0) == 0 || lowered.rfind("https://", 0) == 0 ||
         lowered.rfind("www.", 0) == 0;
}

bool is_sentinel(const std::string& token) {
  return token == kHashtagToken || token == kUserToken || token == kUrlToken ||
         token == kEmoteToken;
}

std::string clean_token(const std::string& token) {
  auto cps = decode_utf8(token);
  std::vector<char32_t> kept;
  kept.reserve(cps.size());
  for (char32_t cp : cps)
    if (is_clean_char(cp)) kept.push_back(cp);
  return encode_utf8(kept);
}

}  // namespace

std::vector<char32_t> decode_utf8(std::string_view text) {
  std::vector<char32_t> out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    char32_t cp = 0;
    std::size_t len = 1;
    if (c < 0x80) {
      cp = c;
    } else if ((c & 0xE0) == 0xC0) {
      cp = c & 0x1F;
      len = 2;
    } else if ((c & 0xF0) == 0xE0) {
      cp = c & 0x0F;
      len = 3;
    } else if ((c & 0xF8) == 0xF0) {
      cp = c & 0x07;
      len = 4;
    } else {
      // Stray continuation byte; pass through as U+FFFD.
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    if (i + len > text.size()) {
      out.push_back(0xFFFD);
      break;
    }
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      unsigned char cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string encode_utf8(const std::vector<char32_t>& codepoints) {
  std::string out;
  out.reserve(codepoints.size());
  for (char32_t cp : codepoints) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

bool is_emoji(char32_t cp) {
  return (cp >= 0x1F300 && cp <= 0x1F5FF) || (cp >= 0x1F600 && cp <= 0x1F64F) ||
         (cp >= 0x1F680 && cp <= 0x1F6FF) || (cp >= 0x2600 && cp <= 0x27BF);
}

NormalizationLevel normalization_level_from_string(std::string_view name) {
  if (name == "lower") return NormalizationLevel::Lower;
  if (name == "clean") return NormalizationLevel::Clean;
  if (name == "preproc") return NormalizationLevel::Preproc;
  throw std::invalid_argument("unknown normalization level: " +
                              std::string(name));
}

std::string to_string(NormalizationLevel level) {
  switch (level) {
    case NormalizationLevel::Lower:
      return "lower";
    case NormalizationLevel::Clean:
      return "clean";
    case NormalizationLevel::Preproc:
      return "preproc";
  }
  throw std::invalid_argument("unknown normalization level");
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  auto cps = decode_utf8(text);
  std::size_t i = 0;
  while (i < cps.size()) {
    if (is_whitespace(cps[i])) {
      ++i;
      continue;
    }
    // Chunk: maximal run without whitespace, sliced into emoji and
    // non-emoji segments.
    std::size_t chunk_end = i;
    while (chunk_end < cps.size() && !is_whitespace(cps[chunk_end]))
      ++chunk_end;
    std::size_t s = i;
    while (s < chunk_end) {
      bool emoji = is_emoji(cps[s]);
      std::size_t e = s;
      while (e < chunk_end && is_emoji(cps[e]) == emoji) ++e;
      if (emoji) {
        emit(out, cps, s, e);
      } else {
        std::vector<char32_t> seg(cps.begin() + static_cast<long>(s),
                                  cps.begin() + static_cast<long>(e));
        tokenize_segment(seg, out);
      }
      s = e;
    }
    i = chunk_end;
  }
  return out;
}

std::vector<std::string> normalize(const std::vector<std::string>& tokens,
                                   NormalizationLevel level) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) {
    if (level == NormalizationLevel::Preproc && is_sentinel(token)) {
      out.push_back(token);
      continue;
    }
    std::string lowered = lowercase(token);
    if (level == NormalizationLevel::Lower) {
      out.push_back(std::move(lowered));
      continue;
    }
    if (level == NormalizationLevel::Preproc) {
      auto cps = decode_utf8(lowered);
      if (all_emoji(cps)) {
        out.emplace_back(kEmoteToken);
        continue;
      }
      if (looks_like_url(lowered)) {
        out.emplace_back(kUrlToken);
        continue;
      }
      if (matches_handle_or_tag(cps)) {
        if (cps[0] == U'@') {
          out.emplace_back(kUserToken);
        } else {
          out.emplace_back(kHashtagToken);
          std::string word = clean_token(lowered.substr(1));
          if (!word.empty()) out.push_back(std::move(word));
        }
        continue;
      }
    }
    std::string cleaned = clean_token(lowered);
    if (!cleaned.empty()) out.push_back(std::move(cleaned));
  }
  return out;
}

std::vector<std::string> normalized_tokens(std::string_view text,
                                           NormalizationLevel level) {
  return normalize(tokenize(text), level);
}

std::size_t count_matches(const std::vector<std::string>& tokens,
                          const std::unordered_set<std::string>& lexicon) {
  if (lexicon.empty()) return 0;
  std::size_t n = 0;
  for (const auto& token : tokens)
    if (lexicon.count(lowercase(token))) ++n;
  return n;
}

}  // namespace crossdom
