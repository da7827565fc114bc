#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace crossdom {

// Normalization levels, each a superset of the previous one:
//   Lower   - lowercase only
//   Clean   - lowercase + strip everything outside [letters digits ' *]
//   Preproc - Clean + rewrite #tag/@handle/URL/emoji tokens to sentinels
enum class NormalizationLevel { Lower, Clean, Preproc };

NormalizationLevel normalization_level_from_string(std::string_view name);
std::string to_string(NormalizationLevel level);

// Sentinel tokens emitted at Preproc level.
inline constexpr std::string_view kHashtagToken = "<hashtag>";
inline constexpr std::string_view kUserToken = "<user>";
inline constexpr std::string_view kUrlToken = "<url>";
inline constexpr std::string_view kEmoteToken = "<emote>";

// UTF-8 helpers shared by the tokenizer and corpus statistics.
std::vector<char32_t> decode_utf8(std::string_view text);
std::string encode_utf8(const std::vector<char32_t>& codepoints);
bool is_emoji(char32_t cp);

// Whitespace-delimited tokenization with three extra rules:
//  - leading/trailing punctuation codepoints split into their own tokens,
//    except for chunks that are punctuation throughout (":)" stays whole)
//  - contiguous emoji codepoints form one token
//  - @handle and #tag prefixes are kept intact as single tokens
// Concatenating the tokens of each whitespace chunk reproduces the chunk.
std::vector<std::string> tokenize(std::string_view text);

std::vector<std::string> normalize(const std::vector<std::string>& tokens,
                                   NormalizationLevel level);

// Convenience: tokenize + normalize.
std::vector<std::string> normalized_tokens(std::string_view text,
                                           NormalizationLevel level);

// Token occurrences (not unique tokens) whose lowercase form is in the
// lexicon. Lexicon entries are expected pre-lowercased.
std::size_t count_matches(const std::vector<std::string>& tokens,
                          const std::unordered_set<std::string>& lexicon);

}  // namespace crossdom
