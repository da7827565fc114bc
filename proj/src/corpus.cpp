#include "crossdom/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "crossdom/report.hpp"

namespace crossdom {

namespace {

long long round_half_away(double x) {
  return std::llround(x);
}

Document parse_document(const nlohmann::json& obj, std::size_t line_no) {
  auto fail = [&](const std::string& what) -> FormatError {
    return FormatError("line " + std::to_string(line_no) + ": " + what);
  };
  if (!obj.is_object()) throw fail("expected a JSON object");
  Document doc;
  for (const auto& [key, value] : obj.items()) {
    if (key == "id") {
      if (!value.is_string()) throw fail("id must be a string");
      doc.id = value.get<std::string>();
    } else if (key == "text") {
      if (!value.is_string()) throw fail("text must be a string");
      doc.text = value.get<std::string>();
    } else if (key == "label") {
      if (!value.is_number_integer())
        throw fail("label must be an integer 0 or 1");
      int label = value.get<int>();
      if (label != 0 && label != 1)
        throw fail("label must be 0 or 1, got " + std::to_string(label));
      doc.label = label;
    } else if (key == "profile_id") {
      if (!value.is_string()) throw fail("profile_id must be a string");
      doc.profile_id = value.get<std::string>();
    } else if (key == "fine_labels") {
      if (!value.is_array()) throw fail("fine_labels must be an array");
      std::vector<std::string> labels;
      for (const auto& item : value) {
        if (!item.is_string()) throw fail("fine_labels entries must be strings");
        labels.push_back(item.get<std::string>());
      }
      doc.fine_labels = std::move(labels);
    } else {
      doc.extra[key] = value;
    }
  }
  if (!obj.contains("id") || doc.id.empty()) throw fail("missing or empty id");
  if (!obj.contains("text")) throw fail("missing text");
  if (!obj.contains("label")) throw fail("missing label");
  return doc;
}

}  // namespace

std::size_t Corpus::positives() const {
  std::size_t n = 0;
  for (const auto& doc : documents) n += doc.label == 1 ? 1 : 0;
  return n;
}

Corpus load_corpus(const std::filesystem::path& path, const std::string& name) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus file: " + path.string());
  Corpus corpus;
  corpus.name = name;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw FormatError(path.string() + ": line " + std::to_string(line_no) +
                        ": invalid JSON: " + e.what());
    }
    Document doc = parse_document(obj, line_no);
    if (!seen.insert(doc.id).second)
      throw FormatError(path.string() + ": line " + std::to_string(line_no) +
                        ": duplicate id \"" + doc.id + "\"");
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write corpus file: " + path.string());
  for (const auto& doc : corpus.documents) {
    nlohmann::json obj;
    obj["id"] = doc.id;
    obj["text"] = doc.text;
    obj["label"] = doc.label;
    if (doc.profile_id) obj["profile_id"] = *doc.profile_id;
    if (doc.fine_labels) obj["fine_labels"] = *doc.fine_labels;
    for (const auto& [key, value] : doc.extra.items()) obj[key] = value;
    out << canonical_dump(obj) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::unordered_set<std::string> load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open lexicon file: " + path.string());
  std::unordered_set<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    entries.insert(line);
  }
  return entries;
}

SplitPair stratified_split(const Corpus& corpus, double test_fraction,
                           std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw std::invalid_argument("test_fraction must lie in (0,1), got " +
                                std::to_string(test_fraction));

  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < corpus.documents.size(); ++i)
    by_class[corpus.documents[i].label].push_back(i);

  long long want[2];
  for (int c = 0; c < 2; ++c)
    want[c] = round_half_away(static_cast<double>(by_class[c].size()) *
                              test_fraction);
  long long total_target = round_half_away(
      static_cast<double>(corpus.documents.size()) * test_fraction);
  long long diff = total_target - (want[0] + want[1]);
  // Adjust the larger class by at most one so the overall count matches.
  if (diff != 0) {
    int big = by_class[0].size() >= by_class[1].size() ? 0 : 1;
    want[big] += diff;
  }
  for (int c = 0; c < 2; ++c)
    want[c] = std::clamp<long long>(want[c], 0,
                                    static_cast<long long>(by_class[c].size()));

  std::mt19937_64 rng(seed);
  std::vector<bool> in_test(corpus.documents.size(), false);
  for (int c = 0; c < 2; ++c) {
    auto order = by_class[c];
    std::shuffle(order.begin(), order.end(), rng);
    for (long long k = 0; k < want[c]; ++k) in_test[order[static_cast<std::size_t>(k)]] = true;
  }

  SplitPair pair;
  pair.seed = seed;
  pair.train.name = corpus.name;
  pair.train.language_tag = corpus.language_tag;
  pair.test.name = corpus.name;
  pair.test.language_tag = corpus.language_tag;
  for (std::size_t i = 0; i < corpus.documents.size(); ++i)
    (in_test[i] ? pair.test : pair.train).documents.push_back(corpus.documents[i]);
  return pair;
}

Corpus merge_corpora(const std::vector<Corpus>& corpora,
                     const std::string& name) {
  if (corpora.empty())
    throw std::invalid_argument("merge_corpora: no corpora given");
  Corpus merged;
  merged.name = name;
  merged.language_tag = corpora.front().language_tag;
  for (const auto& corpus : corpora) {
    for (const auto& doc : corpus.documents) {
      Document copy = doc;
      copy.id = corpus.name + "/" + doc.id;
      merged.documents.push_back(std::move(copy));
    }
  }
  return merged;
}

Corpus aggregate_by_profile(const Corpus& corpus, const std::string& joiner) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const Document*>> groups;
  for (const auto& doc : corpus.documents) {
    if (!doc.profile_id)
      throw FormatError("document \"" + doc.id + "\" has no profile_id");
    auto [it, inserted] = groups.try_emplace(*doc.profile_id);
    if (inserted) order.push_back(*doc.profile_id);
    it->second.push_back(&doc);
  }
  Corpus out;
  out.name = corpus.name;
  out.language_tag = corpus.language_tag;
  for (const auto& profile : order) {
    const auto& members = groups[profile];
    Document doc;
    doc.id = profile;
    doc.profile_id = profile;
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i > 0) doc.text += joiner;
      doc.text += members[i]->text;
      doc.label |= members[i]->label;
    }
    out.documents.push_back(std::move(doc));
  }
  return out;
}

Corpus batch_contexts(const Corpus& corpus, std::size_t batch_size,
                      const std::string& joiner) {
  if (batch_size < 1)
    throw std::invalid_argument("batch_contexts: batch_size must be >= 1");
  std::vector<std::string> order;
  std::map<std::string, std::vector<const Document*>> groups;
  for (const auto& doc : corpus.documents) {
    if (!doc.profile_id)
      throw FormatError("document \"" + doc.id + "\" has no profile_id");
    auto [it, inserted] = groups.try_emplace(*doc.profile_id);
    if (inserted) order.push_back(*doc.profile_id);
    it->second.push_back(&doc);
  }
  Corpus out;
  out.name = corpus.name;
  out.language_tag = corpus.language_tag;
  for (const auto& profile : order) {
    const auto& members = groups[profile];
    for (std::size_t start = 0, batch = 0; start < members.size();
         start += batch_size, ++batch) {
      std::size_t end = std::min(start + batch_size, members.size());
      Document doc;
      doc.id = profile + "#" + std::to_string(batch);
      doc.profile_id = profile;
      for (std::size_t i = start; i < end; ++i) {
        if (i > start) doc.text += joiner;
        doc.text += members[i]->text;
        doc.label |= members[i]->label;
      }
      out.documents.push_back(std::move(doc));
    }
  }
  return out;
}

CorpusStats corpus_statistics(const Corpus& corpus,
                              const std::unordered_set<std::string>& swears,
                              const std::unordered_set<std::string>& emotes) {
  CorpusStats stats;
  std::unordered_set<std::string> types;
  std::vector<std::size_t> per_doc;
  per_doc.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    (doc.label == 1 ? stats.pos : stats.neg) += 1;
    auto tokens = normalized_tokens(doc.text, NormalizationLevel::Lower);
    per_doc.push_back(tokens.size());
    stats.tokens += tokens.size();
    stats.swears += count_matches(tokens, swears);
    for (const auto& token : tokens) {
      types.insert(token);
      if (emotes.count(token)) {
        ++stats.emotes;
      } else {
        for (char32_t cp : decode_utf8(token))
          if (is_emoji(cp)) ++stats.emotes;
      }
    }
  }
  stats.types = types.size();
  std::size_t n = corpus.documents.size();
  if (n > 0) {
    stats.avg_tok_per_msg = static_cast<double>(stats.tokens) / static_cast<double>(n);
    double var = 0.0;
    for (std::size_t count : per_doc) {
      double d = static_cast<double>(count) - stats.avg_tok_per_msg;
      var += d * d;
    }
    stats.std_tok_per_msg = std::sqrt(var / static_cast<double>(n));
  }
  return stats;
}

std::unordered_set<std::string> vocabulary(const Corpus& corpus) {
  std::unordered_set<std::string> vocab;
  for (const auto& doc : corpus.documents)
    for (auto& token : normalized_tokens(doc.text, NormalizationLevel::Lower))
      vocab.insert(std::move(token));
  return vocab;
}

double jaccard(const std::unordered_set<std::string>& a,
               const std::unordered_set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  std::size_t common = 0;
  for (const auto& token : small)
    if (large.count(token)) ++common;
  return static_cast<double>(common) /
         static_cast<double>(a.size() + b.size() - common);
}

}  // namespace crossdom
