#include "crossdom/featurize.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace crossdom {

namespace {

std::vector<const Document*> doc_pointers(const Corpus& corpus) {
  std::vector<const Document*> docs;
  docs.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) docs.push_back(&doc);
  return docs;
}

std::map<std::uint32_t, std::size_t> gram_counts(const Document& doc,
                                                 const FeatureSpace& space) {
  std::map<std::uint32_t, std::size_t> counts;
  auto tokens = normalized_tokens(doc.text, space.level);
  for (const auto& gram : ngrams(tokens, space.ngram_range))
    if (auto idx = space.index(gram)) counts[*idx] += 1;
  return counts;
}

}  // namespace

double SparseVector::l2_norm() const {
  double sq = 0.0;
  for (const auto& [idx, w] : items) sq += w * w;
  return std::sqrt(sq);
}

SparseVector dense_to_sparse(std::span<const double> values) {
  SparseVector vec;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] != 0.0)
      vec.items.emplace_back(static_cast<std::uint32_t>(i), values[i]);
  return vec;
}

std::vector<double> sparse_to_dense(const SparseVector& vec, std::size_t dim) {
  std::vector<double> dense(dim, 0.0);
  for (const auto& [idx, w] : vec.items) dense.at(idx) = w;
  return dense;
}

std::optional<std::uint32_t> FeatureSpace::index(const std::string& gram) const {
  auto it = index_of.find(gram);
  if (it == index_of.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> ngrams(const std::vector<std::string>& tokens,
                                NgramRange range) {
  std::vector<std::string> grams;
  for (int n = range.lo; n <= range.hi; ++n) {
    if (n < 1 || tokens.size() < static_cast<std::size_t>(n)) continue;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
      std::string gram = tokens[i];
      for (std::size_t k = 1; k < static_cast<std::size_t>(n); ++k) {
        gram += ' ';
        gram += tokens[i + k];
      }
      grams.push_back(std::move(gram));
    }
  }
  return grams;
}

FeatureSpace fit_vocabulary(const std::vector<const Document*>& docs,
                            NgramRange range, std::size_t min_df,
                            double max_df_ratio, NormalizationLevel level) {
  if (range.lo < 1 || range.lo > range.hi)
    throw std::invalid_argument("ngram range must satisfy 1 <= lo <= hi");
  if (min_df < 1) throw std::invalid_argument("min_df must be >= 1");
  if (!(max_df_ratio > 0.0 && max_df_ratio <= 1.0))
    throw std::invalid_argument("max_df_ratio must lie in (0,1]");

  std::map<std::string, std::size_t> df;
  for (const Document* doc : docs) {
    auto tokens = normalized_tokens(doc->text, level);
    auto grams = ngrams(tokens, range);
    std::sort(grams.begin(), grams.end());
    grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
    for (auto& gram : grams) df[std::move(gram)] += 1;
  }

  const double max_df = max_df_ratio * static_cast<double>(docs.size());
  FeatureSpace space;
  space.ngram_range = range;
  space.min_df = min_df;
  space.max_df_ratio = max_df_ratio;
  space.level = level;
  for (auto& [gram, count] : df) {
    if (count < min_df) continue;
    if (static_cast<double>(count) > max_df) continue;
    space.index_of.emplace(gram, static_cast<std::uint32_t>(space.gram_of.size()));
    space.gram_of.push_back(gram);  // df map is ordered, so indices are lexicographic
  }
  if (space.gram_of.empty())
    throw FormatError(
        "empty vocabulary after document-frequency filtering; relax min_df or "
        "max_df_ratio");
  return space;
}

FeatureSpace fit_vocabulary(const Corpus& corpus, NgramRange range,
                            std::size_t min_df, double max_df_ratio,
                            NormalizationLevel level) {
  return fit_vocabulary(doc_pointers(corpus), range, min_df, max_df_ratio,
                        level);
}

SparseVector vectorize_binary(const Document& doc, const FeatureSpace& space) {
  SparseVector vec;
  for (const auto& [idx, count] : gram_counts(doc, space))
    vec.items.emplace_back(idx, 1.0);
  return vec;
}

IdfTable fit_tfidf(const std::vector<const Document*>& docs,
                   const FeatureSpace& space) {
  std::vector<std::size_t> df(space.size(), 0);
  for (const Document* doc : docs)
    for (const auto& [idx, count] : gram_counts(*doc, space)) df[idx] += 1;
  IdfTable table;
  table.n_docs = docs.size();
  table.idf.resize(space.size());
  const double n = static_cast<double>(docs.size());
  for (std::size_t i = 0; i < df.size(); ++i)
    table.idf[i] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[i]))) + 1.0;
  return table;
}

IdfTable fit_tfidf(const Corpus& corpus, const FeatureSpace& space) {
  return fit_tfidf(doc_pointers(corpus), space);
}

double sublinear_tf(double tf) { return 1.0 + std::log(tf); }

SparseVector vectorize_tfidf(const Document& doc, const FeatureSpace& space,
                             const IdfTable& idf) {
  SparseVector vec;
  for (const auto& [idx, count] : gram_counts(doc, space))
    vec.items.emplace_back(idx, sublinear_tf(static_cast<double>(count)) *
                                    idf.idf.at(idx));
  double norm = vec.l2_norm();
  if (norm > 0.0)
    for (auto& [idx, w] : vec.items) w /= norm;
  return vec;
}

RatioVector nb_log_count_ratio(std::span<const SparseVector> vectors,
                               std::span<const int> labels, std::size_t dim,
                               double alpha) {
  if (vectors.size() != labels.size())
    throw std::invalid_argument("vectors and labels differ in length");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  bool has_pos = false;
  bool has_neg = false;
  for (int label : labels) (label == 1 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw std::invalid_argument(
        "nb_log_count_ratio requires both classes present");

  std::vector<double> p(dim, alpha);
  std::vector<double> q(dim, alpha);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    auto& target = labels[i] == 1 ? p : q;
    for (const auto& [idx, w] : vectors[i].items) target.at(idx) += w;
  }
  double p_norm = 0.0;
  double q_norm = 0.0;
  for (double v : p) p_norm += v;
  for (double v : q) q_norm += v;

  RatioVector ratios;
  ratios.alpha = alpha;
  ratios.r.resize(dim);
  for (std::size_t i = 0; i < dim; ++i)
    ratios.r[i] = std::log(p[i] / p_norm) - std::log(q[i] / q_norm);
  return ratios;
}

SparseVector apply_nbsvm_weighting(const SparseVector& vec,
                                   const RatioVector& ratios) {
  SparseVector out;
  out.items.reserve(vec.items.size());
  for (const auto& [idx, w] : vec.items) {
    double scaled = w * ratios.r.at(idx);
    if (scaled != 0.0) out.items.emplace_back(idx, scaled);
  }
  return out;
}

EmbeddingTable load_embedding_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open embedding file: " + path.string());
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string token;
    fields >> token;
    std::vector<double> values;
    std::string field;
    while (fields >> field) {
      try {
        std::size_t used = 0;
        double v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        values.push_back(v);
      } catch (const std::exception&) {
        throw FormatError(path.string() + ": line " + std::to_string(line_no) +
                          ": non-numeric value \"" + field + "\"");
      }
    }
    if (first_content_line && values.size() == 1) {
      // "<count> <dim>" header; both fields must be integers.
      double count_val = 0.0;
      std::size_t used = 0;
      try {
        count_val = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      bool header = used == token.size() &&
                    count_val == std::floor(count_val) &&
                    values[0] == std::floor(values[0]);
      first_content_line = false;
      if (header) continue;
    }
    first_content_line = false;
    if (values.empty())
      throw FormatError(path.string() + ": line " + std::to_string(line_no) +
                        ": no vector values");
    if (table.dimension == 0) {
      table.dimension = values.size();
    } else if (values.size() != table.dimension) {
      throw FormatError(path.string() + ": line " + std::to_string(line_no) +
                        ": expected " + std::to_string(table.dimension) +
                        " values, got " + std::to_string(values.size()));
    }
    table.vectors[token] = std::move(values);
  }
  return table;
}

std::vector<double> embed_average(const std::vector<std::string>& tokens,
                                  const EmbeddingTable& table) {
  std::vector<double> sum(table.dimension, 0.0);
  std::size_t hits = 0;
  for (const auto& token : tokens) {
    auto it = table.vectors.find(token);
    if (it == table.vectors.end()) continue;
    for (std::size_t i = 0; i < table.dimension; ++i) sum[i] += it->second[i];
    ++hits;
  }
  if (hits > 0)
    for (auto& v : sum) v /= static_cast<double>(hits);
  return sum;
}

nlohmann::json feature_space_to_json(const FeatureSpace& space) {
  nlohmann::json obj;
  obj["ngram_range"] = {space.ngram_range.lo, space.ngram_range.hi};
  obj["min_df"] = space.min_df;
  obj["max_df_ratio"] = space.max_df_ratio;
  obj["level"] = to_string(space.level);
  obj["grams"] = space.gram_of;
  return obj;
}

FeatureSpace feature_space_from_json(const nlohmann::json& obj) {
  FeatureSpace space;
  space.ngram_range.lo = obj.at("ngram_range").at(0).get<int>();
  space.ngram_range.hi = obj.at("ngram_range").at(1).get<int>();
  space.min_df = obj.at("min_df").get<std::size_t>();
  space.max_df_ratio = obj.at("max_df_ratio").get<double>();
  space.level = normalization_level_from_string(obj.at("level").get<std::string>());
  space.gram_of = obj.at("grams").get<std::vector<std::string>>();
  space.index_of.reserve(space.gram_of.size());
  for (std::size_t i = 0; i < space.gram_of.size(); ++i)
    space.index_of.emplace(space.gram_of[i], static_cast<std::uint32_t>(i));
  return space;
}

}  // namespace crossdom
