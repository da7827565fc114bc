#include "crossdom/feature_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "crossdom/featurize.hpp"
#include "crossdom/report.hpp"

namespace crossdom {

namespace {

std::vector<std::string> split_unigrams(const std::string& gram) {
  std::vector<std::string> parts;
  std::istringstream in(gram);
  std::string part;
  while (in >> part) parts.push_back(part);
  return parts;
}

}  // namespace

std::vector<std::pair<std::string, double>> top_features(
    const LinearModel& model, const FeatureSpace& space, std::size_t k,
    RankCriterion criterion) {
  if (k < 1) throw std::invalid_argument("top_features requires k >= 1");
  auto pairs = coefficients(model, space);
  if (criterion == RankCriterion::Absolute) {
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
      double ma = std::fabs(a.second);
      double mb = std::fabs(b.second);
      if (ma != mb) return ma > mb;
      return a.first < b.first;
    });
  } else {
    pairs.erase(std::remove_if(pairs.begin(), pairs.end(),
                               [](const auto& p) { return p.second <= 0.0; }),
                pairs.end());
  }
  if (pairs.size() > k) pairs.resize(k);
  return pairs;
}

std::map<std::size_t, double> CoverageHistogram::percentages() const {
  std::map<std::size_t, double> out;
  if (k == 0) return out;
  for (const auto& [sets, count] : counts)
    out[sets] = 100.0 * static_cast<double>(count) / static_cast<double>(k);
  return out;
}

CoverageHistogram testset_coverage(const std::vector<std::string>& features,
                                   const std::vector<Corpus>& test_corpora,
                                   NgramRange range, NormalizationLevel level) {
  // Gram inventory per test corpus at the model's own settings.
  std::vector<std::unordered_set<std::string>> inventories;
  inventories.reserve(test_corpora.size());
  for (const auto& corpus : test_corpora) {
    std::unordered_set<std::string> grams;
    for (const auto& doc : corpus.documents)
      for (auto& gram : ngrams(normalized_tokens(doc.text, level), range))
        grams.insert(std::move(gram));
    inventories.push_back(std::move(grams));
  }
  CoverageHistogram histogram;
  histogram.k = features.size();
  for (const auto& feature : features) {
    std::size_t sets = 0;
    for (const auto& inventory : inventories)
      if (inventory.count(feature)) ++sets;
    histogram.counts[sets] += 1;
  }
  return histogram;
}

std::vector<FeatureStability> coefficient_stability(
    const std::vector<std::pair<const LinearModel*, const FeatureSpace*>>& models,
    const std::vector<std::string>& features) {
  if (models.size() < 2)
    throw std::invalid_argument("coefficient_stability needs >= 2 models");
  std::vector<FeatureStability> report;
  report.reserve(features.size());
  for (const auto& gram : features) {
    FeatureStability entry;
    entry.gram = gram;
    std::vector<double> coefs;
    for (const auto& [model, space] : models) {
      auto idx = space->index(gram);
      if (!idx) continue;
      coefs.push_back(model->weights.at(*idx));
    }
    entry.n_models = coefs.size();
    if (!coefs.empty()) {
      double sum = 0.0;
      for (double c : coefs) sum += c;
      double mean = sum / static_cast<double>(coefs.size());
      double var = 0.0;
      for (double c : coefs) var += (c - mean) * (c - mean);
      entry.mean = mean;
      entry.stddev = std::sqrt(var / static_cast<double>(coefs.size()));
    }
    report.push_back(std::move(entry));
  }
  return report;
}

double lexicon_share(const std::vector<std::string>& features,
                     const std::unordered_set<std::string>& lexicon) {
  if (features.empty())
    throw std::invalid_argument("lexicon_share on empty feature list");
  if (lexicon.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& feature : features) {
    for (const auto& unigram : split_unigrams(feature)) {
      if (lexicon.count(unigram)) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(features.size());
}

AnnotatedDocument annotate(const Document& doc, const LinearModel& model,
                           const FeatureSpace& space,
                           NormalizationLevel level) {
  AnnotatedDocument out;
  out.id = doc.id;
  out.gold = doc.label;
  out.predicted = predict(model, vectorize_binary(doc, space));

  for (const auto& raw : tokenize(doc.text)) {
    AnnotatedToken token;
    token.token = raw;
    for (const auto& norm : normalize({raw}, level)) {
      if (auto idx = space.index(norm)) {
        token.coefficient = model.weights.at(*idx);
        break;
      }
    }
    out.tokens.push_back(std::move(token));
  }

  double max_abs = 0.0;
  for (const auto& token : out.tokens)
    if (token.coefficient)
      max_abs = std::max(max_abs, std::fabs(*token.coefficient));
  for (auto& token : out.tokens) {
    if (!token.coefficient) continue;  // OOV stays at zero intensity
    token.intensity =
        max_abs > 0.0 ? std::fabs(*token.coefficient) / max_abs : 1.0;
  }
  return out;
}

nlohmann::json annotated_to_json(const AnnotatedDocument& doc) {
  nlohmann::json obj;
  obj["id"] = doc.id;
  obj["gold"] = doc.gold;
  obj["predicted"] = doc.predicted;
  obj["tokens"] = nlohmann::json::array();
  for (const auto& token : doc.tokens) {
    nlohmann::json t;
    t["token"] = token.token;
    t["coefficient"] =
        token.coefficient ? nlohmann::json(*token.coefficient) : nlohmann::json();
    t["intensity"] = token.intensity;
    obj["tokens"].push_back(std::move(t));
  }
  return obj;
}

std::string annotated_to_ansi(const AnnotatedDocument& doc) {
  std::ostringstream out;
  out << "gold=" << doc.gold << " pred=" << doc.predicted << " | ";
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const auto& token = doc.tokens[i];
    if (i > 0) out << ' ';
    if (!token.coefficient) {
      out << "\x1b[7m" << token.token << "\x1b[0m";  // inverse video for OOV
      continue;
    }
    // 256-color ramp: positive coefficients red, negative green.
    int bucket = static_cast<int>(std::lround(token.intensity * 4.0));
    int color = *token.coefficient > 0.0 ? 196 : 40;
    if (bucket == 0 || *token.coefficient == 0.0) {
      out << token.token;
    } else {
      out << "\x1b[38;5;" << color << 'm';
      if (bucket >= 3) out << "\x1b[1m";
      out << token.token << "\x1b[0m";
    }
  }
  out << '\n';
  return out.str();
}

std::string annotated_to_html(const AnnotatedDocument& doc) {
  auto escape = [](const std::string& text) {
    std::string out;
    for (char c : text) {
      switch (c) {
        case '&':
          out += "&amp;";
          break;
        case '<':
          out += "&lt;";
          break;
        case '>':
          out += "&gt;";
          break;
        case '"':
          out += "&quot;";
          break;
        default:
          out += c;
      }
    }
    return out;
  };
  std::ostringstream out;
  out << "<p class=\"annotated\" data-gold=\"" << doc.gold
      << "\" data-pred=\"" << doc.predicted << "\">";
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const auto& token = doc.tokens[i];
    if (i > 0) out << ' ';
    if (!token.coefficient) {
      out << "<span class=\"oov\">" << escape(token.token) << "</span>";
      continue;
    }
    const char* hue = *token.coefficient > 0.0 ? "0,100%" : "120,60%";
    int alpha = static_cast<int>(std::lround(token.intensity * 100.0));
    out << "<span style=\"background:hsla(" << hue << ",50%," << alpha
        << "%)\" data-coef=\"" << format_double(*token.coefficient) << "\">"
        << escape(token.token) << "</span>";
  }
  out << "</p>\n";
  return out.str();
}

}  // namespace crossdom
