#include "crossdom/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "crossdom/cross_eval.hpp"
#include "crossdom/feature_analysis.hpp"
#include "crossdom/manifest.hpp"
#include "crossdom/report.hpp"

namespace crossdom {

namespace {

namespace fs = std::filesystem;

std::string corpus_name_from_path(const std::string& path) {
  return fs::path(path).stem().string();
}

std::size_t default_jobs() {
  if (const char* env = std::getenv("CROSSDOM_JOBS")) {
    char* end = nullptr;
    unsigned long value = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && value >= 1) return value;
  }
  return 1;
}

class StepTimer {
 public:
  explicit StepTimer(RunManifest& manifest) : manifest_(manifest) {}
  template <typename Fn>
  auto step(const std::string& name, Fn&& fn) {
    auto start = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record(name, start);
    } else {
      auto result = fn();
      record(name, start);
      return result;
    }
  }

 private:
  void record(const std::string& name,
              std::chrono::steady_clock::time_point start) {
    double seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    manifest_.step_seconds.emplace_back(name, seconds);
  }
  RunManifest& manifest_;
};

void write_artifact(RunManifest& manifest, const fs::path& out_dir,
                    const std::string& name, const std::string& content) {
  fs::create_directories(out_dir);
  write_text_file((out_dir / name).string(), content);
  manifest.artifacts.push_back(name);
}

void finish_manifest(RunManifest& manifest, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  write_text_file((out_dir / "manifest.json").string(),
                  canonical_dump(manifest.to_json()) + "\n");
}

nlohmann::json report_header(const RunManifest& manifest) {
  nlohmann::json obj;
  obj["run_id"] = manifest.run_id();
  obj["manifest"] = "manifest.json";
  obj["version"] = manifest.version;
  return obj;
}

struct ContextMode {
  enum Kind { None, Profile, Batch } kind = None;
  std::size_t batch_size = 5;
};

ContextMode parse_context(const std::string& text) {
  ContextMode mode;
  if (text.empty()) return mode;
  if (text == "profile") {
    mode.kind = ContextMode::Profile;
    return mode;
  }
  if (text.rfind("batch:", 0) == 0) {
    mode.kind = ContextMode::Batch;
    mode.batch_size = std::stoul(text.substr(6));
    if (mode.batch_size < 1)
      throw std::invalid_argument("batch size must be >= 1");
    return mode;
  }
  throw std::invalid_argument("unknown context mode: " + text +
                              " (expected profile or batch:<n>)");
}

Corpus apply_context(const Corpus& corpus, const ContextMode& mode) {
  switch (mode.kind) {
    case ContextMode::None:
      return corpus;
    case ContextMode::Profile:
      return aggregate_by_profile(corpus);
    case ContextMode::Batch:
      return batch_contexts(corpus, mode.batch_size);
  }
  return corpus;
}

// --- stats ----------------------------------------------------------------

int cmd_stats(const std::vector<std::string>& corpus_paths,
              const std::string& swears_path, const std::string& emotes_path,
              const std::string& out_dir_str) {
  RunManifest manifest;
  manifest.command = "stats";
  manifest.config["swears"] = swears_path;
  manifest.config["emotes"] = emotes_path;
  StepTimer timer(manifest);
  fs::path out_dir(out_dir_str);

  std::unordered_set<std::string> swears;
  std::unordered_set<std::string> emotes;
  if (!swears_path.empty()) {
    swears = load_lexicon(swears_path);
    manifest.corpus_checksums.emplace_back(swears_path,
                                           file_checksum(swears_path));
  }
  if (!emotes_path.empty()) {
    emotes = load_lexicon(emotes_path);
    manifest.corpus_checksums.emplace_back(emotes_path,
                                           file_checksum(emotes_path));
  }

  std::ostringstream tsv;
  std::ostringstream md;
  tsv << "corpus\tpos\tneg\ttypes\ttokens\tavg_tok_per_msg\tstd_tok_per_msg"
         "\temotes\tswears\n";
  md << "| Corpus | Pos | Neg | Types | Tokens | Avg Tok/Msg | σ | Emotes | "
        "Swears |\n";
  md << "|---|---|---|---|---|---|---|---|---|\n";
  nlohmann::json report;
  report["corpora"] = nlohmann::json::object();
  for (const auto& path : corpus_paths) {
    std::string name = corpus_name_from_path(path);
    manifest.corpus_checksums.emplace_back(path, file_checksum(path));
    Corpus corpus = timer.step("load/" + name,
                               [&] { return load_corpus(path, name); });
    CorpusStats stats = timer.step("stats/" + name, [&] {
      return corpus_statistics(corpus, swears, emotes);
    });
    tsv << name << '\t' << stats.pos << '\t' << stats.neg << '\t'
        << stats.types << '\t' << stats.tokens << '\t'
        << format_double(stats.avg_tok_per_msg) << '\t'
        << format_double(stats.std_tok_per_msg) << '\t' << stats.emotes
        << '\t' << stats.swears << '\n';
    md << "| " << name << " | " << stats.pos << " | " << stats.neg << " | "
       << stats.types << " | " << stats.tokens << " | "
       << format_score(stats.avg_tok_per_msg) << " | "
       << format_score(stats.std_tok_per_msg) << " | " << stats.emotes
       << " | " << stats.swears << " |\n";
    nlohmann::json entry;
    entry["pos"] = stats.pos;
    entry["neg"] = stats.neg;
    entry["types"] = stats.types;
    entry["tokens"] = stats.tokens;
    entry["avg_tok_per_msg"] = stats.avg_tok_per_msg;
    entry["std_tok_per_msg"] = stats.std_tok_per_msg;
    entry["emotes"] = stats.emotes;
    entry["swears"] = stats.swears;
    report["corpora"][name] = std::move(entry);
  }

  nlohmann::json header = report_header(manifest);
  for (auto& [key, value] : header.items()) report[key] = value;
  write_artifact(manifest, out_dir, "stats.tsv", tsv.str());
  write_artifact(manifest, out_dir, "stats.md", md.str());
  write_artifact(manifest, out_dir, "stats.json",
                 canonical_dump(report) + "\n");
  finish_manifest(manifest, out_dir);
  std::cout << tsv.str();
  return 0;
}

// --- jaccard ---------------------------------------------------------------

int cmd_jaccard(const std::vector<std::string>& corpus_paths,
                std::uint64_t seed, double test_fraction,
                const std::string& out_dir_str) {
  if (corpus_paths.size() < 2)
    throw std::invalid_argument("jaccard needs at least 2 corpora");
  RunManifest manifest;
  manifest.command = "jaccard";
  manifest.master_seed = seed;
  manifest.config["test_fraction"] = test_fraction;
  StepTimer timer(manifest);
  fs::path out_dir(out_dir_str);

  std::vector<std::string> names;
  std::vector<std::unordered_set<std::string>> train_vocab;
  std::vector<std::unordered_set<std::string>> test_vocab;
  for (std::size_t i = 0; i < corpus_paths.size(); ++i) {
    const auto& path = corpus_paths[i];
    std::string name = corpus_name_from_path(path);
    manifest.corpus_checksums.emplace_back(path, file_checksum(path));
    timer.step("split+vocab/" + name, [&] {
      Corpus corpus = load_corpus(path, name);
      auto split = stratified_split(corpus, test_fraction,
                                    derive_seed(seed, "split/" + name, 0));
      names.push_back(name);
      train_vocab.push_back(vocabulary(split.train));
      test_vocab.push_back(vocabulary(split.test));
    });
  }

  std::ostringstream tsv;
  std::ostringstream heatmap;
  tsv << "train";
  for (const auto& name : names) tsv << '\t' << name;
  tsv << '\n';
  heatmap << "# x=test y=train value=jaccard\n";
  nlohmann::json report = report_header(manifest);
  report["seed"] = seed;
  report["test_fraction"] = test_fraction;
  report["corpora"] = names;
  report["matrix"] = nlohmann::json::object();
  for (std::size_t y = 0; y < names.size(); ++y) {
    tsv << names[y];
    for (std::size_t x = 0; x < names.size(); ++x) {
      double value = jaccard(train_vocab[y], test_vocab[x]);
      tsv << '\t' << format_score(value);
      heatmap << x << ' ' << y << ' ' << format_double(value) << '\n';
      report["matrix"][names[y]][names[x]] = value;
    }
    tsv << '\n';
    heatmap << '\n';
  }

  write_artifact(manifest, out_dir, "jaccard.tsv", tsv.str());
  write_artifact(manifest, out_dir, "jaccard_heatmap.dat", heatmap.str());
  write_artifact(manifest, out_dir, "jaccard.json",
                 canonical_dump(report) + "\n");
  finish_manifest(manifest, out_dir);
  std::cout << tsv.str();
  return 0;
}

// --- matrix ----------------------------------------------------------------

int cmd_matrix(const std::vector<std::string>& corpus_paths,
               const std::string& grid_path, const std::string& representation,
               bool merged, const std::string& merged_id,
               const std::vector<std::string>& exclude_from_avg,
               const std::string& context, std::uint64_t seed,
               double test_fraction, std::size_t inner_k, std::size_t outer_k,
               std::size_t jobs, double tolerance, int max_epochs,
               const std::string& out_dir_str) {
  RunManifest manifest;
  manifest.command = "matrix";
  manifest.master_seed = seed;
  StepTimer timer(manifest);
  fs::path out_dir(out_dir_str);

  // Grid file first, then flag overrides.
  GridSpec grid;
  std::string embedding_path;
  if (!grid_path.empty()) {
    manifest.corpus_checksums.emplace_back(grid_path, file_checksum(grid_path));
    grid = grid_from_json(nlohmann::json::parse(read_text_file(grid_path)));
    embedding_path = grid.embedding_path;
  }
  if (!representation.empty()) {
    std::string kind = representation;
    auto colon = representation.find(':');
    if (colon != std::string::npos) {
      kind = representation.substr(0, colon);
      embedding_path = representation.substr(colon + 1);
    }
    Representation repr = representation_from_string(kind);
    if (grid_path.empty()) {
      switch (repr) {
        case Representation::BinaryBow:
          grid = default_bow_grid();
          break;
        case Representation::Nbsvm:
          grid = default_nbsvm_grid();
          break;
        case Representation::Embedding:
          grid = default_embedding_grid(embedding_path);
          break;
      }
    } else {
      grid.representation = repr;
      grid.embedding_path = embedding_path;
    }
  } else if (grid_path.empty()) {
    grid = default_bow_grid();
  }

  ContextMode context_mode = parse_context(context);

  MatrixOptions options;
  options.grid = grid;
  if (merged) options.merged_id = merged_id;
  options.exclude_from_avg.insert(exclude_from_avg.begin(),
                                  exclude_from_avg.end());
  options.inner_k = inner_k;
  options.outer_k = outer_k;
  options.seed = seed;
  options.jobs = jobs;
  options.fit.tolerance = tolerance;
  options.fit.max_epochs = max_epochs;
  if (grid.representation == Representation::Embedding) {
    if (grid.embedding_path.empty())
      throw std::invalid_argument(
          "embedding representation requires embedding:<path>");
    manifest.corpus_checksums.emplace_back(grid.embedding_path,
                                           file_checksum(grid.embedding_path));
    options.embeddings = std::make_shared<EmbeddingTable>(
        load_embedding_table(grid.embedding_path));
  }

  manifest.config["grid"] = grid_to_json(grid);
  manifest.config["merged"] = merged;
  manifest.config["merged_id"] = merged_id;
  manifest.config["exclude_from_avg"] = exclude_from_avg;
  manifest.config["context"] = context;
  manifest.config["test_fraction"] = test_fraction;
  manifest.config["inner_k"] = inner_k;
  manifest.config["outer_k"] = outer_k;
  manifest.config["tolerance"] = tolerance;
  manifest.config["max_epochs"] = max_epochs;

  std::vector<SplitPair> splits;
  for (std::size_t i = 0; i < corpus_paths.size(); ++i) {
    const auto& path = corpus_paths[i];
    std::string name = corpus_name_from_path(path);
    manifest.corpus_checksums.emplace_back(path, file_checksum(path));
    Corpus corpus = timer.step("load/" + name,
                               [&] { return load_corpus(path, name); });
    Corpus scoped = apply_context(corpus, context_mode);
    splits.push_back(stratified_split(scoped, test_fraction,
                                      derive_seed(seed, "split/" + name, 0)));
  }

  MatrixResult result =
      timer.step("matrix", [&] { return run_matrix(splits, options); });

  nlohmann::json report = report_header(manifest);
  nlohmann::json matrix_json = matrix_to_json(result.matrix);
  for (auto& [key, value] : matrix_json.items()) report[key] = value;

  write_artifact(manifest, out_dir, "matrix.tsv",
                 matrix_to_tsv(result.matrix));
  write_artifact(manifest, out_dir, "matrix_heatmap.dat",
                 matrix_to_heatmap(result.matrix));
  write_artifact(manifest, out_dir, "matrix.json",
                 canonical_dump(report) + "\n");
  fs::create_directories(out_dir / "models");
  for (const auto& [train_id, pipeline] : result.pipelines) {
    std::string name = "models/" + train_id + ".json";
    write_text_file((out_dir / name).string(),
                    canonical_dump(pipeline_to_json(pipeline)) + "\n");
    manifest.artifacts.push_back(name);
  }
  finish_manifest(manifest, out_dir);
  std::cout << matrix_to_tsv(result.matrix);
  return 0;
}

// --- analyze ---------------------------------------------------------------

int cmd_analyze(const std::vector<std::string>& model_paths,
                const std::vector<std::string>& corpus_paths, std::size_t top_k,
                const std::string& criterion_name,
                const std::string& lexicon_path, const std::string& pool,
                std::size_t annotate_count, const std::string& out_dir_str) {
  if (model_paths.empty())
    throw std::invalid_argument("analyze needs at least one --model");
  if (corpus_paths.empty())
    throw std::invalid_argument("analyze needs at least one test corpus");
  RunManifest manifest;
  manifest.command = "analyze";
  manifest.config["top_k"] = top_k;
  manifest.config["criterion"] = criterion_name;
  manifest.config["pool"] = pool;
  manifest.config["annotate"] = annotate_count;
  manifest.config["lexicon"] = lexicon_path;
  StepTimer timer(manifest);
  fs::path out_dir(out_dir_str);

  RankCriterion criterion = criterion_name == "positive"
                                ? RankCriterion::Positive
                                : RankCriterion::Absolute;
  if (criterion_name != "positive" && criterion_name != "absolute")
    throw std::invalid_argument("criterion must be positive or absolute");
  if (pool != "test" && pool != "all")
    throw std::invalid_argument("pool must be test or all");

  std::unordered_set<std::string> lexicon;
  if (!lexicon_path.empty()) {
    lexicon = load_lexicon(lexicon_path);
    manifest.corpus_checksums.emplace_back(lexicon_path,
                                           file_checksum(lexicon_path));
  }

  std::vector<TrainedPipeline> pipelines;
  std::vector<std::string> model_names;
  for (const auto& path : model_paths) {
    manifest.corpus_checksums.emplace_back(path, file_checksum(path));
    pipelines.push_back(
        pipeline_from_json(nlohmann::json::parse(read_text_file(path))));
    if (pipelines.back().config.representation == Representation::Embedding)
      throw std::invalid_argument(
          "analyze works on gram-based models; embedding models have no "
          "per-feature coefficients");
    model_names.push_back(corpus_name_from_path(path));
  }

  std::vector<Corpus> test_corpora;
  for (const auto& path : corpus_paths) {
    manifest.corpus_checksums.emplace_back(path, file_checksum(path));
    test_corpora.push_back(timer.step(
        "load/" + corpus_name_from_path(path),
        [&] { return load_corpus(path, corpus_name_from_path(path)); }));
  }

  nlohmann::json report = report_header(manifest);
  report["models"] = nlohmann::json::object();
  std::ostringstream top_tsv;
  std::ostringstream coverage_tsv;
  top_tsv << "model\trank\tgram\tcoefficient\n";
  coverage_tsv << "model\ttest_sets\tfeatures\tpercent\n";

  // Per model: top-k grams, their test-set coverage, and the lexicon share
  // of those that occur in some test set.
  std::vector<std::vector<std::string>> test_occurring_per_model;
  for (std::size_t m = 0; m < pipelines.size(); ++m) {
    const auto& pipeline = pipelines[m];
    auto top = top_features(pipeline.model, pipeline.space, top_k, criterion);
    std::vector<std::string> grams;
    grams.reserve(top.size());
    for (const auto& [gram, coef] : top) grams.push_back(gram);
    auto histogram =
        testset_coverage(grams, test_corpora, pipeline.config.ngram_range,
                         pipeline.config.level);

    std::vector<std::string> test_occurring;
    {
      // Recheck each gram against the coverage inventories via a 1-feature
      // histogram would be wasteful; recompute presence directly.
      std::vector<std::unordered_set<std::string>> inventories;
      for (const auto& corpus : test_corpora) {
        std::unordered_set<std::string> inventory;
        for (const auto& doc : corpus.documents)
          for (auto& gram :
               ngrams(normalized_tokens(doc.text, pipeline.config.level),
                      pipeline.config.ngram_range))
            inventory.insert(std::move(gram));
        inventories.push_back(std::move(inventory));
      }
      for (const auto& gram : grams)
        for (const auto& inventory : inventories)
          if (inventory.count(gram)) {
            test_occurring.push_back(gram);
            break;
          }
    }
    test_occurring_per_model.push_back(test_occurring);

    nlohmann::json entry;
    entry["top_features"] = nlohmann::json::array();
    for (std::size_t rank = 0; rank < top.size(); ++rank) {
      entry["top_features"].push_back(
          {{"gram", top[rank].first}, {"coefficient", top[rank].second}});
      top_tsv << model_names[m] << '\t' << rank + 1 << '\t' << top[rank].first
              << '\t' << format_double(top[rank].second) << '\n';
    }
    entry["coverage"] = nlohmann::json::object();
    for (const auto& [sets, count] : histogram.counts) {
      entry["coverage"][std::to_string(sets)] = count;
      coverage_tsv << model_names[m] << '\t' << sets << '\t' << count << '\t'
                   << format_double(histogram.percentages().at(sets)) << '\n';
    }
    if (!lexicon.empty() && !test_occurring.empty())
      entry["lexicon_share"] = lexicon_share(test_occurring, lexicon);
    report["models"][model_names[m]] = std::move(entry);
  }

  // Stability across models, over test-occurring features (default) or the
  // union of all top features.
  if (pipelines.size() >= 2) {
    std::vector<std::pair<const LinearModel*, const FeatureSpace*>> refs;
    for (const auto& pipeline : pipelines)
      refs.emplace_back(&pipeline.model, &pipeline.space);
    std::vector<std::string> stability_pool;
    {
      std::unordered_set<std::string> seen;
      for (std::size_t m = 0; m < pipelines.size(); ++m) {
        const auto* source = &test_occurring_per_model[m];
        std::vector<std::string> all;
        if (pool == "all") {
          auto top =
              top_features(pipelines[m].model, pipelines[m].space, top_k,
                           criterion);
          for (const auto& [gram, coef] : top) all.push_back(gram);
          source = &all;
        }
        for (const auto& gram : *source)
          if (seen.insert(gram).second) stability_pool.push_back(gram);
      }
      std::sort(stability_pool.begin(), stability_pool.end());
    }
    if (!stability_pool.empty()) {
      auto stability = coefficient_stability(refs, stability_pool);
      std::sort(stability.begin(), stability.end(),
                [](const FeatureStability& a, const FeatureStability& b) {
                  double ma = a.mean.value_or(-1e300);
                  double mb = b.mean.value_or(-1e300);
                  if (ma != mb) return ma > mb;
                  return a.gram < b.gram;
                });
      std::ostringstream stability_tsv;
      stability_tsv << "gram\tmean\tstd\tmodels\n";
      report["stability"] = nlohmann::json::array();
      for (const auto& entry : stability) {
        nlohmann::json item;
        item["gram"] = entry.gram;
        item["mean"] = entry.mean ? nlohmann::json(*entry.mean) : nlohmann::json();
        item["std"] =
            entry.stddev ? nlohmann::json(*entry.stddev) : nlohmann::json();
        item["models"] = entry.n_models;
        report["stability"].push_back(std::move(item));
        stability_tsv << entry.gram << '\t'
                      << (entry.mean ? format_double(*entry.mean) : "—") << '\t'
                      << (entry.stddev ? format_double(*entry.stddev) : "—")
                      << '\t' << entry.n_models << '\n';
      }
      write_artifact(manifest, out_dir, "stability.tsv", stability_tsv.str());
    }
  }

  // Annotation samples: leading documents of the first corpus, first model.
  std::ostringstream html;
  report["annotations"] = nlohmann::json::array();
  const auto& annotate_corpus = test_corpora.front();
  const auto& annotate_pipeline = pipelines.front();
  std::size_t n_samples =
      std::min<std::size_t>(annotate_count, annotate_corpus.documents.size());
  for (std::size_t i = 0; i < n_samples; ++i) {
    auto annotated = annotate(annotate_corpus.documents[i],
                              annotate_pipeline.model, annotate_pipeline.space,
                              annotate_pipeline.config.level);
    // Per-token coefficients stay a unigram view; the label goes through
    // the pipeline's own featurization (matters for nbsvm models).
    annotated.predicted =
        annotate_pipeline.predict_label(annotate_corpus.documents[i]);
    report["annotations"].push_back(annotated_to_json(annotated));
    html << annotated_to_html(annotated);
    std::cout << annotated_to_ansi(annotated);
  }

  write_artifact(manifest, out_dir, "top_features.tsv", top_tsv.str());
  write_artifact(manifest, out_dir, "coverage.tsv", coverage_tsv.str());
  write_artifact(manifest, out_dir, "annotations.html", html.str());
  write_artifact(manifest, out_dir, "analysis.json",
                 canonical_dump(report) + "\n");
  finish_manifest(manifest, out_dir);
  return 0;
}

// --- aggregate / report ------------------------------------------------

int cmd_aggregate(const std::string& corpus_path, const std::string& mode,
                  const std::string& output_path) {
  ContextMode context = parse_context(mode);
  if (context.kind == ContextMode::None)
    throw std::invalid_argument("aggregate requires --mode profile|batch:<n>");
  Corpus corpus = load_corpus(corpus_path, corpus_name_from_path(corpus_path));
  Corpus scoped = apply_context(corpus, context);
  save_corpus(scoped, output_path);
  std::cout << scoped.documents.size() << " documents -> " << output_path
            << "\n";
  return 0;
}

int cmd_report(const std::string& json_path, const std::string& format) {
  auto obj = nlohmann::json::parse(read_text_file(json_path));
  if (format == "tsv") {
    std::cout << matrix_to_tsv(matrix_from_json(obj));
  } else if (format == "heatmap") {
    std::cout << matrix_to_heatmap(matrix_from_json(obj));
  } else if (format == "markdown") {
    EvalMatrix matrix = matrix_from_json(obj);
    std::cout << "| train |";
    for (const auto& id : matrix.test_ids) std::cout << ' ' << id << " |";
    std::cout << " avg |\n|---|";
    for (std::size_t i = 0; i <= matrix.test_ids.size(); ++i) std::cout << "---|";
    std::cout << '\n';
    for (const auto& train_id : matrix.train_ids) {
      std::cout << "| " << train_id << " |";
      if (matrix.untrained.count(train_id)) {
        for (std::size_t i = 0; i <= matrix.test_ids.size(); ++i)
          std::cout << " — |";
        std::cout << '\n';
        continue;
      }
      for (const auto& test_id : matrix.test_ids)
        std::cout << ' ' << format_score(matrix.at(train_id, test_id)) << " |";
      std::cout << ' ' << format_score(out_of_domain_average(matrix, train_id))
                << " |\n";
    }
  } else {
    throw std::invalid_argument("format must be tsv, markdown, or heatmap");
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Cross-domain text-classification evaluation harness"};
  app.require_subcommand(1);

  // stats
  auto* stats = app.add_subcommand("stats", "Descriptive corpus statistics");
  std::vector<std::string> stats_corpora;
  std::string stats_swears, stats_emotes, stats_out = ".";
  stats->add_option("corpora", stats_corpora, "Corpus JSONL paths")->required();
  stats->add_option("--swears", stats_swears, "Swear lexicon path");
  stats->add_option("--emotes", stats_emotes, "Emote lexicon path");
  stats->add_option("-o,--out", stats_out, "Output directory");

  // jaccard
  auto* jac = app.add_subcommand("jaccard", "Train/test vocabulary overlap");
  std::vector<std::string> jac_corpora;
  std::uint64_t jac_seed = 0;
  double jac_fraction = 0.1;
  std::string jac_out = ".";
  jac->add_option("corpora", jac_corpora, "Corpus JSONL paths")->required();
  jac->add_option("--seed", jac_seed, "Split seed");
  jac->add_option("--test-fraction", jac_fraction, "Held-out fraction");
  jac->add_option("-o,--out", jac_out, "Output directory");

  // matrix
  auto* mat = app.add_subcommand("matrix", "Cross-domain evaluation matrix");
  std::vector<std::string> mat_corpora, mat_exclude;
  std::string mat_grid, mat_repr, mat_context, mat_out = ".";
  std::string mat_merged_id = "all";
  bool mat_merged = false;
  std::uint64_t mat_seed = 0;
  double mat_fraction = 0.1, mat_tolerance = 1e-4;
  std::size_t mat_inner = 10, mat_outer = 3, mat_jobs = default_jobs();
  int mat_epochs = 1000;
  mat->add_option("corpora", mat_corpora, "Corpus JSONL paths")->required();
  mat->add_option("--grid", mat_grid, "Grid definition JSON");
  mat->add_option("--representation", mat_repr,
                  "bow, nbsvm, or embedding:<path>");
  mat->add_flag("--merged", mat_merged, "Add a row trained on all train splits");
  mat->add_option("--merged-id", mat_merged_id, "Name of the merged row");
  mat->add_option("--exclude-from-avg", mat_exclude,
                  "Test ids excluded from every out-of-domain average")
      ->type_size(1)
      ->allow_extra_args(false);
  mat->add_option("--context", mat_context,
                  "Context aggregation: profile or batch:<n>");
  mat->add_option("--seed", mat_seed, "Master seed");
  mat->add_option("--test-fraction", mat_fraction, "Held-out fraction");
  mat->add_option("--inner-k", mat_inner, "Inner CV folds");
  mat->add_option("--outer-k", mat_outer, "Outer CV folds");
  mat->add_option("--jobs", mat_jobs, "Parallel workers (env CROSSDOM_JOBS)");
  mat->add_option("--tolerance", mat_tolerance, "Optimizer tolerance");
  mat->add_option("--max-epochs", mat_epochs, "Optimizer epoch cap");
  mat->add_option("-o,--out", mat_out, "Output directory");

  // analyze
  auto* ana = app.add_subcommand("analyze", "Coefficient diagnostics");
  std::vector<std::string> ana_models, ana_corpora;
  std::string ana_lexicon, ana_pool = "test", ana_criterion = "absolute";
  std::string ana_out = ".";
  std::size_t ana_k = 5000, ana_annotate = 3;
  ana->add_option("--model", ana_models, "Serialized pipeline JSON paths")
      ->required()
      ->type_size(1)
      ->allow_extra_args(false);
  ana->add_option("corpora", ana_corpora, "Test corpus JSONL paths")
      ->required();
  ana->add_option("--top-k", ana_k, "Number of top features");
  ana->add_option("--criterion", ana_criterion, "positive or absolute");
  ana->add_option("--lexicon", ana_lexicon, "Lexicon for share computation");
  ana->add_option("--pool", ana_pool,
                  "Stability pool: test (test-occurring) or all");
  ana->add_option("--annotate", ana_annotate, "Documents to annotate");
  ana->add_option("-o,--out", ana_out, "Output directory");

  // aggregate
  auto* agg = app.add_subcommand("aggregate",
                                 "Context transforms to new JSONL");
  std::string agg_corpus, agg_mode, agg_out;
  agg->add_option("corpus", agg_corpus, "Corpus JSONL path")->required();
  agg->add_option("--mode", agg_mode, "profile or batch:<n>")->required();
  agg->add_option("-o,--out", agg_out, "Output JSONL path")->required();

  // report
  auto* rep = app.add_subcommand("report", "Re-render a matrix JSON report");
  std::string rep_json, rep_format = "tsv";
  rep->add_option("json", rep_json, "matrix.json path")->required();
  rep->add_option("--format", rep_format, "tsv, markdown, or heatmap");

  std::vector<std::string> argv_storage = args;
  std::vector<const char*> argv;
  argv.push_back("crossdom");
  for (const auto& arg : argv_storage) argv.push_back(arg.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (stats->parsed())
      return cmd_stats(stats_corpora, stats_swears, stats_emotes, stats_out);
    if (jac->parsed())
      return cmd_jaccard(jac_corpora, jac_seed, jac_fraction, jac_out);
    if (mat->parsed())
      return cmd_matrix(mat_corpora, mat_grid, mat_repr, mat_merged,
                        mat_merged_id, mat_exclude, mat_context, mat_seed,
                        mat_fraction, mat_inner, mat_outer, mat_jobs,
                        mat_tolerance, mat_epochs, mat_out);
    if (ana->parsed())
      return cmd_analyze(ana_models, ana_corpora, ana_k, ana_criterion,
                         ana_lexicon, ana_pool, ana_annotate, ana_out);
    if (agg->parsed()) return cmd_aggregate(agg_corpus, agg_mode, agg_out);
    if (rep->parsed()) return cmd_report(rep_json, rep_format);
    return 1;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace crossdom
