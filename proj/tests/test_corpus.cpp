#include <cmath>
#include <fstream>
#include <random>

#include "crossdom/corpus.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace crossdom;
using namespace crossdom::testing;

TEST_SUITE_BEGIN("corpus");

namespace {

std::filesystem::path write_jsonl(const std::string& tag,
                                  const std::vector<std::string>& lines) {
  auto path = temp_dir(tag) / "corpus.jsonl";
  std::ofstream out(path);
  for (const auto& line : lines) out << line << '\n';
  return path;
}

}  // namespace

TEST_CASE("load_corpus reads documents in file order") {
  auto path = write_jsonl("load", {R"({"id":"a","text":"hi","label":0})",
                                   R"({"id":"b","text":"u suck","label":1})"});
  Corpus corpus = load_corpus(path, "t");
  REQUIRE(corpus.size() == 2);
  CHECK(corpus.positives() == 1);
  CHECK(corpus.negatives() == 1);
  CHECK(corpus.documents[0].id == "a");
  CHECK(corpus.documents[0].text == "hi");
  CHECK(corpus.documents[1].label == 1);
}

TEST_CASE("load_corpus accepts an empty file") {
  auto path = write_jsonl("empty", {});
  CHECK(load_corpus(path, "t").size() == 0);
}

TEST_CASE("load_corpus rejects duplicate ids naming the id") {
  auto path = write_jsonl("dup", {R"({"id":"a","text":"x","label":0})",
                                  R"({"id":"a","text":"y","label":0})"});
  CHECK_THROWS_WITH_AS(load_corpus(path, "t"),
                       doctest::Contains("duplicate id \"a\""), FormatError);
}

TEST_CASE("load_corpus names the malformed line") {
  auto path = write_jsonl("bad", {R"({"id":"a","text":"x","label":0})",
                                  R"(not json)"});
  CHECK_THROWS_WITH_AS(load_corpus(path, "t"), doctest::Contains("line 2"),
                       FormatError);
}

TEST_CASE("load_corpus rejects labels outside 0/1") {
  auto path = write_jsonl("label", {R"({"id":"a","text":"x","label":2})"});
  CHECK_THROWS_AS(load_corpus(path, "t"), FormatError);
}

TEST_CASE("missing file raises IoError") {
  CHECK_THROWS_AS(load_corpus("/nonexistent/nope.jsonl", "t"), IoError);
}

TEST_CASE("round-trip preserves fields and unknown keys") {
  auto path = write_jsonl(
      "round",
      {R"({"id":"a","text":"hi there","label":1,"profile_id":"p1","fine_labels":["curse"],"source":"unit"})",
       R"({"id":"b","text":"émoji é 👍","label":0})"});
  Corpus first = load_corpus(path, "t");
  auto out = temp_dir("round_out") / "copy.jsonl";
  save_corpus(first, out);
  Corpus second = load_corpus(out, "t");
  REQUIRE(second.size() == first.size());
  for (std::size_t i = 0; i < first.size(); ++i)
    CHECK(first.documents[i] == second.documents[i]);
  CHECK(second.documents[0].extra.at("source") == "unit");
}

TEST_CASE("stratified_split keeps class proportions") {
  std::vector<Document> docs;
  for (int i = 0; i < 100; ++i)
    docs.push_back(doc("d" + std::to_string(i), "text", i < 10 ? 1 : 0));
  Corpus corpus = make_corpus("c", docs);
  SplitPair split = stratified_split(corpus, 0.1, 42);
  CHECK(split.test.size() == 10);
  CHECK(split.test.positives() == 1);
  CHECK(split.test.negatives() == 9);
  CHECK(split.train.size() == 90);
  CHECK(split.train.positives() == 9);
}

TEST_CASE("stratified_split is deterministic in the seed") {
  std::vector<Document> docs;
  for (int i = 0; i < 50; ++i)
    docs.push_back(doc("d" + std::to_string(i), "text", i % 5 == 0 ? 1 : 0));
  Corpus corpus = make_corpus("c", docs);
  auto a = stratified_split(corpus, 0.2, 7);
  auto b = stratified_split(corpus, 0.2, 7);
  REQUIRE(a.test.size() == b.test.size());
  for (std::size_t i = 0; i < a.test.size(); ++i)
    CHECK(a.test.documents[i].id == b.test.documents[i].id);
  auto c = stratified_split(corpus, 0.2, 8);
  bool same = true;
  for (std::size_t i = 0; i < a.test.size() && same; ++i)
    same = a.test.documents[i].id == c.test.documents[i].id;
  CHECK_FALSE(same);
}

TEST_CASE("stratified_split ratio deviation stays under one test document") {
  // 20 docs, 4 positive, quarter held out: every seed must put exactly one
  // positive in the test side.
  std::vector<Document> docs;
  for (int i = 0; i < 20; ++i)
    docs.push_back(doc("d" + std::to_string(i), "text", i < 4 ? 1 : 0));
  Corpus corpus = make_corpus("c", docs);
  const double source_ratio = 4.0 / 20.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SplitPair split = stratified_split(corpus, 0.25, seed);
    CHECK(split.test.size() == 5);
    CHECK(split.test.positives() == 1);
    double test_ratio = static_cast<double>(split.test.positives()) /
                        static_cast<double>(split.test.size());
    CHECK(std::fabs(test_ratio - source_ratio) <=
          1.0 / static_cast<double>(split.test.size()) + 1e-12);
  }
}

TEST_CASE("stratified_split partitions by id") {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 50; ++round) {
    std::uniform_int_distribution<int> size(4, 60);
    int n = size(rng);
    std::vector<Document> docs;
    std::bernoulli_distribution positive(0.25);
    for (int i = 0; i < n; ++i)
      docs.push_back(doc("d" + std::to_string(i), "x", positive(rng) ? 1 : 0));
    Corpus corpus = make_corpus("c", docs);
    SplitPair split = stratified_split(corpus, 0.3, rng());
    CHECK(split.train.size() + split.test.size() == corpus.size());
    std::unordered_set<std::string> train_ids;
    for (const auto& d : split.train.documents) train_ids.insert(d.id);
    for (const auto& d : split.test.documents)
      CHECK(train_ids.count(d.id) == 0);
  }
}

TEST_CASE("stratified_split validates the fraction") {
  Corpus corpus = make_corpus("c", {doc("a", "x", 0), doc("b", "y", 1)});
  CHECK_THROWS_AS(stratified_split(corpus, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(stratified_split(corpus, 1.0, 1), std::invalid_argument);
}

TEST_CASE("merge_corpora concatenates in order and namespaces ids") {
  Corpus a = make_corpus("A", {doc("x", "1", 0), doc("y", "2", 1),
                               doc("z", "3", 0)});
  Corpus b = make_corpus("B", {doc("x", "4", 1), doc("w", "5", 0)});
  Corpus merged = merge_corpora({a, b}, "all");
  REQUIRE(merged.size() == 5);
  CHECK(merged.documents[0].id == "A/x");
  CHECK(merged.documents[3].id == "B/x");
  CHECK(merged.documents[4].text == "5");
  CHECK_THROWS_AS(merge_corpora({}, "none"), std::invalid_argument);
}

TEST_CASE("merged statistics are componentwise sums") {
  std::mt19937_64 rng(5);
  std::unordered_set<std::string> swears = {"damn", "heck"};
  std::unordered_set<std::string> emotes = {":)"};
  static const std::vector<std::string> texts = {
      "damn it",     "all fine :)", "heck no heck", "quiet evening",
      "damn damn 👍", "what a day",
  };
  std::uniform_int_distribution<std::size_t> pick(0, texts.size() - 1);
  for (int round = 0; round < 3; ++round) {
    std::vector<Corpus> parts;
    for (int c = 0; c < 3; ++c) {
      std::vector<Document> docs;
      std::uniform_int_distribution<int> size(1, 8);
      for (int i = 0, n = size(rng); i < n; ++i)
        docs.push_back(doc("d" + std::to_string(i), texts[pick(rng)],
                           static_cast<int>(rng() % 2)));
      parts.push_back(make_corpus("c" + std::to_string(c), docs));
    }
    Corpus merged = merge_corpora(parts, "all");
    CorpusStats total = corpus_statistics(merged, swears, emotes);
    std::size_t pos = 0, neg = 0, tokens = 0, sw = 0, em = 0;
    for (const auto& part : parts) {
      CorpusStats s = corpus_statistics(part, swears, emotes);
      pos += s.pos;
      neg += s.neg;
      tokens += s.tokens;
      sw += s.swears;
      em += s.emotes;
    }
    CHECK(total.pos == pos);
    CHECK(total.neg == neg);
    CHECK(total.tokens == tokens);
    CHECK(total.swears == sw);
    CHECK(total.emotes == em);
  }
}

TEST_CASE("aggregate_by_profile ORs labels per profile") {
  Corpus corpus = make_corpus(
      "c", {doc("1", "a", 0, "p1"), doc("2", "b", 0, "p1"),
            doc("3", "c", 1, "p1"), doc("4", "d", 0, "p2"),
            doc("5", "e", 0, "p2")});
  Corpus scoped = aggregate_by_profile(corpus, "\n");
  REQUIRE(scoped.size() == 2);
  CHECK(scoped.documents[0].id == "p1");
  CHECK(scoped.documents[0].label == 1);
  CHECK(scoped.documents[0].text == "a\nb\nc");
  CHECK(scoped.documents[1].label == 0);
}

TEST_CASE("aggregate_by_profile is identity on singleton profiles") {
  std::vector<Document> docs;
  for (int i = 0; i < 100; ++i)
    docs.push_back(doc("m" + std::to_string(i), "t" + std::to_string(i),
                       i % 7 == 0 ? 1 : 0, "p" + std::to_string(i)));
  Corpus corpus = make_corpus("c", docs);
  Corpus scoped = aggregate_by_profile(corpus);
  REQUIRE(scoped.size() == corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CHECK(scoped.documents[i].label == corpus.documents[i].label);
    CHECK(scoped.documents[i].text == corpus.documents[i].text);
  }
}

TEST_CASE("aggregate_by_profile fails fast on a missing profile") {
  Corpus corpus = make_corpus("c", {doc("1", "a", 0, "p1"), doc("2", "b", 0)});
  CHECK_THROWS_WITH_AS(aggregate_by_profile(corpus), doctest::Contains("\"2\""),
                       FormatError);
}

TEST_CASE("batch_contexts batches per profile keeping the remainder") {
  std::vector<Document> docs;
  for (int i = 0; i < 12; ++i)
    docs.push_back(doc("m" + std::to_string(i), "t" + std::to_string(i),
                       i == 6 ? 1 : 0, "p"));
  Corpus corpus = make_corpus("c", docs);
  Corpus scoped = batch_contexts(corpus, 5, " ");
  REQUIRE(scoped.size() == 3);
  CHECK(scoped.documents[0].id == "p#0");
  CHECK(scoped.documents[0].text == "t0 t1 t2 t3 t4");
  CHECK(scoped.documents[0].label == 0);
  CHECK(scoped.documents[1].label == 1);  // contains m6
  CHECK(scoped.documents[2].text == "t10 t11");
}

TEST_CASE("batch_contexts with batch size one renames only") {
  Corpus corpus = make_corpus(
      "c", {doc("1", "a", 0, "p1"), doc("2", "b", 1, "p1"),
            doc("3", "c", 0, "p2")});
  Corpus scoped = batch_contexts(corpus, 1);
  REQUIRE(scoped.size() == 3);
  CHECK(scoped.documents[0].id == "p1#0");
  CHECK(scoped.documents[1].id == "p1#1");
  CHECK(scoped.documents[1].label == 1);
  CHECK(scoped.documents[2].text == "c");
  CHECK_THROWS_AS(batch_contexts(corpus, 0), std::invalid_argument);
}

TEST_CASE("context transforms obey the OR and size laws") {
  std::mt19937_64 rng(23);
  for (int round = 0; round < 200; ++round) {
    std::uniform_int_distribution<std::size_t> docs(1, 40);
    std::uniform_int_distribution<std::size_t> profiles(1, 8);
    std::uniform_int_distribution<std::size_t> batch(1, 6);
    Corpus corpus = make_profiled_corpus(rng, docs(rng), profiles(rng));
    bool has_pos = corpus.positives() > 0;
    Corpus by_profile = aggregate_by_profile(corpus);
    Corpus by_batch = batch_contexts(corpus, batch(rng));
    CHECK((by_profile.positives() > 0) == has_pos);
    CHECK((by_batch.positives() > 0) == has_pos);
    CHECK(by_profile.size() <= corpus.size());
    CHECK(by_batch.size() <= corpus.size());
  }
}

TEST_CASE("corpus_statistics hand counts") {
  Corpus corpus = make_corpus("c", {doc("1", "damn it damn", 1)});
  CorpusStats stats = corpus_statistics(corpus, {"damn"}, {});
  CHECK(stats.pos == 1);
  CHECK(stats.neg == 0);
  CHECK(stats.tokens == 3);
  CHECK(stats.types == 2);
  CHECK(stats.swears == 2);
  CHECK(stats.emotes == 0);
}

TEST_CASE("corpus_statistics of an empty corpus is all zero") {
  CorpusStats stats = corpus_statistics(make_corpus("c", {}), {}, {});
  CHECK(stats.pos == 0);
  CHECK(stats.tokens == 0);
  CHECK(stats.avg_tok_per_msg == 0.0);
  CHECK(stats.std_tok_per_msg == 0.0);
}

TEST_CASE("corpus_statistics uses population sigma") {
  Corpus corpus = make_corpus(
      "c", {doc("1", "a b c d e f g h i j", 0),
            doc("2", "a b c d e f g h i j k l m n o p q r s t", 1)});
  CorpusStats stats = corpus_statistics(corpus, {}, {});
  CHECK(stats.avg_tok_per_msg == doctest::Approx(15.0));
  CHECK(stats.std_tok_per_msg == doctest::Approx(5.0));
  CHECK(stats.pos + stats.neg == corpus.size());
}

TEST_CASE("corpus_statistics counts emoji codepoints and lexicon emoticons") {
  Corpus corpus = make_corpus("c", {doc("1", "nice :) \U0001F600\U0001F602", 0)});
  CorpusStats stats = corpus_statistics(corpus, {}, {":)"});
  CHECK(stats.emotes == 3);  // one emoticon, two emoji codepoints
}

TEST_CASE("vocabulary is the union of lowercase tokens") {
  Corpus corpus = make_corpus("c", {doc("1", "a B", 0), doc("2", "b c", 1)});
  auto vocab = vocabulary(corpus);
  CHECK(vocab == std::unordered_set<std::string>{"a", "b", "c"});
  CHECK(vocabulary(make_corpus("e", {})).empty());
}

TEST_CASE("vocabulary size equals the types statistic") {
  std::mt19937_64 rng(29);
  static const std::vector<std::string> texts = {
      "a b c", "b c d :)", "DAMN damn", "x y", "p*ss off", "hello there 👍",
  };
  std::uniform_int_distribution<std::size_t> pick(0, texts.size() - 1);
  for (int round = 0; round < 20; ++round) {
    std::vector<Document> docs;
    std::uniform_int_distribution<int> size(1, 10);
    for (int i = 0, n = size(rng); i < n; ++i)
      docs.push_back(doc("d" + std::to_string(i), texts[pick(rng)], 0));
    Corpus corpus = make_corpus("c", docs);
    CHECK(vocabulary(corpus).size() ==
          corpus_statistics(corpus, {}, {}).types);
  }
}

TEST_CASE("jaccard hand values") {
  CHECK(jaccard({"a", "b", "c"}, {"b", "c", "d"}) == doctest::Approx(0.5));
  CHECK(jaccard({"a"}, {"a"}) == 1.0);
  CHECK(jaccard({"a"}, {"b"}) == 0.0);
  CHECK(jaccard({}, {}) == 0.0);
}

TEST_CASE("jaccard is symmetric") {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 50; ++round) {
    std::unordered_set<std::string> a, b;
    std::uniform_int_distribution<int> value(0, 15);
    for (int i = 0; i < 10; ++i) {
      a.insert("t" + std::to_string(value(rng)));
      b.insert("t" + std::to_string(value(rng)));
    }
    CHECK(jaccard(a, b) == jaccard(b, a));
    CHECK(jaccard(a, a) == 1.0);
  }
}

TEST_CASE("lexicon loader skips comments and blanks") {
  auto dir = temp_dir("lex");
  auto path = dir / "swears.txt";
  std::ofstream out(path);
  out << "# comment\n\ndamn\nheck\n";
  out.close();
  auto lexicon = load_lexicon(path);
  CHECK(lexicon == std::unordered_set<std::string>{"damn", "heck"});
  CHECK_THROWS_AS(load_lexicon(dir / "missing.txt"), IoError);
}

TEST_SUITE_END();
