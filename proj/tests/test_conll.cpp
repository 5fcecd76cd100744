#include <catch2/catch_amalgamated.hpp>
#include <sstream>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "pathsrl/conll.hpp"
#include "pathsrl/rng.hpp"

using namespace pathsrl;

TEST_CASE("control sentence parses with one predicate") {
  std::istringstream in(fixtures::kControlSentence);
  const Corpus corpus = read_corpus(in);
  REQUIRE(corpus.size() == 1);
  const Sentence& s = corpus.front();
  REQUIRE(s.size() == 5);
  CHECK(s.predicate_tokens() == std::vector<int>{4});
  CHECK(s.token(4).pred == "raising.01");
  CHECK(s.token(4).fillpred);
  CHECK(s.token(1).apreds == std::vector<std::string>{"A0"});
  CHECK(s.token(2).apreds == std::vector<std::string>{""});
  CHECK(s.token(3).apreds == std::vector<std::string>{""});
  CHECK(s.token(5).apreds == std::vector<std::string>{"A1"});
  CHECK(s.token(3).feat == "_");  // uninterpreted columns kept verbatim
}

TEST_CASE("empty input yields empty corpus") {
  std::istringstream in("");
  CHECK(read_corpus(in).empty());
}

TEST_CASE("short row is rejected with its line number") {
  // 13 columns on the second row.
  std::string text =
      "1\ta\ta\ta\tN\tN\t_\t_\t0\t0\tROOT\tROOT\t_\t_\n"
      "2\tb\tb\tb\tN\tN\t_\t_\t1\t1\tNMOD\tNMOD\t_\n";
  std::istringstream in(text);
  try {
    read_corpus(in);
    FAIL("expected CorpusError");
  } catch (const CorpusError& e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("14 columns") != std::string::npos);
  }
}

TEST_CASE("non-integer head is rejected") {
  std::string text = "1\ta\ta\ta\tN\tN\t_\t_\tx\t0\tROOT\tROOT\t_\t_\n\n";
  std::istringstream in(text);
  CHECK_THROWS_AS(read_corpus(in), CorpusError);
}

TEST_CASE("apred width must match predicate count") {
  // Two predicates but only one APRED column.
  std::string text =
      "1\ta\ta\ta\tV\tV\t_\t_\t0\t0\tROOT\tROOT\tY\ta.01\t_\n"
      "2\tb\tb\tb\tV\tV\t_\t_\t1\t1\tOBJ\tOBJ\tY\tb.01\t_\n\n";
  std::istringstream in(text);
  CHECK_THROWS_AS(read_corpus(in), CorpusError);
}

TEST_CASE("fillpred without a sense is rejected") {
  std::string text = "1\ta\ta\ta\tV\tV\t_\t_\t0\t0\tROOT\tROOT\tY\t_\n\n";
  std::istringstream in(text);
  CHECK_THROWS_AS(read_corpus(in), CorpusError);
}

TEST_CASE("phead cycles are rejected") {
  std::string text =
      "1\ta\ta\ta\tN\tN\t_\t_\t0\t2\tROOT\tNMOD\t_\t_\n"
      "2\tb\tb\tb\tN\tN\t_\t_\t0\t1\tROOT\tNMOD\t_\t_\n\n";
  std::istringstream in(text);
  CHECK_THROWS_AS(read_corpus(in), CorpusError);
}

TEST_CASE("trailing whitespace is rejected") {
  std::string text = "1\ta\ta\ta\tN\tN\t_\t_\t0\t0\tROOT\tROOT\t_\t_ \n\n";
  std::istringstream in(text);
  CHECK_THROWS_AS(read_corpus(in), CorpusError);
}

TEST_CASE("multiple roots are accepted") {
  std::string text =
      "1\ta\ta\ta\tN\tN\t_\t_\t0\t0\tROOT\tROOT\t_\t_\n"
      "2\tb\tb\tb\tN\tN\t_\t_\t0\t0\tROOT\tROOT\t_\t_\n\n";
  std::istringstream in(text);
  CHECK(read_corpus(in).size() == 1);
}

TEST_CASE("fig-1 fixture round-trips byte for byte") {
  std::istringstream in(fixtures::kControlSentence);
  const Corpus corpus = read_corpus(in);
  std::ostringstream out;
  write_corpus(corpus, out);
  CHECK(out.str() == fixtures::kControlSentence);
}

TEST_CASE("one-token sentence with no predicates writes 14 columns") {
  Corpus corpus(1);
  Token t;
  t.id = 1;
  t.form = t.lemma = t.plemma = "x";
  t.pos = t.ppos = "N";
  t.feat = t.pfeat = "_";
  t.deprel = t.pdeprel = "ROOT";
  corpus[0].tokens.push_back(t);
  std::ostringstream out;
  write_corpus(corpus, out);
  CHECK(out.str() == "1\tx\tx\tx\tN\tN\t_\t_\t0\t0\tROOT\tROOT\t_\t_\n\n");
}

TEST_CASE("two predicates widen every row to 16 columns") {
  std::string text =
      "1\ta\ta\ta\tV\tV\t_\t_\t0\t0\tROOT\tROOT\tY\ta.01\t_\t_\n"
      "2\tb\tb\tb\tV\tV\t_\t_\t1\t1\tOBJ\tOBJ\tY\tb.01\tA1\t_\n\n";
  std::istringstream in(text);
  const Corpus corpus = read_corpus(in);
  std::ostringstream out;
  write_corpus(corpus, out);
  for (const std::string& line : {std::string(out.str())}) (void)line;
  std::istringstream check(out.str());
  std::string line;
  while (std::getline(check, line)) {
    if (line.empty()) continue;
    CHECK(std::count(line.begin(), line.end(), '\t') == 15);
  }
}

TEST_CASE("random corpora round-trip through write and read") {
  Rng rng(41);
  for (int iter = 0; iter < 40; ++iter) {
    Corpus corpus;
    const int n_sentences = static_cast<int>(rng.uniform_int(1, 4));
    for (int i = 0; i < n_sentences; ++i) {
      Sentence s = oracles::random_tree_sentence(static_cast<int>(rng.uniform_int(1, 12)), rng);
      // Sprinkle predicates and roles over the tree.
      std::vector<int> preds;
      for (Token& t : s.tokens)
        if (rng.bernoulli(0.3)) {
          t.fillpred = true;
          t.pred = t.plemma + ".01";
          preds.push_back(t.id);
        }
      for (Token& t : s.tokens) {
        t.apreds.assign(preds.size(), "");
        for (std::size_t p = 0; p < preds.size(); ++p)
          if (rng.bernoulli(0.2)) t.apreds[p] = rng.bernoulli(0.5) ? "A0" : "A1";
      }
      corpus.push_back(std::move(s));
    }
    std::ostringstream out;
    write_corpus(corpus, out);
    std::istringstream in(out.str());
    const Corpus reread = read_corpus(in);
    REQUIRE(reread == corpus);
  }
}
