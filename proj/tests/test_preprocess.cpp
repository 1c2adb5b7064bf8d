#include <doctest.h>

#include <numeric>
#include <sstream>

#include "testutil.hpp"
#include "tscnn/preprocess.hpp"
#include "tscnn/rng.hpp"

using namespace tscnn;

TEST_CASE("tokenize lowercases and splits on punctuation") {
  CHECK(tokenize("The Bank, the BANK!") ==
        std::vector<std::string>{"the", "bank", "the", "bank"});
}

TEST_CASE("tokenize of empty input is empty") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("  \t\n ").empty());
}

TEST_CASE("digits and mixed alphanumerics are dropped") {
  CHECK(tokenize("R2-D2 costs $40") == std::vector<std::string>{"costs"});
}

TEST_CASE("length-1 tokens are dropped") {
  CHECK(tokenize("a b cd") == std::vector<std::string>{"cd"});
}

TEST_CASE("tokenize is idempotent under whitespace join") {
  Rng rng(123);
  const std::string alphabet =
      "abc XYZ 019,.;'!-_\xC3\xA9 "
      "\t\n";
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const std::size_t len = rng.below(60);
    for (std::size_t i = 0; i < len; ++i)
      text += alphabet[rng.below(alphabet.size())];
    const auto once = tokenize(text);
    std::string joined;
    for (const auto& t : once) joined += t + " ";
    CHECK(tokenize(joined) == once);
  }
}

TEST_CASE("remove_stopwords drops listed words, preserves order") {
  StopwordList sw;
  sw.words = {"the"};
  CHECK(remove_stopwords({"the", "bank"}, sw) ==
        std::vector<std::string>{"bank"});
  CHECK(remove_stopwords({}, sw).empty());
}

TEST_CASE("output never intersects the stopword set") {
  const StopwordList sw = default_stopwords();
  const auto tokens = tokenize(
      "I don't think the quick brown fox should've jumped over anything");
  for (const auto& t : remove_stopwords(tokens, sw))
    CHECK_FALSE(sw.contains(t));
}

TEST_CASE("stopword list is closed under tokenizer normalization") {
  const StopwordList sw = default_stopwords();
  for (const auto& w : sw.words) {
    const auto normalized = tokenize(w);
    for (const auto& t : normalized) CHECK(sw.contains(t));
  }
}

TEST_CASE("shipped stopword file matches the built-in list") {
  const StopwordList shipped =
      load_stopwords(std::filesystem::path(TSCNN_SOURCE_DIR) /
                     "data/stopwords_en.txt");
  CHECK(shipped.words == default_stopwords().words);
}

TEST_CASE("stopword file: comments and blank lines ignored") {
  testutil::TempDir dir("tscnn-sw");
  testutil::write_file(dir.path / "sw.txt", "# comment\n\nthe\nAnd\n");
  const StopwordList sw = load_stopwords(dir.path / "sw.txt");
  CHECK(sw.words == std::unordered_set<std::string>{"the", "and"});
}

TEST_CASE("full pipeline on a fixture sentence, hand-verified") {
  const StopwordList sw = default_stopwords();
  const auto out =
      remove_stopwords(tokenize("The R2-D2 robot wasn't going to Mars!"), sw);
  // tokens: the, robot, wasn, going, to, mars; stopwords remove the/wasn/to
  CHECK(out == std::vector<std::string>{"robot", "going", "mars"});
}
