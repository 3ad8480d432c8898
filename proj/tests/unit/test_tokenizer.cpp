#include <string>
#include <vector>

#include "doctest.h"
#include "textgcn/rng.hpp"
#include "textgcn/tokenizer.hpp"

using namespace textgcn;
using Tokens = std::vector<std::string>;

TEST_CASE("cleaning examples") {
  CHECK(tokenize("I don't like it.") == Tokens{"i", "do", "n't", "like", "it"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("Hello   WORLD") == Tokens{"hello", "world"});
}

TEST_CASE("clitics and punctuation") {
  CHECK(tokenize("it's we've they're he'd you'll") ==
        Tokens{"it", "'s", "we", "'ve", "they", "'re", "he", "'d", "you", "'ll"});
  CHECK(tokenize("wait,what?(yes)!") == Tokens{"wait", ",", "what", "?", "(", "yes", ")", "!"});
  CHECK(tokenize("a-b_c;d:e\"f") == Tokens{"a", "b", "c", "d", "e", "f"});
  CHECK(tokenize("`quoted'") == Tokens{"`quoted'"});
  CHECK(tokenize("  \t\n ").empty());
}

TEST_CASE("non-ASCII text is NFC-normalized before cleaning") {
  // Composed and decomposed forms of "café" give the same tokens.
  CHECK(tokenize("caf\xC3\xA9 x") == tokenize("cafe\xCC\x81 x"));
  CHECK(nfc_normalize("e\xCC\x81") == "\xC3\xA9");
}

TEST_CASE("tokenization is idempotent on random strings") {
  const std::string alphabet = "aAnN'tsdlrvE ,!?()`.-\t0\xC3\xA9";
  Rng rng(42);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string s;
    const std::size_t len = rng.below(30);
    for (std::size_t i = 0; i < len; ++i) s += alphabet[rng.below(alphabet.size())];
    const auto once = tokenize(s);
    CHECK_MESSAGE(tokenize(join(once)) == once, "input: " << s);
  }
}
