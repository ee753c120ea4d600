#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "cmsa/ngram.hpp"
#include "cmsa/rng.hpp"

using namespace cmsa;

namespace {

// Independent gram counter: decode UTF-8 by hand and count substrings.
std::size_t codepoint_count(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::map<std::string, int> count_terms(const std::vector<std::string>& grams) {
  std::map<std::string, int> out;
  for (const auto& g : grams) ++out[g];
  return out;
}

}  // namespace

TEST_CASE("tokenize lowercases and splits on whitespace runs") {
  CHECK(tokenize("Acha acha sahi hai") ==
        std::vector<std::string>{"acha", "acha", "sahi", "hai"});
  CHECK(tokenize("") == std::vector<std::string>{});
  CHECK(tokenize("  a\tb ") == std::vector<std::string>{"a", "b"});
  CHECK(tokenize("MOVIE Acha\nHai") == std::vector<std::string>{"movie", "acha", "hai"});
}

TEST_CASE("tokenize handles multi-byte codepoints") {
  // U+00C9 (É) folds to U+00E9 (é); U+00A0 is Unicode whitespace.
  CHECK(tokenize("\xC3\x89" "cole") == std::vector<std::string>{"\xC3\xA9" "cole"});
  CHECK(tokenize("a\xC2\xA0" "b") == std::vector<std::string>{"a", "b"});
}

TEST_CASE("char n-grams enumerate codepoint substrings") {
  NGramSpec spec{NGramUnit::character, 2, 2};
  CHECK(extract_ngrams("hai", spec) == std::vector<std::string>{"ha", "ai"});

  spec.max_n = 6;
  auto grams = extract_ngrams("hai", spec);
  CHECK(grams == std::vector<std::string>{"ha", "ai", "hai"});
}

TEST_CASE("char n-grams span whitespace and fold case") {
  NGramSpec spec{NGramUnit::character, 2, 2};
  auto grams = extract_ngrams("A b", spec);
  CHECK(grams == std::vector<std::string>{"a ", " b"});
}

TEST_CASE("word n-grams join token runs with single spaces") {
  NGramSpec spec{NGramUnit::word, 1, 2};
  auto grams = extract_ngrams("so pls", spec);
  CHECK(count_terms(grams) ==
        std::map<std::string, int>{{"so", 1}, {"pls", 1}, {"so pls", 1}});

  NGramSpec tri{NGramUnit::word, 3, 3};
  CHECK(extract_ngrams("so pls", tri).empty());
}

TEST_CASE("short text yields empty multiset") {
  CHECK(extract_ngrams("a", NGramSpec{NGramUnit::character, 2, 6}).empty());
  CHECK(extract_ngrams("", NGramSpec{NGramUnit::word, 1, 3}).empty());
}

TEST_CASE("char gram count law over random strings") {
  Rng rng(7);
  const NGramSpec spec{NGramUnit::character, 2, 6};
  const std::string alphabet = "ab c";
  for (int trial = 0; trial < 100; ++trial) {
    std::string s;
    const auto len = rng.bounded(30);
    for (std::uint64_t i = 0; i < len; ++i)
      s += alphabet[static_cast<std::size_t>(rng.bounded(alphabet.size()))];
    const std::size_t cps = codepoint_count(s);
    std::size_t expect = 0;
    for (int n = 2; n <= 6; ++n)
      if (cps + 1 > static_cast<std::size_t>(n)) expect += cps - n + 1;
    CHECK(extract_ngrams(s, spec).size() == expect);
  }
}

TEST_CASE("fit_tfidf builds lexicographic vocab with smoothed idf") {
  const TfidfModel m = fit_tfidf({"ab", "bc"}, NGramSpec{NGramUnit::character, 2, 2});
  REQUIRE(m.vocab.terms == std::vector<std::string>{"ab", "bc"});
  CHECK(m.n_docs == 2);
  const double expect = std::log(3.0 / 2.0) + 1.0;  // ln((1+2)/(1+1)) + 1
  CHECK(m.idf[0] == doctest::Approx(expect).epsilon(1e-12));
  CHECK(m.idf[1] == doctest::Approx(expect).epsilon(1e-12));
  CHECK(m.idf[0] == doctest::Approx(1.4054651).epsilon(1e-6));
}

TEST_CASE("idf of an everywhere-term is exactly 1") {
  const TfidfModel m =
      fit_tfidf({"xy a", "xy b", "xy c"}, NGramSpec{NGramUnit::word, 1, 1});
  const auto it = m.vocab.index.find("xy");
  REQUIRE(it != m.vocab.index.end());
  CHECK(m.idf[it->second] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("fit_tfidf rejects empty and termless corpora") {
  CHECK_THROWS_AS(fit_tfidf({}, NGramSpec{NGramUnit::word, 1, 1}), FitError);
  CHECK_THROWS_AS(fit_tfidf({"", "  "}, NGramSpec{NGramUnit::word, 1, 1}), FitError);
}

TEST_CASE("transform: single active term normalizes to 1.0") {
  const TfidfModel m = fit_tfidf({"ab", "bc"}, NGramSpec{NGramUnit::character, 2, 2});
  const SparseVector v = transform(m, "ab");
  REQUIRE(v.nnz() == 1);
  CHECK(v.indices[0] == m.vocab.index.at("ab"));
  CHECK(v.values[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("transform: abbc drops the unseen bb gram") {
  const TfidfModel m = fit_tfidf({"ab", "bc"}, NGramSpec{NGramUnit::character, 2, 2});
  const SparseVector v = transform(m, "abbc");
  REQUIRE(v.nnz() == 2);
  CHECK(v.values[0] == doctest::Approx(0.7071068).epsilon(1e-6));
  CHECK(v.values[1] == doctest::Approx(0.7071068).epsilon(1e-6));
  CHECK(std::sqrt(v.squared_norm()) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("transform: fully unseen text gives the zero vector") {
  const TfidfModel m = fit_tfidf({"ab", "bc"}, NGramSpec{NGramUnit::character, 2, 2});
  const SparseVector v = transform(m, "zz");
  CHECK(v.dim == 2);
  CHECK(v.nnz() == 0);
}

TEST_CASE("idf is monotone non-increasing in document frequency") {
  // df: a=4, b=2, c=1, d=2.
  const TfidfModel m = fit_tfidf({"a b", "a c", "a d", "a b d"},
                                 NGramSpec{NGramUnit::word, 1, 1});
  const auto idf_of = [&](const std::string& t) { return m.idf[m.vocab.index.at(t)]; };
  CHECK(idf_of("a") <= idf_of("b"));
  CHECK(idf_of("b") <= idf_of("c"));
  CHECK(idf_of("b") == idf_of("d"));
}

TEST_CASE("fit is deterministic and transform is pure") {
  const std::vector<std::string> corpus = {"acha movie hai", "bura song tha",
                                           "phone acha hai"};
  const NGramSpec spec{NGramUnit::character, 2, 4};
  const TfidfModel a = fit_tfidf(corpus, spec);
  const TfidfModel b = fit_tfidf(corpus, spec);
  CHECK(a.vocab.terms == b.vocab.terms);
  CHECK(a.idf == b.idf);

  const SparseVector v1 = transform(a, "acha hai");
  const SparseVector v2 = transform(a, "acha hai");
  CHECK(v1.indices == v2.indices);
  CHECK(v1.values == v2.values);
}

TEST_CASE("unit norms and cosine-as-dot over a small corpus") {
  const std::vector<std::string> corpus = {"acha movie hai", "bura song tha",
                                           "phone acha hai", "bakwas phone"};
  const TfidfModel m = fit_tfidf(corpus, NGramSpec{NGramUnit::character, 2, 5});
  for (const auto& text : corpus) {
    const SparseVector v = transform(m, text);
    REQUIRE(v.nnz() > 0);
    CHECK(std::abs(std::sqrt(v.squared_norm()) - 1.0) < 1e-9);
  }
}

TEST_CASE("min_df floors rare terms; max_features keeps top document frequencies") {
  const std::vector<std::string> corpus = {"a b", "a c", "a b"};

  TfidfOptions floor2;
  floor2.min_df = 2;
  const TfidfModel m1 = fit_tfidf(corpus, NGramSpec{NGramUnit::word, 1, 1}, floor2);
  CHECK(m1.vocab.terms == std::vector<std::string>{"a", "b"});  // c has df 1

  TfidfOptions top1;
  top1.max_features = 1;
  const TfidfModel m2 = fit_tfidf(corpus, NGramSpec{NGramUnit::word, 1, 1}, top1);
  CHECK(m2.vocab.terms == std::vector<std::string>{"a"});  // df 3 beats df 2, 1
}

TEST_CASE("distinct corpora give distinct vocabularies") {
  const NGramSpec spec{NGramUnit::word, 1, 1};
  const TfidfModel hi = fit_tfidf({"acha hai", "bura hai"}, spec);
  const TfidfModel bn = fit_tfidf({"bhalo lagche", "kharap lagche"}, spec);
  CHECK(hi.vocab.terms != bn.vocab.terms);
}
