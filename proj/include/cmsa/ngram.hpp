#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cmsa/errors.hpp"
#include "cmsa/sparse.hpp"

namespace cmsa {

enum class NGramUnit { character, word };

// N-gram family to extract: all n in [min_n, max_n] of the given unit.
struct NGramSpec {
  NGramUnit unit = NGramUnit::word;
  int min_n = 1;
  int max_n = 1;
};

// Lowercases (Unicode simple case folding) and splits on runs of Unicode
// whitespace. Never produces empty tokens.
std::vector<std::string> tokenize(std::string_view text);

// Term multiset, multiplicities preserved, in generation order.
//
// Character n-grams are code-point substrings of the lowercased raw text,
// including internal whitespace, so grams may span token boundaries. Word
// n-grams are contiguous token runs joined by a single space. Text shorter
// than min_n yields an empty result.
std::vector<std::string> extract_ngrams(std::string_view text, const NGramSpec& spec);

// Bijective term -> index map; terms are held in lexicographic (byte) order
// so fitting is deterministic.
struct Vocabulary {
  std::vector<std::string> terms;
  std::unordered_map<std::string, std::uint32_t> index;

  std::size_t size() const { return terms.size(); }

  void build_index();
};

struct TfidfOptions {
  int min_df = 1;                // keep terms occurring in >= min_df documents
  std::size_t max_features = 0;  // 0 = unlimited; else top-k by document frequency
};

struct TfidfModel {
  NGramSpec spec;
  Vocabulary vocab;
  std::vector<double> idf;  // aligned with vocab.terms, every value >= 1
  std::size_t n_docs = 0;
};

// Fits vocabulary and smoothed IDF weights over the corpus:
// idf(t) = ln((1 + N) / (1 + df(t))) + 1. Distinct corpora (e.g. the two
// language pairs) get distinct models. Throws FitError on an empty corpus or
// when no terms survive.
TfidfModel fit_tfidf(const std::vector<std::string>& corpus, const NGramSpec& spec,
                     const TfidfOptions& options = {});

// tf * idf over in-vocabulary terms (tf = raw count, unknown terms dropped),
// L2-normalized unless all-zero. Pure; safe to call concurrently.
SparseVector transform(const TfidfModel& model, std::string_view text);

}  // namespace cmsa
