#include "cmsa/ngram.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "unicode.hpp"

namespace cmsa {

namespace {

void check_spec(const NGramSpec& spec) {
  if (spec.min_n < 1 || spec.max_n < spec.min_n) {
    throw FitError("invalid n-gram spec: min_n=" + std::to_string(spec.min_n) +
                   " max_n=" + std::to_string(spec.max_n));
  }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  const std::u32string folded = detail::fold_case(detail::decode_utf8(text));
  std::vector<std::string> tokens;
  std::string current;
  for (char32_t cp : folded) {
    if (detail::is_whitespace(cp)) {
      if (!current.empty()) {
        tokens.push_back(std::move(current));
        current.clear();
      }
    } else {
      detail::append_utf8(current, cp);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> extract_ngrams(std::string_view text, const NGramSpec& spec) {
  check_spec(spec);
  std::vector<std::string> grams;
  if (spec.unit == NGramUnit::character) {
    const std::u32string folded = detail::fold_case(detail::decode_utf8(text));
    const std::size_t len = folded.size();
    for (int n = spec.min_n; n <= spec.max_n; ++n) {
      const std::size_t un = static_cast<std::size_t>(n);
      if (len < un) break;
      for (std::size_t pos = 0; pos + un <= len; ++pos) {
        grams.push_back(detail::encode_utf8(
            std::u32string_view(folded.data() + pos, un)));
      }
    }
  } else {
    const std::vector<std::string> tokens = tokenize(text);
    for (int n = spec.min_n; n <= spec.max_n; ++n) {
      const std::size_t un = static_cast<std::size_t>(n);
      if (tokens.size() < un) break;
      for (std::size_t pos = 0; pos + un <= tokens.size(); ++pos) {
        std::string gram = tokens[pos];
        for (std::size_t k = 1; k < un; ++k) {
          gram += ' ';
          gram += tokens[pos + k];
        }
        grams.push_back(std::move(gram));
      }
    }
  }
  return grams;
}

void Vocabulary::build_index() {
  index.clear();
  index.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    index.emplace(terms[i], static_cast<std::uint32_t>(i));
  }
}

TfidfModel fit_tfidf(const std::vector<std::string>& corpus, const NGramSpec& spec,
                     const TfidfOptions& options) {
  check_spec(spec);
  if (corpus.empty()) throw FitError("cannot fit TF-IDF on an empty corpus");

  std::unordered_map<std::string, std::size_t> df;
  std::unordered_set<std::string> seen;
  for (const std::string& doc : corpus) {
    seen.clear();
    for (std::string& gram : extract_ngrams(doc, spec)) {
      if (seen.insert(gram).second) ++df[gram];
    }
  }

  std::vector<std::string> terms;
  terms.reserve(df.size());
  const std::size_t min_df = options.min_df < 1 ? 1 : static_cast<std::size_t>(options.min_df);
  for (const auto& [term, count] : df) {
    if (count >= min_df) terms.push_back(term);
  }
  if (terms.empty()) throw FitError("corpus produced no terms for the given spec");

  if (options.max_features > 0 && terms.size() > options.max_features) {
    // Keep the top-k terms by document frequency, ties toward the
    // lexicographically smaller term so the cut is deterministic.
    std::sort(terms.begin(), terms.end(),
              [&df](const std::string& a, const std::string& b) {
                const std::size_t da = df.at(a), db = df.at(b);
                if (da != db) return da > db;
                return a < b;
              });
    terms.resize(options.max_features);
  }
  std::sort(terms.begin(), terms.end());

  TfidfModel model;
  model.spec = spec;
  model.n_docs = corpus.size();
  model.vocab.terms = std::move(terms);
  model.vocab.build_index();
  model.idf.resize(model.vocab.size());
  const double n = static_cast<double>(corpus.size());
  for (std::size_t i = 0; i < model.vocab.terms.size(); ++i) {
    const double d = static_cast<double>(df.at(model.vocab.terms[i]));
    model.idf[i] = std::log((1.0 + n) / (1.0 + d)) + 1.0;
  }
  return model;
}

SparseVector transform(const TfidfModel& model, std::string_view text) {
  std::unordered_map<std::uint32_t, double> weights;
  for (const std::string& gram : extract_ngrams(text, model.spec)) {
    auto it = model.vocab.index.find(gram);
    if (it != model.vocab.index.end()) {
      weights[it->second] += model.idf[it->second];
    }
  }

  SparseVector out;
  out.dim = model.vocab.size();
  out.indices.reserve(weights.size());
  for (const auto& [idx, _] : weights) out.indices.push_back(idx);
  std::sort(out.indices.begin(), out.indices.end());
  out.values.reserve(out.indices.size());
  double sq = 0.0;
  for (std::uint32_t idx : out.indices) {
    const double w = weights[idx];
    out.values.push_back(w);
    sq += w * w;
  }
  if (sq > 0.0) {
    const double inv = 1.0 / std::sqrt(sq);
    for (double& v : out.values) v *= inv;
  }
  return out;
}

}  // namespace cmsa
