#include "cmsa/synthetic.hpp"

#include <vector>

#include <json.hpp>

#include "cmsa/rng.hpp"

namespace cmsa {

namespace {

// Romanized Hindi-English material: sentiment lives in the stems, the
// fillers are class-neutral function and topic words shared by all classes.
const std::vector<std::string> kPositiveStems = {
    "acha",   "badhiya", "mast",  "shandar", "zabardast",
    "khush",  "pyara",   "sahi",  "great",   "lovely"};
const std::vector<std::string> kNegativeStems = {
    "bura",  "bekar",  "ganda",  "kharab", "bakwas",
    "ghatiya", "dukhi", "nafrat", "worst",  "pathetic"};
const std::vector<std::string> kFillers = {
    "hai", "ka",  "ki",    "ke",   "mein", "se",   "par",  "aur",
    "ye",  "wo",  "to",    "bhi",  "movie", "song", "phone", "dost",
    "yaar", "aaj", "kal",  "abhi", "bas",  "kya",  "tha",  "log"};

constexpr double kVariantProb = 0.75;       // per-token spelling mutation
constexpr double kAgglutinationProb = 0.35; // per-gap space removal

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// One random romanization-style mutation: vowel doubling or substitution,
// dropped or appended finals, consonant doubling. Keeps most character
// n-grams of the stem intact while breaking word-level identity.
std::string mutate_spelling(const std::string& word, Rng& rng) {
  std::string out = word;
  switch (rng.bounded(5)) {
    case 0: {  // double a vowel
      std::vector<std::size_t> at;
      for (std::size_t j = 0; j < out.size(); ++j) {
        if (is_vowel(out[j])) at.push_back(j);
      }
      if (at.empty()) break;
      const std::size_t j = at[rng.bounded(at.size())];
      out.insert(out.begin() + static_cast<long>(j), out[j]);
      break;
    }
    case 1: {  // drop a vowel ending
      if (out.size() > 3 && is_vowel(out.back())) out.pop_back();
      break;
    }
    case 2: {  // tack on a trailing letter
      const char* tails = "aihy";
      out.push_back(tails[rng.bounded(4)]);
      break;
    }
    case 3: {  // substitute one vowel
      std::vector<std::size_t> at;
      for (std::size_t j = 0; j < out.size(); ++j) {
        if (is_vowel(out[j])) at.push_back(j);
      }
      if (at.empty()) break;
      const std::size_t j = at[rng.bounded(at.size())];
      switch (out[j]) {
        case 'a': out[j] = 'e'; break;
        case 'e': out[j] = 'i'; break;
        case 'i': out[j] = 'e'; break;
        case 'o': out[j] = 'u'; break;
        case 'u': out[j] = 'o'; break;
      }
      break;
    }
    case 4: {  // double a consonant
      std::vector<std::size_t> at;
      for (std::size_t j = 0; j < out.size(); ++j) {
        if (!is_vowel(out[j])) at.push_back(j);
      }
      if (at.empty()) break;
      const std::size_t j = at[rng.bounded(at.size())];
      out.insert(out.begin() + static_cast<long>(j), out[j]);
      break;
    }
  }
  return out;
}

std::string make_text(int label_value, Rng& rng) {
  std::vector<std::string> tokens;
  const std::size_t n_fillers = 4 + rng.bounded(6);
  tokens.reserve(n_fillers + 3);
  for (std::size_t j = 0; j < n_fillers; ++j) {
    tokens.push_back(kFillers[rng.bounded(kFillers.size())]);
  }
  if (label_value != 0) {
    const auto& stems = label_value > 0 ? kPositiveStems : kNegativeStems;
    const std::size_t n_stems = 1 + rng.bounded(3);
    for (std::size_t j = 0; j < n_stems; ++j) {
      const std::size_t pos = static_cast<std::size_t>(rng.bounded(tokens.size() + 1));
      tokens.insert(tokens.begin() + static_cast<long>(pos),
                    stems[rng.bounded(stems.size())]);
    }
  }

  for (std::string& token : tokens) {
    if (rng.uniform() < kVariantProb) token = mutate_spelling(token, rng);
  }

  std::string text;
  for (std::size_t j = 0; j < tokens.size(); ++j) {
    text += tokens[j];
    if (j + 1 < tokens.size() && rng.uniform() >= kAgglutinationProb) {
      text += ' ';
    }
  }
  return text;
}

}  // namespace

Dataset make_synthetic_corpus(std::size_t n_samples, std::uint64_t seed) {
  Dataset ds;
  ds.language_pair = "hi-en";
  ds.samples.reserve(n_samples);
  Rng rng(seed);
  for (std::size_t i = 0; i < n_samples; ++i) {
    Sample sample;
    sample.id = static_cast<long long>(i + 1);
    const int label_value = static_cast<int>(i % 3) - 1;
    sample.label = sentiment_from_int(label_value, sample.id);
    sample.text = make_text(label_value, rng);
    ds.samples.push_back(std::move(sample));
  }
  return ds;
}

std::string make_synthetic_corpus_json(std::size_t n_samples, std::uint64_t seed) {
  const Dataset ds = make_synthetic_corpus(n_samples, seed);
  nlohmann::json doc = nlohmann::json::array();
  for (const Sample& sample : ds.samples) {
    doc.push_back({{"id", sample.id},
                   {"text", sample.text},
                   {"sentiment", to_int(*sample.label)}});
  }
  return doc.dump();
}

}  // namespace cmsa
