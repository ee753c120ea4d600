#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmsa/errors.hpp"
#include "cmsa/sentiment.hpp"

namespace cmsa {

// One code-mixed sentence. label is absent for unlabeled (test) records;
// lang_tagged_text carries the per-token language tags when the corpus has
// them. It is parsed and stored for schema fidelity but no feature extractor
// consumes it.
struct Sample {
  long long id = 0;
  std::string text;
  std::optional<std::string> lang_tagged_text;
  std::optional<Sentiment> label;
};

struct Dataset {
  std::vector<Sample> samples;
  std::string language_pair;  // free-form tag, e.g. "Hi-En"

  std::size_t size() const { return samples.size(); }
};

// Parses the shared-task corpus format: a JSON array of objects with keys
// text (string), lang_tagged_text (optional string), id (integer) and
// sentiment (optional integer in {-1,0,1}). Input order is preserved.
//
// Throws ParseError (with byte offset) on syntax or schema violations,
// LabelError for out-of-range sentiments, DuplicateIdError on repeated ids.
Dataset parse_corpus(const std::string& raw);

Dataset parse_corpus_file(const std::string& path);

// Seeded shuffle followed by a prefix cut: the first floor(train_ratio * N)
// samples of the shuffled order form the train split, the rest the dev
// split. Same (dataset, ratio, seed) always yields the same split.
// Throws SplitError when either side would be empty.
std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, double train_ratio,
                                          std::uint64_t seed);

// Emits `[{"id":<id>,"sentiment":<v>},...]` with canonical key order and no
// insignificant whitespace, so output is byte-deterministic.
// Throws ArityError when the lists differ in length.
std::string write_predictions(const std::vector<long long>& ids,
                              const std::vector<Sentiment>& labels);

// Parsed prediction file: (id, sentiment value) pairs in file order. The
// sentiment is kept as a raw integer so validation can report out-of-range
// values instead of rejecting them.
std::vector<std::pair<long long, long long>> parse_predictions(const std::string& raw);

struct ValidationReport {
  std::vector<long long> missing;       // test ids with no prediction
  std::vector<long long> extra;         // predicted ids not in the test set
  std::vector<long long> duplicates;    // ids predicted more than once
  std::vector<long long> out_of_range;  // ids whose sentiment is not in {-1,0,1}

  bool valid() const {
    return missing.empty() && extra.empty() && duplicates.empty() &&
           out_of_range.empty();
  }

  std::string to_string() const;
};

// Checks a prediction stream against the ids it must cover. All four report
// lists are sorted ascending and deduplicated. Throws ParseError when the
// stream is not a well-formed prediction file.
ValidationReport validate_predictions(const std::vector<long long>& test_ids,
                                      const std::string& raw);

}  // namespace cmsa
