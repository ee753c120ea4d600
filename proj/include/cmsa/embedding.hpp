#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "cmsa/errors.hpp"

namespace cmsa {

// Pretrained word-embedding table. The toolkit never trains embeddings; the
// table is an input artifact loaded from the text format below.
struct EmbeddingTable {
  std::size_t dim = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;
  std::size_t duplicate_count = 0;  // lines overridden by a later occurrence

  // nullptr for out-of-vocabulary words.
  const std::vector<double>* find(const std::string& word) const {
    auto it = vectors.find(word);
    return it == vectors.end() ? nullptr : &it->second;
  }
};

// One entry per line: word followed by `dim` decimal floats, space-separated,
// UTF-8. dim is inferred from the first line; blank lines are skipped.
// Duplicate words: last occurrence wins, counted in duplicate_count.
// Throws FormatError (with 1-based line number) on malformed lines and on an
// empty stream.
EmbeddingTable load_embeddings(std::istream& stream);
EmbeddingTable load_embeddings(const std::string& text);
EmbeddingTable load_embeddings_file(const std::string& path);

// Mean over ALL tokens: out-of-vocabulary tokens contribute the zero vector
// but still count in the denominator. Empty token list -> zero vector.
std::vector<double> average_embedding(const std::vector<std::string>& tokens,
                                      const EmbeddingTable& table);

// Fixed-length embedding sequence for the recurrent model. Row t holds the
// embedding of token t (zero for OOV); the mask is true on the prefix of
// real positions and false on padding rows, which are all-zero.
struct PaddedSequence {
  Eigen::MatrixXd rows;    // max_len x dim
  std::vector<bool> mask;  // max_len, true on a prefix

  std::size_t valid_length() const;
};

// Keeps the first min(|tokens|, max_len) tokens (head of the sentence)
// and zero-pads the rest. max_len must be >= 1.
PaddedSequence sequence_embedding(const std::vector<std::string>& tokens,
                                  const EmbeddingTable& table, std::size_t max_len);

}  // namespace cmsa
