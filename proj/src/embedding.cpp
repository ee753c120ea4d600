#include "cmsa/embedding.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cmsa {

namespace {

bool parse_double(const std::string& field, double& out) {
  const char* begin = field.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + field.size() && !field.empty();
}

}  // namespace

EmbeddingTable load_embeddings(std::istream& stream) {
  EmbeddingTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;  // blank line

    std::vector<double> vec;
    if (table.dim > 0) vec.reserve(table.dim);
    std::string field;
    while (fields >> field) {
      double value;
      if (!parse_double(field, value)) {
        throw FormatError("unparsable float '" + field + "'", line_no);
      }
      vec.push_back(value);
    }

    if (vec.empty()) {
      throw FormatError("entry '" + word + "' carries no values", line_no);
    }
    if (table.dim == 0) {
      table.dim = vec.size();
    } else if (vec.size() != table.dim) {
      throw FormatError("expected " + std::to_string(table.dim) + " floats, got " +
                            std::to_string(vec.size()),
                        line_no);
    }

    auto [it, inserted] = table.vectors.try_emplace(word, std::move(vec));
    if (!inserted) {
      it->second = std::move(vec);
      ++table.duplicate_count;
    }
  }
  if (table.vectors.empty()) {
    throw FormatError("embedding stream holds no entries", line_no);
  }
  return table;
}

EmbeddingTable load_embeddings(const std::string& text) {
  std::istringstream stream(text);
  return load_embeddings(stream);
}

EmbeddingTable load_embeddings_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open embedding file: " + path, 0);
  return load_embeddings(in);
}

std::vector<double> average_embedding(const std::vector<std::string>& tokens,
                                      const EmbeddingTable& table) {
  std::vector<double> out(table.dim, 0.0);
  if (tokens.empty()) return out;
  for (const std::string& token : tokens) {
    if (const std::vector<double>* vec = table.find(token)) {
      for (std::size_t d = 0; d < table.dim; ++d) out[d] += (*vec)[d];
    }
  }
  const double inv = 1.0 / static_cast<double>(tokens.size());
  for (double& v : out) v *= inv;
  return out;
}

std::size_t PaddedSequence::valid_length() const {
  std::size_t n = 0;
  while (n < mask.size() && mask[n]) ++n;
  return n;
}

PaddedSequence sequence_embedding(const std::vector<std::string>& tokens,
                                  const EmbeddingTable& table, std::size_t max_len) {
  if (max_len == 0) throw ConfigError("max_len must be >= 1");
  PaddedSequence seq;
  seq.rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(max_len),
                                   static_cast<Eigen::Index>(table.dim));
  seq.mask.assign(max_len, false);
  const std::size_t keep = std::min(tokens.size(), max_len);
  for (std::size_t t = 0; t < keep; ++t) {
    seq.mask[t] = true;
    if (const std::vector<double>* vec = table.find(tokens[t])) {
      for (std::size_t d = 0; d < table.dim; ++d) {
        seq.rows(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(d)) = (*vec)[d];
      }
    }
  }
  return seq;
}

}  // namespace cmsa
