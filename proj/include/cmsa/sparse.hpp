#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cmsa {

// Sparse feature vector over a fixed-dimension feature space. Indices are
// strictly increasing and every stored value is nonzero; absent indices read
// as zero.
struct SparseVector {
  std::size_t dim = 0;
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  std::size_t nnz() const { return indices.size(); }

  // Value at `index`, 0.0 when not stored. Binary search.
  double get(std::uint32_t index) const;

  double squared_norm() const;

  void push_back(std::uint32_t index, double value) {
    indices.push_back(index);
    values.push_back(value);
  }
};

// w . x over the stored entries. w must have size >= x.dim.
double dot(const std::vector<double>& w, const SparseVector& x);

// w += a * x.
void axpy(double a, const SparseVector& x, std::vector<double>& w);

std::vector<double> to_dense(const SparseVector& x);

// Drops zeros; indices come out in increasing order.
SparseVector sparse_from_dense(const std::vector<double>& dense);

}  // namespace cmsa
