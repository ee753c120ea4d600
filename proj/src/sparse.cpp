#include "cmsa/sparse.hpp"

#include <algorithm>

namespace cmsa {

double SparseVector::get(std::uint32_t index) const {
  auto it = std::lower_bound(indices.begin(), indices.end(), index);
  if (it == indices.end() || *it != index) return 0.0;
  return values[static_cast<std::size_t>(it - indices.begin())];
}

double SparseVector::squared_norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return s;
}

double dot(const std::vector<double>& w, const SparseVector& x) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.indices.size(); ++k) {
    s += w[x.indices[k]] * x.values[k];
  }
  return s;
}

void axpy(double a, const SparseVector& x, std::vector<double>& w) {
  for (std::size_t k = 0; k < x.indices.size(); ++k) {
    w[x.indices[k]] += a * x.values[k];
  }
}

std::vector<double> to_dense(const SparseVector& x) {
  std::vector<double> dense(x.dim, 0.0);
  for (std::size_t k = 0; k < x.indices.size(); ++k) {
    dense[x.indices[k]] = x.values[k];
  }
  return dense;
}

SparseVector sparse_from_dense(const std::vector<double>& dense) {
  SparseVector out;
  out.dim = dense.size();
  for (std::size_t i = 0; i < dense.size(); ++i) {
    if (dense[i] != 0.0) out.push_back(static_cast<std::uint32_t>(i), dense[i]);
  }
  return out;
}

}  // namespace cmsa
