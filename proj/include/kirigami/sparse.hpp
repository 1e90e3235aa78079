#pragma once

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <vector>

#include "kirigami/geometry.hpp"

namespace kirigami {

// Compressed sparse row matrix with a fixed pattern. Column indices are
// sorted within each row.
template <typename T>
struct CsrMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr;
  std::vector<int> col_idx;
  std::vector<T> values;

  int nnz() const { return static_cast<int>(col_idx.size()); }

  // Slot of entry (i, j), or -1 if outside the pattern.
  int find(int i, int j) const {
    const auto begin = col_idx.begin() + row_ptr[i];
    const auto end = col_idx.begin() + row_ptr[i + 1];
    const auto it = std::lower_bound(begin, end, j);
    if (it == end || *it != j) return -1;
    return static_cast<int>(it - col_idx.begin());
  }

  T& coeff(int i, int j) {
    const int s = find(i, j);
    if (s < 0) throw std::out_of_range("CsrMatrix::coeff: entry outside pattern");
    return values[s];
  }

  T get(int i, int j) const {
    const int s = find(i, j);
    return s < 0 ? T{} : values[s];
  }

  std::vector<T> multiply(const std::vector<T>& x) const {
    std::vector<T> y(rows, T{});
    for (int i = 0; i < rows; ++i) {
      T acc{};
      for (int s = row_ptr[i]; s < row_ptr[i + 1]; ++s) acc += values[s] * x[col_idx[s]];
      y[i] = acc;
    }
    return y;
  }
};

using SparseComplexMatrix = CsrMatrix<Complex>;
using SparseRealMatrix = CsrMatrix<double>;

}  // namespace kirigami
