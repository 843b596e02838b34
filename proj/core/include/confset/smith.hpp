#pragma once

#include <vector>

#include "confset/matrix.hpp"

namespace confset {

/// U * M * V == D with U, V unimodular and D diagonal, d1 | d2 | ... , all di >= 0.
struct SmithDecomposition {
  IntMatrix left;      // U, rows x rows
  IntMatrix diagonal;  // D, rows x cols
  IntMatrix right;     // V, cols x cols
  /// The min(rows, cols) diagonal entries of D, zeros included and last.
  std::vector<Integer> factors;
};

SmithDecomposition smith_normal_form(const IntMatrix& m);

}  // namespace confset
