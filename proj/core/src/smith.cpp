#include "confset/smith.hpp"

#include <algorithm>
#include <optional>
#include <utility>

namespace confset {
namespace {

struct Pivot {
  std::size_t row;
  std::size_t col;
};

std::optional<Pivot> smallest_nonzero(const IntMatrix& d, std::size_t t) {
  std::optional<Pivot> best;
  Integer best_abs;
  for (std::size_t i = t; i < d.rows(); ++i)
    for (std::size_t j = t; j < d.cols(); ++j) {
      if (d(i, j) == 0) continue;
      Integer v = abs(d(i, j));
      if (!best || v < best_abs) {
        best = Pivot{i, j};
        best_abs = std::move(v);
      }
    }
  return best;
}

}  // namespace

SmithDecomposition smith_normal_form(const IntMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  IntMatrix d = m;
  IntMatrix u = IntMatrix::identity(rows);
  IntMatrix v = IntMatrix::identity(cols);
  const std::size_t steps = std::min(rows, cols);

  for (std::size_t t = 0; t < steps; ++t) {
    bool exhausted = false;
    for (;;) {
      const auto pivot = smallest_nonzero(d, t);
      if (!pivot) {
        exhausted = true;
        break;
      }
      d.swap_rows(t, pivot->row);
      u.swap_rows(t, pivot->row);
      d.swap_cols(t, pivot->col);
      v.swap_cols(t, pivot->col);

      bool residue = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (d(i, t) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
        d.add_row_multiple(i, t, -q);
        u.add_row_multiple(i, t, -q);
        residue = residue || d(i, t) != 0;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (d(t, j) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
        d.add_col_multiple(j, t, -q);
        v.add_col_multiple(j, t, -q);
        residue = residue || d(t, j) != 0;
      }
      if (residue) continue;

      // Row and column t are clear; enforce divisibility of the trailing block.
      std::optional<std::size_t> offending_row;
      for (std::size_t i = t + 1; i < rows && !offending_row; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!mpz_divisible_p(d(i, j).get_mpz_t(), d(t, t).get_mpz_t())) {
            offending_row = i;
            break;
          }
      if (!offending_row) break;
      d.add_row_multiple(t, *offending_row, 1);
      u.add_row_multiple(t, *offending_row, 1);
    }
    if (exhausted) break;
    if (d(t, t) < 0) {
      d.negate_row(t);
      u.negate_row(t);
    }
  }

  SmithDecomposition out{std::move(u), std::move(d), std::move(v), {}};
  out.factors.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) out.factors.push_back(out.diagonal(t, t));
  return out;
}

}  // namespace confset
