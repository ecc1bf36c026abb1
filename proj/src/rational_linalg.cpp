#include "ergocube/rational_linalg.hpp"

#include <utility>

namespace ergocube {

namespace {

// Reduced row echelon form in place; returns the pivot column of each row.
std::vector<std::size_t> reduce(RationalMatrix& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[row], m[sel]);
    const Rational inv = 1 / m[row][col];
    for (std::size_t c = col; c < cols; ++c) m[row][c] *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      const Rational factor = m[r][col];
      for (std::size_t c = col; c < cols; ++c)
        if (m[row][c] != 0) m[r][c] -= factor * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::vector<std::vector<Rational>> null_space(RationalMatrix m, std::size_t cols) {
  for (const auto& r : m)
    if (r.size() != cols) throw DimensionError("null_space: ragged matrix");
  auto pivots = reduce(m, cols);
  std::vector<char> is_pivot(cols, 0);
  for (auto p : pivots) is_pivot[p] = 1;
  std::vector<std::vector<Rational>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(cols);
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t rank(RationalMatrix m, std::size_t cols) { return reduce(m, cols).size(); }

std::vector<Rational> multiply(const RationalMatrix& m, const std::vector<Rational>& v) {
  std::vector<Rational> out(m.size());
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (m[r].size() != v.size()) throw DimensionError("multiply: size mismatch");
    for (std::size_t c = 0; c < v.size(); ++c)
      if (m[r][c] != 0 && v[c] != 0) out[r] += m[r][c] * v[c];
  }
  return out;
}

}  // namespace ergocube
