#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "loopm/polynomial.hpp"

namespace loopm {

template <class F>
using Matrix = std::vector<std::vector<F>>;

enum class SolveStatus { Unique, NoSolution, NonUnique };

template <class F>
struct LinearSolution {
  SolveStatus status = SolveStatus::NoSolution;
  /// Unique solution, or for NonUnique the witness with all free unknowns 0.
  std::vector<F> x;
  /// Basis of the homogeneous solution space (empty unless NonUnique).
  std::vector<std::vector<F>> kernel;
};

/// In-place reduction to reduced row echelon form; returns pivot columns.
/// Pivots are the first nonzero entry in column order, which keeps the result
/// deterministic for a given input.
template <class F>
std::vector<std::size_t> row_reduce(Matrix<F>& m, std::size_t ncols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && is_zero(m[sel][col])) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[sel], m[row]);
    F inv = F(1) / m[row][col];
    for (std::size_t j = col; j < m[row].size(); ++j)
      if (!is_zero(m[row][j])) m[row][j] = m[row][j] * inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || is_zero(m[r][col])) continue;
      F factor = m[r][col];
      for (std::size_t j = col; j < m[r].size(); ++j)
        if (!is_zero(m[row][j])) m[r][j] = m[r][j] - factor * m[row][j];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class F>
std::vector<std::vector<F>> kernel_from_rref(const Matrix<F>& m, const std::vector<std::size_t>& pivots,
                                             std::size_t ncols) {
  std::vector<bool> is_pivot(ncols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<F>> basis;
  for (std::size_t free = 0; free < ncols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<F> v(ncols, F(0));
    v[free] = F(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Exact Gauss-Jordan elimination over a field.
template <class F>
LinearSolution<F> solve_linear(const Matrix<F>& a, const std::vector<F>& b) {
  std::size_t n = a.empty() ? 0 : a.front().size();
  Matrix<F> m = a;
  for (std::size_t r = 0; r < m.size(); ++r) m[r].push_back(b[r]);
  auto pivots = row_reduce(m, n);
  LinearSolution<F> out;
  for (std::size_t r = pivots.size(); r < m.size(); ++r)
    if (!is_zero(m[r][n])) return out;
  out.x.assign(n, F(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) out.x[pivots[r]] = m[r][n];
  if (pivots.size() == n) {
    out.status = SolveStatus::Unique;
  } else {
    out.status = SolveStatus::NonUnique;
    out.kernel = kernel_from_rref(m, pivots, n);
  }
  return out;
}

/// Basis of {v : a v = 0}.
template <class F>
std::vector<std::vector<F>> nullspace(const Matrix<F>& a, std::size_t ncols) {
  Matrix<F> m = a;
  auto pivots = row_reduce(m, ncols);
  return kernel_from_rref(m, pivots, ncols);
}

template <class F>
std::vector<F> mat_vec(const Matrix<F>& a, const std::vector<F>& v) {
  std::vector<F> out(a.size(), F(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j)
      if (!is_zero(a[i][j]) && !is_zero(v[j])) out[i] += a[i][j] * v[j];
  return out;
}

}  // namespace loopm
