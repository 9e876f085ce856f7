#include "zfm/lattice.hpp"

#include <utility>

namespace zfm {

BigInt determinant(const IntMatrix& input) {
  const Eigen::Index n = input.rows();
  if (n != input.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  if (n == 0) return 1;
  IntMatrix m = input;
  BigInt sign = 1, prev = 1;
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      Eigen::Index swap = k + 1;
      while (swap < n && m(swap, k) == 0) ++swap;
      if (swap == n) return 0;
      m.row(k).swap(m.row(swap));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      for (Eigen::Index j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

namespace {

IntMatrix minor_of(const IntMatrix& m, Eigen::Index row, Eigen::Index col) {
  const Eigen::Index n = m.rows();
  IntMatrix out(n - 1, n - 1);
  for (Eigen::Index i = 0, r = 0; i < n; ++i) {
    if (i == row) continue;
    for (Eigen::Index j = 0, c = 0; j < n; ++j) {
      if (j == col) continue;
      out(r, c++) = m(i, j);
    }
    ++r;
  }
  return out;
}

}  // namespace

IntMatrix adjugate(const IntMatrix& m) {
  const Eigen::Index n = m.rows();
  IntMatrix adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const BigInt c = determinant(minor_of(m, i, j));
      adj(j, i) = (i + j) % 2 == 0 ? c : BigInt(-c);
    }
  }
  return adj;
}

IntMatrix hermite_normal_form(const IntMatrix& gens) {
  IntMatrix m = gens;
  const Eigen::Index rows = m.rows(), cols = m.cols();
  Eigen::Index pivot_row = 0;
  for (Eigen::Index c = 0; c < cols && pivot_row < rows; ++c) {
    // Euclid on column c below pivot_row.
    while (true) {
      Eigen::Index best = -1;
      for (Eigen::Index r = pivot_row; r < rows; ++r) {
        if (m(r, c) != 0 && (best < 0 || abs(m(r, c)) < abs(m(best, c)))) best = r;
      }
      if (best < 0) break;
      m.row(pivot_row).swap(m.row(best));
      bool done = true;
      for (Eigen::Index r = pivot_row + 1; r < rows; ++r) {
        if (m(r, c) == 0) continue;
        const BigInt q = m(r, c) / m(pivot_row, c);
        m.row(r) -= q * m.row(pivot_row);
        if (m(r, c) != 0) done = false;
      }
      if (done) break;
    }
    if (m(pivot_row, c) == 0) continue;
    if (m(pivot_row, c) < 0) m.row(pivot_row) = -m.row(pivot_row);
    for (Eigen::Index r = 0; r < pivot_row; ++r) {
      BigInt q = m(r, c) / m(pivot_row, c);
      if (m(r, c) - q * m(pivot_row, c) < 0) q -= 1;
      m.row(r) -= q * m.row(pivot_row);
    }
    ++pivot_row;
  }
  return m.topRows(pivot_row);
}

BigInt lattice_index(const IntMatrix& gens) {
  const IntMatrix h = hermite_normal_form(gens);
  if (h.rows() != gens.cols()) return 0;
  BigInt index = 1;
  for (Eigen::Index i = 0; i < h.rows(); ++i) index *= h(i, i);
  return index;
}

}  // namespace zfm
