#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "grassmu/errors.hpp"

namespace grassmu::intlattice {

using Int = mpz_class;

// Dense integer matrix with arbitrary-precision entries.
class IntMatrix {
 public:
  IntMatrix() = default;

  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static IntMatrix from_rows(
      std::initializer_list<std::initializer_list<long>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    IntMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != c)
        throw PreconditionViolation("from_rows: ragged row lengths");
      std::size_t j = 0;
      for (long v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Int& operator()(std::size_t r, std::size_t c) const {
    return a_[r * cols_ + c];
  }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  bool is_zero() const {
    for (const Int& v : a_)
      if (v != 0) return false;
    return true;
  }

  IntMatrix operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_)
      throw PreconditionViolation("matrix product: inner dimensions differ");
    IntMatrix p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Int& aik = (*this)(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j)
          p(i, j) += aik * o(k, j);
      }
    return p;
  }

  void swap_rows(std::size_t r1, std::size_t r2) {
    if (r1 == r2) return;
    for (std::size_t j = 0; j < cols_; ++j)
      std::swap((*this)(r1, j), (*this)(r2, j));
  }

  void swap_cols(std::size_t c1, std::size_t c2) {
    if (c1 == c2) return;
    for (std::size_t i = 0; i < rows_; ++i)
      std::swap((*this)(i, c1), (*this)(i, c2));
  }

  void negate_row(std::size_t r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(r, j) = -(*this)(r, j);
  }

  void negate_col(std::size_t c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, c) = -(*this)(i, c);
  }

  // row r1 += q * row r2
  void add_row_multiple(std::size_t r1, const Int& q, std::size_t r2) {
    for (std::size_t j = 0; j < cols_; ++j)
      (*this)(r1, j) += q * (*this)(r2, j);
  }

  // col c1 += q * col c2
  void add_col_multiple(std::size_t c1, const Int& q, std::size_t c2) {
    for (std::size_t i = 0; i < rows_; ++i)
      (*this)(i, c1) += q * (*this)(i, c2);
  }

  // Plain text layout: a "rows cols" header line, then one line per row.
  std::string to_text() const {
    std::ostringstream os;
    os << rows_ << ' ' << cols_ << '\n';
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) {
        if (j) os << ' ';
        os << (*this)(i, j).get_str();
      }
      os << '\n';
    }
    return os.str();
  }

  static IntMatrix from_text(std::istream& in) {
    long long r = 0, c = 0;
    if (!(in >> r >> c) || r < 0 || c < 0)
      throw ParseError("matrix text: bad header, expected 'rows cols'");
    IntMatrix m(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    std::string tok;
    for (std::size_t i = 0; i < m.rows_; ++i)
      for (std::size_t j = 0; j < m.cols_; ++j) {
        if (!(in >> tok))
          throw ParseError("matrix text: truncated at row " +
                           std::to_string(i) + ", col " + std::to_string(j));
        try {
          m(i, j) = Int(tok);
        } catch (const std::invalid_argument&) {
          throw ParseError("matrix text: bad integer '" + tok + "' at row " +
                           std::to_string(i) + ", col " + std::to_string(j));
        }
      }
    return m;
  }

  static IntMatrix from_text(const std::string& text) {
    std::istringstream is(text);
    return from_text(is);
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Int> a_;
};

inline std::ostream& operator<<(std::ostream& os, const IntMatrix& m) {
  return os << m.to_text();
}

// u * a * v == s with u, v unimodular and s diagonal with a divisibility
// chain d1 | d2 | ... and trailing zeros.
struct SmithDecomposition {
  IntMatrix u, s, v;

  std::size_t rank() const {
    std::size_t r = 0;
    const std::size_t n = std::min(s.rows(), s.cols());
    while (r < n && s(r, r) != 0) ++r;
    return r;
  }

  std::vector<Int> invariant_factors() const {
    std::vector<Int> d;
    const std::size_t r = rank();
    for (std::size_t i = 0; i < r; ++i) d.push_back(s(i, i));
    return d;
  }
};

namespace detail {

// Quotient minimizing |a - q*p|, so remainders shrink by at least half.
inline Int nearest_quotient(const Int& a, const Int& p) {
  Int q = a / p;  // truncated
  Int r = a - q * p;
  if (2 * abs(r) > abs(p)) q += (sgn(r) == sgn(p)) ? 1 : -1;
  return q;
}

// Smallest |entry| in s[t.., t..], ties broken by lowest (row, col).
inline bool min_abs_pivot(const IntMatrix& s, std::size_t t, std::size_t* pr,
                          std::size_t* pc) {
  bool found = false;
  Int best;
  for (std::size_t i = t; i < s.rows(); ++i)
    for (std::size_t j = t; j < s.cols(); ++j) {
      if (s(i, j) == 0) continue;
      Int v = abs(s(i, j));
      if (!found || v < best) {
        found = true;
        best = std::move(v);
        *pr = i;
        *pc = j;
      }
    }
  return found;
}

}  // namespace detail

// Deterministic Smith normal form.  Pivots are chosen by smallest absolute
// value with lowest (row, col) tie-break, so identical inputs always produce
// identical u, s, v.
inline SmithDecomposition smith_normal_form(const IntMatrix& a) {
  SmithDecomposition d{IntMatrix::identity(a.rows()), a,
                       IntMatrix::identity(a.cols())};
  IntMatrix& s = d.s;
  IntMatrix& u = d.u;
  IntMatrix& v = d.v;
  const std::size_t steps = std::min(a.rows(), a.cols());

  for (std::size_t t = 0; t < steps; ++t) {
    std::size_t pr = 0, pc = 0;
    if (!detail::min_abs_pivot(s, t, &pr, &pc)) break;

    for (;;) {
      s.swap_rows(t, pr);
      u.swap_rows(t, pr);
      s.swap_cols(t, pc);
      v.swap_cols(t, pc);

      // Reduce column t and row t against the pivot.
      bool clear = true;
      for (std::size_t i = t + 1; i < s.rows(); ++i) {
        if (s(i, t) == 0) continue;
        const Int q = detail::nearest_quotient(s(i, t), s(t, t));
        if (q != 0) {
          s.add_row_multiple(i, -q, t);
          u.add_row_multiple(i, -q, t);
        }
        if (s(i, t) != 0) clear = false;
      }
      for (std::size_t j = t + 1; j < s.cols(); ++j) {
        if (s(t, j) == 0) continue;
        const Int q = detail::nearest_quotient(s(t, j), s(t, t));
        if (q != 0) {
          s.add_col_multiple(j, -q, t);
          v.add_col_multiple(j, -q, t);
        }
        if (s(t, j) != 0) clear = false;
      }
      if (!clear) {
        // Remainders are at most half the old pivot; re-pick and repeat.
        detail::min_abs_pivot(s, t, &pr, &pc);
        continue;
      }

      // Pivot must divide the remaining block for the chain d1 | d2 | ...
      bool fixed = true;
      for (std::size_t i = t + 1; i < s.rows() && fixed; ++i)
        for (std::size_t j = t + 1; j < s.cols() && fixed; ++j)
          if (s(i, j) % s(t, t) != 0) {
            s.add_row_multiple(t, 1, i);
            u.add_row_multiple(t, 1, i);
            fixed = false;
          }
      if (fixed) break;
      pr = t;
      pc = t;
    }

    if (s(t, t) < 0) {
      s.negate_row(t);
      u.negate_row(t);
    }
  }
  return d;
}

// Basis of the integer null space { x : a*x = 0 }, read off the trailing
// columns of v in the Smith decomposition.  The basis spans a saturated
// sublattice, so every integer solution is an integer combination of it.
inline std::vector<std::vector<Int>> integer_kernel_basis(const IntMatrix& a) {
  const SmithDecomposition d = smith_normal_form(a);
  const std::size_t r = d.rank();
  std::vector<std::vector<Int>> basis;
  for (std::size_t j = r; j < a.cols(); ++j) {
    std::vector<Int> x(a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) x[i] = d.v(i, j);
    basis.push_back(std::move(x));
  }
  return basis;
}

// Rank over the rationals by Bareiss fraction-free elimination.  Shares no
// code with smith_normal_form so the two can cross-check each other.
inline std::size_t rational_rank(const IntMatrix& a) {
  IntMatrix m = a;
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t rank = 0;
  Int prev = 1;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    std::size_t pr = rows, pc = cols;
    for (std::size_t i = t; i < rows && pr == rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (m(i, j) != 0) {
          pr = i;
          pc = j;
          break;
        }
    if (pr == rows) break;
    m.swap_rows(t, pr);
    m.swap_cols(t, pc);
    for (std::size_t i = t + 1; i < rows; ++i)
      for (std::size_t j = t + 1; j < cols; ++j) {
        Int num = m(t, t) * m(i, j) - m(i, t) * m(t, j);
        m(i, j) = num / prev;  // exact by the Bareiss identity
      }
    for (std::size_t i = t + 1; i < rows; ++i) m(i, t) = 0;
    prev = m(t, t);
    ++rank;
  }
  return rank;
}

}  // namespace grassmu::intlattice
