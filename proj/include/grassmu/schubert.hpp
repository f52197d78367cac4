#pragma once

#include <compare>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "grassmu/errors.hpp"
#include "grassmu/intlattice.hpp"

namespace grassmu::schubert {

using intlattice::Int;
using intlattice::IntMatrix;

enum class CellSign : int { plus = +1, minus = -1 };

inline CellSign flipped(CellSign s) {
  return s == CellSign::plus ? CellSign::minus : CellSign::plus;
}

// Open cell of the oriented Grassmannian of 3-planes in R^n, labelled by its
// pivot columns 1 <= i < j < k <= n and a lift sign.
struct CellIndex {
  int i = 1, j = 2, k = 3;
  CellSign sign = CellSign::plus;
  int n = 3;

  CellIndex() = default;

  CellIndex(int i_, int j_, int k_, CellSign sign_, int n_)
      : i(i_), j(j_), k(k_), sign(sign_), n(n_) {
    if (n < 3)
      throw std::invalid_argument("cell: ambient size must be at least 3");
    if (!(1 <= i && i < j && j < k && k <= n))
      throw std::invalid_argument("cell: pivots must satisfy 1 <= i < j < k <= n");
  }

  int dimension() const { return i + j + k - 6; }

  CellIndex flip() const { return CellIndex(i, j, k, flipped(sign), n); }

  // Order: lexicographic in (i, j, k), plus lift before minus lift.
  friend auto operator<=>(const CellIndex& a, const CellIndex& b) {
    const int sa = a.sign == CellSign::plus ? 0 : 1;
    const int sb = b.sign == CellSign::plus ? 0 : 1;
    return std::tie(a.i, a.j, a.k, sa) <=> std::tie(b.i, b.j, b.k, sb);
  }
  friend bool operator==(const CellIndex& a, const CellIndex& b) {
    return a.i == b.i && a.j == b.j && a.k == b.k && a.sign == b.sign &&
           a.n == b.n;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << 'e' << (sign == CellSign::plus ? '+' : '-') << '(' << i << ','
       << j << ',' << k << ')';
    return os.str();
  }
};

inline std::ostream& operator<<(std::ostream& os, const CellIndex& c) {
  return os << c.to_string();
}

inline int grassmannian_dimension(int n) {
  if (n < 3)
    throw std::invalid_argument("grassmannian: ambient size must be at least 3");
  return 3 * (n - 3);
}

// Integer combination of cells of one ambient size and one dimension.
class Chain {
 public:
  Chain(int n, int degree) : n_(n), degree_(degree) {
    if (n < 3)
      throw std::invalid_argument("chain: ambient size must be at least 3");
    if (degree < 0) throw std::invalid_argument("chain: negative degree");
  }

  int n() const { return n_; }
  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  const std::map<CellIndex, Int>& terms() const { return terms_; }

  void add(const CellIndex& cell, const Int& coeff) {
    if (cell.n != n_)
      throw PreconditionViolation("chain: mixed ambient sizes");
    if (cell.dimension() != degree_)
      throw PreconditionViolation("chain: mixed cell dimensions");
    if (coeff == 0) return;
    auto [it, inserted] = terms_.emplace(cell, coeff);
    if (!inserted) {
      it->second += coeff;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Int coefficient(const CellIndex& cell) const {
    auto it = terms_.find(cell);
    return it == terms_.end() ? Int(0) : it->second;
  }

  Chain& operator+=(const Chain& o) {
    if (o.n_ != n_ || o.degree_ != degree_)
      throw PreconditionViolation("chain sum: shape mismatch");
    for (const auto& [cell, c] : o.terms_) add(cell, c);
    return *this;
  }

  Chain operator+(const Chain& o) const {
    Chain r = *this;
    r += o;
    return r;
  }

  Chain operator*(const Int& scalar) const {
    Chain r(n_, degree_);
    if (scalar != 0)
      for (const auto& [cell, c] : terms_) r.terms_.emplace(cell, c * scalar);
    return r;
  }

  friend bool operator==(const Chain& a, const Chain& b) {
    return a.n_ == b.n_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

 private:
  int n_;
  int degree_;
  std::map<CellIndex, Int> terms_;
};

// All cells of the given ambient size, optionally restricted to one
// dimension, in (i, j, k, sign) order.
inline std::vector<CellIndex> enumerate_cells(int n,
                                              std::optional<int> dim = {}) {
  if (n < 3)
    throw std::invalid_argument("enumerate_cells: ambient size must be at least 3");
  std::vector<CellIndex> cells;
  for (int i = 1; i <= n - 2; ++i)
    for (int j = i + 1; j <= n - 1; ++j)
      for (int k = j + 1; k <= n; ++k) {
        if (dim && i + j + k - 6 != *dim) continue;
        cells.emplace_back(i, j, k, CellSign::plus, n);
        cells.emplace_back(i, j, k, CellSign::minus, n);
      }
  return cells;
}

inline std::size_t cell_count(int n, int dim) {
  return enumerate_cells(n, dim).size();
}

// Boundary of a single cell.  Each face triple appears twice, once per lift
// sign; faces whose triple leaves the index range are dropped.
inline Chain boundary(const CellIndex& c) {
  Chain out(c.n, c.dimension() > 0 ? c.dimension() - 1 : 0);
  if (c.dimension() == 0) return out;
  const int i = c.i, j = c.j, k = c.k;
  const auto sgn_pow = [](int e) { return e % 2 == 0 ? 1 : -1; };

  const auto emit = [&](int fi, int fj, int fk, int same, int flip) {
    const CellIndex face_same(fi, fj, fk, c.sign, c.n);
    out.add(face_same, same);
    out.add(face_same.flip(), flip);
  };

  if (i - 1 >= 1) emit(i - 1, j, k, sgn_pow(i), -1);
  if (j - 1 > i) emit(i, j - 1, k, sgn_pow(i + j + 1), sgn_pow(i));
  if (k - 1 > j) emit(i, j, k - 1, sgn_pow(i + j + k + 1), sgn_pow(i + j));
  return out;
}

inline Chain boundary(const Chain& chain) {
  if (chain.degree() == 0)
    throw PreconditionViolation("boundary: degree must be at least 1");
  Chain out(chain.n(), chain.degree() - 1);
  for (const auto& [cell, coeff] : chain.terms()) {
    Chain b = boundary(cell);
    out += b * coeff;
  }
  return out;
}

// Matrix of the boundary map from degree q to degree q-1, columns indexed by
// the q-cells and rows by the (q-1)-cells, both in enumeration order.
inline IntMatrix boundary_matrix(int n, int q) {
  if (q < 1)
    throw std::invalid_argument("boundary_matrix: degree must be at least 1");
  const std::vector<CellIndex> domain = enumerate_cells(n, q);
  const std::vector<CellIndex> range = enumerate_cells(n, q - 1);
  std::map<CellIndex, std::size_t> row_of;
  for (std::size_t r = 0; r < range.size(); ++r) row_of.emplace(range[r], r);

  IntMatrix m(range.size(), domain.size());
  for (std::size_t col = 0; col < domain.size(); ++col) {
    const Chain faces = boundary(domain[col]);
    for (const auto& [face, coeff] : faces.terms())
      m(row_of.at(face), col) = coeff;
  }
  return m;
}

// The degree-4 cycle generating middle homology once n >= 7.
inline Chain s_cycle(int n) {
  if (n < 7)
    throw std::invalid_argument(
        "s_cycle: cell e+(1,2,7) requires ambient size at least 7");
  Chain s(n, 4);
  s.add(CellIndex(1, 4, 5, CellSign::plus, n), 1);
  s.add(CellIndex(1, 3, 6, CellSign::plus, n), 1);
  s.add(CellIndex(1, 2, 7, CellSign::plus, n), -1);
  return s;
}

// Writes boundary_q<q>.txt (matrix text format) and cells_q<q>.txt (one cell
// label per line, enumeration order) for every positive degree.
inline void export_boundary_matrices(int n, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const int top = grassmannian_dimension(n);
  for (int q = 0; q <= top; ++q) {
    std::ofstream cells(dir / ("cells_q" + std::to_string(q) + ".txt"));
    for (const CellIndex& c : enumerate_cells(n, q))
      cells << c.to_string() << '\n';
    if (q >= 1) {
      std::ofstream out(dir / ("boundary_q" + std::to_string(q) + ".txt"));
      out << boundary_matrix(n, q).to_text();
    }
  }
}

}  // namespace grassmu::schubert
