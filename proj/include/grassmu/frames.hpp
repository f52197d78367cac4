#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <istream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "grassmu/errors.hpp"
#include "grassmu/schubert.hpp"
#include "grassmu/tolerances.hpp"

namespace grassmu::frames {

using schubert::CellIndex;
using schubert::CellSign;

// Three independent row vectors spanning an oriented 3-plane in R^n.
struct FrameMatrix {
  Eigen::Matrix3Xd m;

  FrameMatrix() : m(3, 3) { m.setIdentity(); }

  explicit FrameMatrix(Eigen::Matrix3Xd mat) : m(std::move(mat)) {
    if (m.cols() < 3)
      throw std::invalid_argument("frame: needs at least 3 columns");
  }

  int n() const { return static_cast<int>(m.cols()); }

  std::string to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << 3 << ' ' << n() << '\n';
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < n(); ++c) {
        if (c) os << ' ';
        os << m(r, c);
      }
      os << '\n';
    }
    return os.str();
  }

  static FrameMatrix from_text(std::istream& in) {
    int rows = 0, cols = 0;
    if (!(in >> rows >> cols) || rows != 3 || cols < 3)
      throw ParseError("frame text: header must be '3 n' with n >= 3");
    Eigen::Matrix3Xd m(3, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c)
        if (!(in >> m(r, c)))
          throw ParseError("frame text: bad entry at row " +
                           std::to_string(r) + ", col " + std::to_string(c));
    return FrameMatrix(std::move(m));
  }

  static FrameMatrix from_text(const std::string& text) {
    std::istringstream is(text);
    return from_text(is);
  }
};

// A point of an open cell: the cell label plus its free coordinates, listed
// row by row (x block, then y block, then z block) in column order.
struct CellPoint {
  CellIndex cell;
  std::vector<double> free_coords;
};

namespace detail {

inline Eigen::Vector3d singular_values(const Eigen::MatrixXd& block) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(block);
  Eigen::Vector3d s = Eigen::Vector3d::Zero();
  const auto& sv = svd.singularValues();
  for (int i = 0; i < sv.size() && i < 3; ++i) s(i) = sv(i);
  return s;
}

// Column indices (0-based) of the free coordinates of a cell, paired with
// their row, in the CellPoint ordering.
inline std::vector<std::pair<int, int>> free_positions(const CellIndex& c) {
  std::vector<std::pair<int, int>> pos;  // (row, col)
  for (int col = 0; col < c.i - 1; ++col) pos.emplace_back(0, col);
  for (int col = 0; col < c.j - 1; ++col)
    if (col != c.i - 1) pos.emplace_back(1, col);
  for (int col = 0; col < c.k - 1; ++col)
    if (col != c.i - 1 && col != c.j - 1) pos.emplace_back(2, col);
  return pos;
}

}  // namespace detail

// Canonical matrix of a cell point.  The plus form has ones at the pivots,
// zeros right of them, the free entries elsewhere; the minus lift is its
// negative.
inline FrameMatrix embed_cell_point(const CellPoint& p) {
  const CellIndex& c = p.cell;
  const auto pos = detail::free_positions(c);
  if (p.free_coords.size() != pos.size())
    throw std::invalid_argument(
        "embed_cell_point: expected " + std::to_string(pos.size()) +
        " free coordinates, got " + std::to_string(p.free_coords.size()));

  Eigen::Matrix3Xd m = Eigen::Matrix3Xd::Zero(3, c.n);
  m(0, c.i - 1) = 1.0;
  m(1, c.j - 1) = 1.0;
  m(2, c.k - 1) = 1.0;
  for (std::size_t idx = 0; idx < pos.size(); ++idx)
    m(pos[idx].first, pos[idx].second) = p.free_coords[idx];
  if (c.sign == CellSign::minus) m = -m;
  return FrameMatrix(std::move(m));
}

// Orthonormalizes the rows in order, preserving span and orientation.
inline FrameMatrix gram_schmidt(const FrameMatrix& f,
                                RankTolerance tol = {}) {
  const Eigen::Vector3d sv = detail::singular_values(f.m);
  if (sv(2) <= tol.threshold(sv(0)))
    throw DegenerateFrameError("gram_schmidt: frame rows are dependent");

  Eigen::Matrix3Xd out = f.m;
  for (int r = 0; r < 3; ++r) {
    for (int s = 0; s < r; ++s)
      out.row(r) -= out.row(r).dot(out.row(s)) * out.row(s);
    const double norm = out.row(r).norm();
    if (norm <= tol.atol)
      throw DegenerateFrameError("gram_schmidt: row collapsed");
    out.row(r) /= norm;
  }
  return FrameMatrix(std::move(out));
}

// Which open cell a frame's oriented span lies in, with the point's free
// coordinates.  Pivot columns are found where the rank of the trailing
// column block F[:, c+1..n] grows as c decreases; the canonical form is then
// rebuilt by solving for the unique row combinations with the pivot
// normalization, and the sign of that change of basis picks the lift.
inline CellPoint classify_cell(const FrameMatrix& f, RankTolerance tol = {}) {
  const int n = f.n();
  const Eigen::Vector3d sv_full = detail::singular_values(f.m);
  const double tau = tol.threshold(sv_full(0));
  if (sv_full(2) <= tau)
    throw DegenerateFrameError("classify_cell: frame is rank deficient");

  // rank of the block of all columns with index >= c
  std::vector<int> trail(n + 1, 0);
  for (int c = n - 1; c >= 0; --c) {
    const Eigen::MatrixXd block = f.m.rightCols(n - c);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(block);
    int rank = 0;
    for (int s = 0; s < svd.singularValues().size(); ++s) {
      const double sigma = svd.singularValues()(s);
      if (sigma > tau / 4 && sigma < 4 * tau)
        throw IllConditionedClassification(
            "classify_cell: singular value " + std::to_string(sigma) +
            " is within the tolerance band around " + std::to_string(tau));
      if (sigma > tau) ++rank;
    }
    trail[c] = rank;
  }

  std::vector<int> pivots;
  for (int c = 0; c < n; ++c)
    if (trail[c] == trail[c + 1] + 1) pivots.push_back(c);
  if (pivots.size() != 3)
    throw IllConditionedClassification(
        "classify_cell: did not find three pivot columns");
  const int i0 = pivots[0], j0 = pivots[1], k0 = pivots[2];

  // Orthonormal basis of the left null space of the block right of column c.
  const auto left_null = [&](int c_begin, int dim) -> Eigen::MatrixXd {
    if (c_begin >= n) return Eigen::Matrix3d::Identity().rightCols(dim);
    const Eigen::MatrixXd block = f.m.rightCols(n - c_begin);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(block, Eigen::ComputeFullU);
    return svd.matrixU().rightCols(dim);
  };

  // Row 1: kills everything right of the i pivot, normalized there.
  const Eigen::Vector3d u1 = left_null(i0 + 1, 1);
  const double d1 = u1.dot(f.m.col(i0));
  if (std::abs(d1) <= tau)
    throw IllConditionedClassification("classify_cell: first pivot lost");
  const Eigen::Vector3d a1 = u1 / d1;

  // Row 2: kills everything right of the j pivot and the i pivot column.
  const Eigen::MatrixXd b2 = left_null(j0 + 1, 2);
  const double c1 = b2.col(0).dot(f.m.col(i0));
  const double c2 = b2.col(1).dot(f.m.col(i0));
  const Eigen::Vector3d v2 = -c2 * b2.col(0) + c1 * b2.col(1);
  const double d2 = v2.dot(f.m.col(j0));
  if (std::abs(d2) <= tau * std::max(1.0, v2.norm()))
    throw IllConditionedClassification("classify_cell: second pivot lost");
  const Eigen::Vector3d a2 = v2 / d2;

  // Row 3: kills everything right of the k pivot plus both earlier pivots.
  const Eigen::MatrixXd b3 = left_null(k0 + 1, 3);
  Eigen::Vector3d p, q;
  for (int l = 0; l < 3; ++l) {
    p(l) = b3.col(l).dot(f.m.col(i0));
    q(l) = b3.col(l).dot(f.m.col(j0));
  }
  const Eigen::Vector3d gamma = p.cross(q);
  const Eigen::Vector3d v3 = b3 * gamma;
  const double d3 = v3.dot(f.m.col(k0));
  if (std::abs(d3) <= tau * std::max(1.0, v3.norm()))
    throw IllConditionedClassification("classify_cell: third pivot lost");
  const Eigen::Vector3d a3 = v3 / d3;

  Eigen::Matrix3d t;
  t.row(0) = a1.transpose();
  t.row(1) = a2.transpose();
  t.row(2) = a3.transpose();
  const double det = t.determinant();
  if (det == 0.0)
    throw IllConditionedClassification("classify_cell: singular change of basis");

  const Eigen::Matrix3Xd canonical = t * f.m;  // the plus form
  const CellSign sign = det > 0 ? CellSign::plus : CellSign::minus;
  const CellIndex cell(i0 + 1, j0 + 1, k0 + 1, sign, n);

  CellPoint point{cell, {}};
  for (const auto& [row, col] : detail::free_positions(cell))
    point.free_coords.push_back(canonical(row, col));
  return point;
}

struct NuMembership {
  bool member = false;
  double residual = 0.0;  // second singular value of the leading 3x3 block
};

// A frame lies on the rank-one variety when its first three columns form a
// matrix of rank at most one.
inline NuMembership nu_membership(const FrameMatrix& f,
                                  RankTolerance tol = {}) {
  const Eigen::Vector3d sv_full = detail::singular_values(f.m);
  if (sv_full(2) <= tol.threshold(sv_full(0)))
    throw DegenerateFrameError("nu_membership: frame is rank deficient");

  const Eigen::Vector3d sv = detail::singular_values(f.m.leftCols(3));
  return NuMembership{sv(1) <= tol.threshold(sv(0)), sv(1)};
}

// Intersection points of the rank-one variety with a 4-cell.  Two pivots in
// the first three columns force a 2x2 identity minor, so the block has rank
// two on the whole cell and the list is empty.  A single pivot there leaves
// the block's other two rows filled by free coordinates, which must all
// vanish; for 4-cells that pins the unique point with every coordinate zero.
inline std::vector<CellPoint> nu_intersect_cell(const CellIndex& cell) {
  if (cell.dimension() != 4)
    throw std::invalid_argument("nu_intersect_cell: cell must be 4-dimensional");

  const int pivots_in_block =
      (cell.i <= 3 ? 1 : 0) + (cell.j <= 3 ? 1 : 0) + (cell.k <= 3 ? 1 : 0);
  if (pivots_in_block >= 2) return {};

  const auto pos = detail::free_positions(cell);
  for (const auto& [row, col] : pos)
    if (col > 2)
      throw std::logic_error(
          "nu_intersect_cell: intersection is not zero-dimensional");
  return {CellPoint{cell, std::vector<double>(pos.size(), 0.0)}};
}

struct GridScan {
  long long nodes = 0;
  long long zero_nodes = 0;
  double min_nonzero_residual = std::numeric_limits<double>::infinity();
};

// Evaluates the rank residual on a uniform grid over the free coordinates.
inline GridScan nu_grid_scan(const CellIndex& cell, int points_per_axis = 21,
                             double lo = -2.0, double hi = 2.0,
                             double zero_tol = 1e-12) {
  if (cell.dimension() != 4)
    throw std::invalid_argument("nu_grid_scan: cell must be 4-dimensional");
  if (points_per_axis < 2)
    throw std::invalid_argument("nu_grid_scan: need at least 2 points per axis");

  GridScan scan;
  const double step = (hi - lo) / (points_per_axis - 1);
  std::vector<double> coords(4, 0.0);
  FrameMatrix frame = embed_cell_point(CellPoint{cell, coords});
  const auto pos = detail::free_positions(cell);
  const double flip = cell.sign == CellSign::minus ? -1.0 : 1.0;

  std::array<int, 4> idx{};
  for (idx[0] = 0; idx[0] < points_per_axis; ++idx[0])
    for (idx[1] = 0; idx[1] < points_per_axis; ++idx[1])
      for (idx[2] = 0; idx[2] < points_per_axis; ++idx[2])
        for (idx[3] = 0; idx[3] < points_per_axis; ++idx[3]) {
          for (int d = 0; d < 4; ++d)
            frame.m(pos[d].first, pos[d].second) =
                flip * (lo + step * idx[d]);
          const Eigen::Vector3d sv =
              detail::singular_values(frame.m.leftCols(3));
          ++scan.nodes;
          if (sv(1) <= zero_tol) ++scan.zero_nodes;
          else if (sv(1) < scan.min_nonzero_residual)
            scan.min_nonzero_residual = sv(1);
        }
  return scan;
}

enum class Coorientation { minor_lex, minor_lex_reversed };

inline const char* to_string(Coorientation c) {
  return c == Coorientation::minor_lex ? "minor-lex" : "minor-lex-reversed";
}

// Sign of a transverse intersection of the rank-one variety with a 4-cell at
// one of its points.  The leading block is rotated so its range and corange
// align with the first axis; the four entries of the lower-right 2x2 block
// of the rotated matrix, in row-major order, are the defining functions of
// the variety and fix its co-orientation ("minor-lex").  The sign compares
// the pullback of that co-orientation with the cell's own orientation.
inline int intersection_sign_real(const CellIndex& cell,
                                  const CellPoint& point,
                                  Coorientation co = Coorientation::minor_lex,
                                  RankTolerance tol = {}) {
  if (cell.dimension() != 4)
    throw std::invalid_argument("intersection_sign_real: cell must be 4-dimensional");
  if (!(point.cell == cell))
    throw PreconditionViolation("intersection_sign_real: point/cell mismatch");

  const FrameMatrix base = embed_cell_point(point);
  const Eigen::Matrix3d b0 = base.m.leftCols(3);
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(b0,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double s0 = svd.singularValues()(0);
  const double s1 = svd.singularValues()(1);
  if (s1 > tol.threshold(s0))
    throw PreconditionViolation(
        "intersection_sign_real: point is not on the rank-one variety");
  if (s0 <= tol.threshold(s0 + 1.0))
    throw TransversalityFailure(
        "intersection_sign_real: leading block vanishes");

  const Eigen::Vector3d range_dir = svd.matrixU().col(0);
  const Eigen::Vector3d row_dir = svd.matrixV().col(0);
  const Eigen::Matrix3d r_row =
      Eigen::Quaterniond::FromTwoVectors(range_dir, Eigen::Vector3d::UnitX())
          .toRotationMatrix();
  const Eigen::Matrix3d r_col =
      Eigen::Quaterniond::FromTwoVectors(row_dir, Eigen::Vector3d::UnitX())
          .toRotationMatrix();

  const auto defining = [&](const std::vector<double>& coords) {
    const FrameMatrix f = embed_cell_point(CellPoint{cell, coords});
    const Eigen::Matrix3d rotated = r_row * f.m.leftCols(3) * r_col.transpose();
    return Eigen::Vector4d(rotated(1, 1), rotated(1, 2), rotated(2, 1),
                           rotated(2, 2));
  };

  // The embedding is affine in the free coordinates, so unit-step
  // differences give the Jacobian exactly.
  const Eigen::Vector4d f0 = defining(point.free_coords);
  Eigen::Matrix4d jac;
  for (int l = 0; l < 4; ++l) {
    std::vector<double> shifted = point.free_coords;
    shifted[l] += 1.0;
    jac.col(l) = defining(shifted) - f0;
  }
  const double det = jac.determinant();
  if (std::abs(det) <= 1e-12)
    throw TransversalityFailure(
        "intersection_sign_real: intersection is not transverse");

  const int sign = det > 0 ? 1 : -1;
  return co == Coorientation::minor_lex ? sign : -sign;
}

// Membership in the complex codimension-two cycle: the plane's two
// characteristic complex column vectors must be parallel.
inline bool y_membership_complex(const FrameMatrix& f, double tol = 1e-9) {
  if (f.n() < 4)
    throw std::invalid_argument("y_membership_complex: needs at least 4 columns");
  const Eigen::Vector3cd v =
      f.m.col(0).cast<std::complex<double>>() +
      std::complex<double>(0, 1) * f.m.col(3).cast<std::complex<double>>();
  const Eigen::Vector3cd w =
      f.m.col(1).cast<std::complex<double>>() +
      std::complex<double>(0, 1) * f.m.col(2).cast<std::complex<double>>();
  return v.cross(w).norm() <= tol;
}

namespace detail {

// Complex defining pair for the cycle near the distinguished cell point,
// taken from the cross product of the two characteristic columns.
inline Eigen::Vector4d complex_defining(const std::vector<double>& coords) {
  const CellIndex cell(1, 4, 5, CellSign::plus, 7);
  const FrameMatrix f = embed_cell_point(CellPoint{cell, coords});
  const Eigen::Vector3cd v =
      f.m.col(0).cast<std::complex<double>>() +
      std::complex<double>(0, 1) * f.m.col(3).cast<std::complex<double>>();
  const Eigen::Vector3cd w =
      f.m.col(1).cast<std::complex<double>>() +
      std::complex<double>(0, 1) * f.m.col(2).cast<std::complex<double>>();
  const Eigen::Vector3cd cross = v.cross(w);
  // v = (1, i, 0) on the whole cell, so the third and (negated) second
  // components are the two coordinates transverse to the cycle.
  const std::complex<double> h1 = cross(2);
  const std::complex<double> h2 = -cross(1);
  return Eigen::Vector4d(h1.real(), h1.imag(), h2.real(), h2.imag());
}

}  // namespace detail

// Orientation of the transverse intersection with the complex cycle at the
// distinguished point, computed against the complex orientation of the
// normal coordinates; an optional positive-determinant reparametrization of
// the cell source is allowed and must not change the answer.
inline int intersection_sign_complex(
    const Eigen::Matrix4d& source_basis = Eigen::Matrix4d::Identity()) {
  const Eigen::Vector4d f0 = detail::complex_defining({0, 0, 0, 0});
  Eigen::Matrix4d jac;
  for (int l = 0; l < 4; ++l) {
    const Eigen::Vector4d dir = source_basis.col(l);
    const std::vector<double> coords{dir(0), dir(1), dir(2), dir(3)};
    jac.col(l) = detail::complex_defining(coords) - f0;
  }
  const double det = jac.determinant();
  if (std::abs(det) <= 1e-12)
    throw TransversalityFailure(
        "intersection_sign_complex: intersection is not transverse");
  return det > 0 ? 1 : -1;
}

// Sign bookkeeping between the real cycle, its complex calibration, and the
// characteristic-class normalization.
struct OrientationLedger {
  int complex_sign = 0;     // transverse sign against the complex cycle
  int p1_vs_c2 = -1;        // fixed relative sign of the two class pullbacks
  int nu_dot_s = 0;         // total signed intersection with the 4-cycle
  double mu_coefficient = 0.0;
};

inline OrientationLedger orientation_ledger() {
  OrientationLedger ledger;
  ledger.complex_sign = intersection_sign_complex();
  ledger.p1_vs_c2 = -1;
  ledger.nu_dot_s = ledger.complex_sign * ledger.p1_vs_c2;
  ledger.mu_coefficient = 0.25 * ledger.nu_dot_s;
  return ledger;
}

// Total signed intersection of the rank-one variety with the generating
// 4-cycle under a chosen co-orientation.
inline int nu_dot_s_real(int n, Coorientation co, RankTolerance tol = {}) {
  const schubert::Chain s = schubert::s_cycle(n);
  long long total = 0;
  for (const auto& [cell, coeff] : s.terms())
    for (const CellPoint& p : nu_intersect_cell(cell))
      total += coeff.get_si() * intersection_sign_real(cell, p, co, tol);
  return static_cast<int>(total);
}

// The co-orientation under which the real count reproduces the complex
// calibration.
inline Coorientation calibrated_coorientation() {
  const int target = orientation_ledger().nu_dot_s;
  for (Coorientation co :
       {Coorientation::minor_lex, Coorientation::minor_lex_reversed})
    if (nu_dot_s_real(7, co) == target) return co;
  throw std::logic_error(
      "calibrated_coorientation: no convention matches the complex sign");
}

}  // namespace grassmu::frames
