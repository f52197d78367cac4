#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "grassmu/errors.hpp"
#include "grassmu/intlattice.hpp"
#include "grassmu/schubert.hpp"

namespace grassmu::homology {

using intlattice::Int;
using intlattice::IntMatrix;
using intlattice::SmithDecomposition;
using schubert::Chain;
using schubert::CellIndex;

struct HomologyGroup {
  int n = 0;
  int q = 0;
  std::size_t free_rank = 0;
  std::vector<Int> torsion;  // invariant factors greater than one, in order

  friend bool operator==(const HomologyGroup&, const HomologyGroup&) = default;
};

// Coordinates of a cycle's class in a fixed basis of H_q: one integer per
// free generator and one residue per torsion factor.
struct HomologyClass {
  int n = 0;
  int q = 0;
  std::vector<Int> free_coords;
  std::vector<Int> torsion_coords;  // reduced into [0, d_i)
  std::vector<Int> torsion_orders;

  bool is_zero() const {
    for (const Int& c : free_coords)
      if (c != 0) return false;
    for (const Int& c : torsion_coords)
      if (c != 0) return false;
    return true;
  }
};

namespace detail {

inline void check_degree(int n, int q, const char* who) {
  const int top = schubert::grassmannian_dimension(n);
  if (q < 0 || q > top)
    throw std::invalid_argument(std::string(who) + ": degree out of range 0.." +
                                std::to_string(top));
}

inline IntMatrix chain_vector(const Chain& c) {
  const auto cells = schubert::enumerate_cells(c.n(), c.degree());
  IntMatrix x(cells.size(), 1);
  for (std::size_t r = 0; r < cells.size(); ++r)
    x(r, 0) = c.coefficient(cells[r]);
  return x;
}

}  // namespace detail

inline bool is_cycle(const Chain& c) {
  if (c.degree() == 0) return true;
  return schubert::boundary(c).is_zero();
}

// Basis-adapted presentation of H_q: a basis of the cycle lattice ker d_q
// together with the image of d_{q+1} expressed in that basis.  Used both for
// reading off class coordinates and as a cross-check on homology_group.
class CycleSpace {
 public:
  CycleSpace(int n, int q) : n_(n), q_(q) {
    detail::check_degree(n, q, "cycle space");
    const auto cells = schubert::enumerate_cells(n, q);
    const std::size_t nq = cells.size();

    if (q == 0) {
      kernel_ = IntMatrix::identity(nq);
    } else {
      const auto basis = intlattice::integer_kernel_basis(
          schubert::boundary_matrix(n, q));
      kernel_ = IntMatrix(nq, basis.size());
      for (std::size_t c = 0; c < basis.size(); ++c)
        for (std::size_t r = 0; r < nq; ++r) kernel_(r, c) = basis[c][r];
    }
    kernel_snf_ = intlattice::smith_normal_form(kernel_);
    // The kernel lattice is saturated, so its basis matrix has all
    // invariant factors equal to one.
    for (const Int& d : kernel_snf_.invariant_factors())
      if (d != 1)
        throw std::logic_error("cycle space: kernel basis is not primitive");

    const int top = schubert::grassmannian_dimension(n);
    const std::size_t z = kernel_.cols();
    IntMatrix image_in_kernel(z, 0);
    if (q < top) {
      const IntMatrix b = schubert::boundary_matrix(n, q + 1);
      image_in_kernel = coords_in_kernel(b, "boundary image");
    }
    image_snf_ = intlattice::smith_normal_form(image_in_kernel);
  }

  int n() const { return n_; }
  int q() const { return q_; }
  std::size_t cycle_rank() const { return kernel_.cols(); }

  HomologyGroup group() const {
    HomologyGroup g{n_, q_, 0, {}};
    const std::size_t r = image_snf_.rank();
    g.free_rank = cycle_rank() - r;
    for (const Int& d : image_snf_.invariant_factors())
      if (d > 1) g.torsion.push_back(d);
    return g;
  }

  HomologyClass class_of(const Chain& c) const {
    if (c.n() != n_ || c.degree() != q_)
      throw PreconditionViolation("class_of: chain does not match this space");
    if (!is_cycle(c))
      throw PreconditionViolation("class_of: chain is not a cycle");

    const IntMatrix y = coords_in_kernel(detail::chain_vector(c), "cycle");
    const IntMatrix t = image_snf_.u * y;

    HomologyClass cls{n_, q_, {}, {}, {}};
    const std::size_t r = image_snf_.rank();
    const std::size_t z = cycle_rank();
    for (std::size_t i = 0; i < r; ++i) {
      const Int& d = image_snf_.s(i, i);
      if (d > 1) {
        Int residue = t(i, 0) % d;
        if (residue < 0) residue += d;
        cls.torsion_coords.push_back(residue);
        cls.torsion_orders.push_back(d);
      }
    }
    for (std::size_t i = r; i < z; ++i) cls.free_coords.push_back(t(i, 0));
    return cls;
  }

 private:
  // Solve kernel_ * y = x column by column; x must lie in the kernel span.
  IntMatrix coords_in_kernel(const IntMatrix& x, const char* what) const {
    const std::size_t z = kernel_.cols();
    const IntMatrix ux = kernel_snf_.u * x;
    for (std::size_t i = z; i < ux.rows(); ++i)
      for (std::size_t j = 0; j < ux.cols(); ++j)
        if (ux(i, j) != 0)
          throw std::logic_error(std::string("cycle space: ") + what +
                                 " falls outside the cycle lattice");
    IntMatrix top(z, ux.cols());
    for (std::size_t i = 0; i < z; ++i)
      for (std::size_t j = 0; j < ux.cols(); ++j) top(i, j) = ux(i, j);
    return kernel_snf_.v * top;
  }

  int n_;
  int q_;
  IntMatrix kernel_;
  SmithDecomposition kernel_snf_;
  SmithDecomposition image_snf_;
};

// H_q via Smith normal forms of the two adjacent boundary matrices.
inline HomologyGroup homology_group(int n, int q) {
  detail::check_degree(n, q, "homology_group");
  const int top = schubert::grassmannian_dimension(n);
  const std::size_t nq = schubert::cell_count(n, q);

  const std::size_t rank_q =
      q == 0 ? 0 : intlattice::smith_normal_form(schubert::boundary_matrix(n, q))
                       .rank();

  HomologyGroup g{n, q, 0, {}};
  std::size_t rank_q1 = 0;
  if (q < top) {
    const auto d = intlattice::smith_normal_form(schubert::boundary_matrix(n, q + 1));
    rank_q1 = d.rank();
    for (const Int& f : d.invariant_factors())
      if (f > 1) g.torsion.push_back(f);
  }
  g.free_rank = nq - rank_q - rank_q1;
  return g;
}

// Betti number through the Bareiss rank path, sharing no elimination code
// with homology_group.
inline std::size_t betti_rational(int n, int q) {
  detail::check_degree(n, q, "betti_rational");
  const int top = schubert::grassmannian_dimension(n);
  const std::size_t nq = schubert::cell_count(n, q);
  const std::size_t rank_q =
      q == 0 ? 0 : intlattice::rational_rank(schubert::boundary_matrix(n, q));
  const std::size_t rank_q1 =
      q == top ? 0 : intlattice::rational_rank(schubert::boundary_matrix(n, q + 1));
  return nq - rank_q - rank_q1;
}

inline HomologyClass class_of(const Chain& c) {
  return CycleSpace(c.n(), c.degree()).class_of(c);
}

struct EulerReport {
  long long cell_sum = 0;   // alternating sum of cell counts
  long long betti_sum = 0;  // alternating sum of free ranks
  bool consistent = false;
};

inline EulerReport euler_consistency(int n) {
  EulerReport rep;
  const int top = schubert::grassmannian_dimension(n);
  for (int q = 0; q <= top; ++q) {
    const long long sign = q % 2 == 0 ? 1 : -1;
    rep.cell_sum += sign * static_cast<long long>(schubert::cell_count(n, q));
    rep.betti_sum +=
        sign * static_cast<long long>(homology_group(n, q).free_rank);
  }
  rep.consistent = rep.cell_sum == rep.betti_sum;
  return rep;
}

}  // namespace grassmu::homology
