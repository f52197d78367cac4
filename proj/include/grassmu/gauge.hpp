#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>

#include "grassmu/errors.hpp"
#include "grassmu/rng.hpp"
#include "grassmu/tolerances.hpp"

namespace grassmu::gauge {

using Vec4 = Eigen::Vector4d;
// Connection value at a point: rows are Lie-algebra components a, columns
// are the four space indices mu.
using ConnValue = Eigen::Matrix<double, 3, 4>;
// One entry per derivative direction mu: d_mu A^a_nu at (a, nu).
using ConnJacobian = std::array<ConnValue, 4>;

enum class ConnectionKind { flat, linear, bpst, custom };

inline const char* to_string(ConnectionKind k) {
  switch (k) {
    case ConnectionKind::flat: return "flat";
    case ConnectionKind::linear: return "linear";
    case ConnectionKind::bpst: return "bpst";
    default: return "custom";
  }
}

// The anti-self-dual 2-form basis, as antisymmetric matrices:
// B1 = dx1^dx2 - dx3^dx4, B2 = dx1^dx3 - dx4^dx2, B3 = dx1^dx4 - dx2^dx3.
inline const std::array<Eigen::Matrix4d, 3>& asd_basis() {
  static const std::array<Eigen::Matrix4d, 3> basis = [] {
    std::array<Eigen::Matrix4d, 3> b;
    for (auto& m : b) m.setZero();
    b[0](0, 1) = 1;  b[0](1, 0) = -1;  b[0](2, 3) = -1;  b[0](3, 2) = 1;
    b[1](0, 2) = 1;  b[1](2, 0) = -1;  b[1](1, 3) = 1;   b[1](3, 1) = -1;
    b[2](0, 3) = 1;  b[2](3, 0) = -1;  b[2](1, 2) = -1;  b[2](2, 1) = 1;
    return b;
  }();
  return basis;
}

namespace detail {

inline int levi_civita(int a, int b, int c, int d) {
  const int p = (b - a) * (c - a) * (d - a) * (c - b) * (d - b) * (d - c);
  return p > 0 ? 1 : (p < 0 ? -1 : 0);
}

}  // namespace detail

// Hodge star on 2-forms for the Euclidean metric and the orientation
// dx1^dx2^dx3^dx4.
inline Eigen::Matrix4d hodge_star(const Eigen::Matrix4d& f) {
  Eigen::Matrix4d out = Eigen::Matrix4d::Zero();
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      double val = 0;
      for (int rho = 0; rho < 4; ++rho)
        for (int sig = 0; sig < 4; ++sig)
          val += 0.5 * detail::levi_civita(mu, nu, rho, sig) * f(rho, sig);
      out(mu, nu) = val;
      out(nu, mu) = -val;
    }
  return out;
}

// Connection on a closed ball in R^4 with values in the 3-dimensional Lie
// algebra (R^3 with the cross product as bracket).
struct ConnectionSpec {
  ConnectionKind kind = ConnectionKind::flat;
  Vec4 domain_center = Vec4::Zero();
  double domain_radius = 1.0;
  std::function<ConnValue(const Vec4&)> evaluate;
  std::function<ConnJacobian(const Vec4&)> jacobian;  // empty: use differences

  // parameters echoed in reports
  double bpst_lambda = 0.0;
  std::array<Eigen::Matrix4d, 3> linear_c{};

  static ConnectionSpec flat_connection(Vec4 center = Vec4::Zero(),
                                        double radius = 1.0) {
    ConnectionSpec s;
    s.kind = ConnectionKind::flat;
    s.domain_center = center;
    s.domain_radius = radius;
    s.evaluate = [](const Vec4&) { return ConnValue::Zero().eval(); };
    s.jacobian = [](const Vec4&) {
      ConnJacobian j;
      for (auto& m : j) m.setZero();
      return j;
    };
    return s;
  }

  // A^a_nu(x) = c^a_{nu mu} (x - base)^mu with c antisymmetric in (nu, mu);
  // antisymmetry is exactly the radial-gauge condition for linear forms.
  static ConnectionSpec linear_connection(
      const std::array<Eigen::Matrix4d, 3>& c, Vec4 base = Vec4::Zero(),
      double radius = 1.0) {
    for (const auto& m : c)
      if ((m + m.transpose()).norm() != 0.0)
        throw std::invalid_argument(
            "linear_connection: coefficient tensor must be antisymmetric");
    ConnectionSpec s;
    s.kind = ConnectionKind::linear;
    s.domain_center = base;
    s.domain_radius = radius;
    s.linear_c = c;
    s.evaluate = [c, base](const Vec4& x) {
      const Vec4 y = x - base;
      ConnValue a;
      for (int lie = 0; lie < 3; ++lie) a.row(lie) = (c[lie] * y).transpose();
      return a;
    };
    s.jacobian = [c](const Vec4&) {
      ConnJacobian j;
      for (int mu = 0; mu < 4; ++mu)
        for (int lie = 0; lie < 3; ++lie)
          j[mu].row(lie) = c[lie].col(mu).transpose();
      return j;
    };
    return s;
  }

  // The standard one-instanton form A^a_mu(x) = 2 (E_a)_{mu nu} y^nu / D with
  // y = x - center, D = |y|^2 + lambda^2 and symbols E_a = -B_a.  The basis
  // B_a multiplies quaternionically (B_1 B_2 = +B_3) while the instanton form
  // needs the opposite algebra under the cross-product bracket; with E_a the
  // curvature comes out F^a = -4 lambda^2 E_a / D^2, anti-self-dual
  // everywhere.
  static ConnectionSpec bpst_instanton(Vec4 center, double lambda,
                                       double radius = 1.0) {
    if (!(lambda > 0))
      throw std::invalid_argument("bpst_instanton: scale must be positive");
    ConnectionSpec s;
    s.kind = ConnectionKind::bpst;
    s.domain_center = center;
    s.domain_radius = radius;
    s.bpst_lambda = lambda;
    s.evaluate = [center, lambda](const Vec4& x) {
      const Vec4 y = x - center;
      const double d = y.squaredNorm() + lambda * lambda;
      ConnValue a;
      for (int lie = 0; lie < 3; ++lie)
        a.row(lie) = (-2.0 / d) * (asd_basis()[lie] * y).transpose();
      return a;
    };
    s.jacobian = [center, lambda](const Vec4& x) {
      const Vec4 y = x - center;
      const double d = y.squaredNorm() + lambda * lambda;
      ConnJacobian j;
      for (int mu = 0; mu < 4; ++mu)
        for (int lie = 0; lie < 3; ++lie) {
          const Vec4 by = asd_basis()[lie] * y;
          for (int nu = 0; nu < 4; ++nu)
            j[mu](lie, nu) = -2.0 * asd_basis()[lie](nu, mu) / d +
                             4.0 * y(mu) * by(nu) / (d * d);
        }
      return j;
    };
    return s;
  }

  static ConnectionSpec custom(
      std::function<ConnValue(const Vec4&)> evaluate,
      std::function<ConnJacobian(const Vec4&)> jacobian = {},
      Vec4 center = Vec4::Zero(), double radius = 1.0) {
    ConnectionSpec s;
    s.kind = ConnectionKind::custom;
    s.domain_center = center;
    s.domain_radius = radius;
    s.evaluate = std::move(evaluate);
    s.jacobian = std::move(jacobian);
    return s;
  }
};

// Same connection with the Lie components rotated; rank data of the
// curvature matrix must not feel this.
inline ConnectionSpec rotate_lie(const ConnectionSpec& a,
                                 const Eigen::Matrix3d& r) {
  ConnectionSpec s;
  s.kind = ConnectionKind::custom;
  s.domain_center = a.domain_center;
  s.domain_radius = a.domain_radius;
  auto eval = a.evaluate;
  s.evaluate = [eval, r](const Vec4& x) { return (r * eval(x)).eval(); };
  if (a.jacobian) {
    auto jac = a.jacobian;
    s.jacobian = [jac, r](const Vec4& x) {
      ConnJacobian j = jac(x);
      for (auto& m : j) m = r * m;
      return j;
    };
  }
  return s;
}

// Largest sampled violation of the radial-gauge condition
// (x - base)^mu A_mu(x) = 0 over the domain ball.
inline double radial_gauge_residual(const ConnectionSpec& a, const Vec4& base,
                                    int samples,
                                    std::uint64_t seed = 20240818) {
  if (samples < 1)
    throw std::invalid_argument("radial_gauge_residual: samples must be >= 1");
  if (!a.evaluate)
    throw PreconditionViolation("radial_gauge_residual: no evaluator");
  rng::Sampler rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vec4 x = rng.in_ball(a.domain_center, a.domain_radius);
    const Eigen::Vector3d contraction = a.evaluate(x) * (x - base);
    worst = std::max(worst, contraction.norm());
  }
  return worst;
}

// Curvature components at a point: one antisymmetric 4x4 matrix per Lie
// index.
struct Curvature {
  std::array<Eigen::Matrix4d, 3> f;
};

enum class DerivativeMode { automatic, analytic, finite_difference };

// F^a_{mu nu} = d_mu A^a_nu - d_nu A^a_mu + (A_mu x A_nu)^a, with the
// derivative from the analytic jacobian when available, else a fourth-order
// central stencil of step h.
inline Curvature curvature_at(const ConnectionSpec& a, const Vec4& p, double h,
                              DerivativeMode mode = DerivativeMode::automatic) {
  if (!a.evaluate)
    throw PreconditionViolation("curvature_at: no evaluator");
  const double dist = (p - a.domain_center).norm();
  if (dist > a.domain_radius)
    throw std::invalid_argument("curvature_at: point outside the domain ball");

  const bool use_analytic =
      mode == DerivativeMode::analytic ||
      (mode == DerivativeMode::automatic && static_cast<bool>(a.jacobian));
  if (mode == DerivativeMode::analytic && !a.jacobian)
    throw PreconditionViolation("curvature_at: no analytic jacobian");

  ConnJacobian d;
  if (use_analytic) {
    d = a.jacobian(p);
  } else {
    if (!(h > 0))
      throw std::invalid_argument("curvature_at: step must be positive");
    if (dist + 2 * h > a.domain_radius)
      throw StencilOutOfDomain(
          "curvature_at: stencil of step " + std::to_string(h) +
          " leaves the domain ball");
    for (int mu = 0; mu < 4; ++mu) {
      const Vec4 e = Vec4::Unit(mu);
      d[mu] = (-a.evaluate(p + 2 * h * e) + 8 * a.evaluate(p + h * e) -
               8 * a.evaluate(p - h * e) + a.evaluate(p - 2 * h * e)) /
              (12 * h);
    }
  }

  const ConnValue a0 = a.evaluate(p);
  Curvature f;
  for (auto& m : f.f) m.setZero();
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = mu + 1; nu < 4; ++nu) {
      const Eigen::Vector3d comm = a0.col(mu).cross(a0.col(nu));
      for (int lie = 0; lie < 3; ++lie) {
        const double val = d[mu](lie, nu) - d[nu](lie, mu) + comm(lie);
        f.f[lie](mu, nu) = val;
        f.f[lie](nu, mu) = -val;
      }
    }
  return f;
}

// One Richardson step over the fourth-order stencil pair (h, h/2).
inline Curvature curvature_at_richardson(const ConnectionSpec& a,
                                         const Vec4& p, double h) {
  const Curvature fh =
      curvature_at(a, p, h, DerivativeMode::finite_difference);
  const Curvature fh2 =
      curvature_at(a, p, h / 2, DerivativeMode::finite_difference);
  Curvature out;
  for (int lie = 0; lie < 3; ++lie)
    out.f[lie] = (16.0 * fh2.f[lie] - fh.f[lie]) / 15.0;
  return out;
}

// The 3x3 matrix pairing Lie components against the anti-self-dual basis,
// with its singular values and the discarded self-dual residual.
struct CurvatureMatrix {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  Eigen::Vector3d sigma = Eigen::Vector3d::Zero();
  double f_plus_norm = 0.0;
};

inline CurvatureMatrix asd_project(const Curvature& f) {
  for (const auto& comp : f.f)
    if (comp != (-comp.transpose()).eval())
      throw PreconditionViolation("asd_project: curvature is not antisymmetric");

  CurvatureMatrix out;
  double plus_sq = 0.0;
  for (int lie = 0; lie < 3; ++lie) {
    for (int b = 0; b < 3; ++b)
      out.m(lie, b) = 0.25 * f.f[lie].cwiseProduct(asd_basis()[b]).sum();
    const Eigen::Matrix4d plus = 0.5 * (f.f[lie] + hodge_star(f.f[lie]));
    plus_sq += plus.squaredNorm();
  }
  out.f_plus_norm = std::sqrt(plus_sq);
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(out.m);
  out.sigma = svd.singularValues();
  return out;
}

struct Reducibility {
  bool in_nu_p = false;
  double residual = 0.0;  // sigma_2 of the curvature matrix
  CurvatureMatrix matrix;
};

// Whether the anti-self-dual curvature components at p span at most a line
// in the Lie algebra.
inline Reducibility reducibility(const ConnectionSpec& a, const Vec4& p,
                                 RankTolerance tol = {}, double h = 0.0,
                                 DerivativeMode mode = DerivativeMode::automatic) {
  if (h <= 0) h = 1e-3 * a.domain_radius;
  Reducibility r;
  r.matrix = asd_project(curvature_at(a, p, h, mode));
  r.residual = r.matrix.sigma(1);
  r.in_nu_p = r.residual <= tol.threshold(r.matrix.sigma(0));
  return r;
}

// Trichotomy for limits of reducible-locus points at the moduli boundary:
// case 1 keeps a reducible limit connection away from p, case 2 sees the
// curvature concentrate at p itself, case 3 leaves a flat background.
struct BoundaryCase {
  int case_id = 0;
  int m = 0;
  int k = 0;
  bool p_in_bubble_set = false;
  bool limit_reducible = false;
};

inline BoundaryCase classify_boundary_case(int m, int k, bool p_in_bubble_set,
                                           bool limit_reducible) {
  if (m <= 0 || m > k)
    throw std::invalid_argument(
        "classify_boundary_case: need 0 < m <= k, got m=" + std::to_string(m) +
        ", k=" + std::to_string(k));
  BoundaryCase out{0, m, k, p_in_bubble_set, limit_reducible};
  if (p_in_bubble_set) {
    out.case_id = 2;
  } else if (m == k) {
    out.case_id = 3;
  } else if (limit_reducible) {
    out.case_id = 1;
  } else {
    throw InconsistentLimitError(
        "classify_boundary_case: a partial limit away from the bubble set "
        "must be reducible");
  }
  return out;
}

}  // namespace grassmu::gauge
