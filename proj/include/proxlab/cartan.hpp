#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

#include "proxlab/errors.hpp"
#include "proxlab/linalg.hpp"
#include "proxlab/numeric.hpp"

namespace proxlab {

// Nonincreasing log singular values.
using CartanVector = Vec;
// Nonincreasing log moduli of eigenvalues.
using JordanVector = Vec;

namespace detail {

// mu_1 + ... + mu_k as the log of the top singular value of the k-th exterior
// power.  Top singular values are well-conditioned, so the full vector stays
// accurate even when the matrix condition number dwarfs 1/eps_machine; a
// direct SVD would return noise for the trailing entries in that regime.
inline std::vector<double> cumulative_log_sv(const Mat& g) {
  int d = static_cast<int>(g.rows());
  std::vector<double> cum(d + 1, 0.0);
  for (int k = 1; k < d; ++k)
    cum[k] = std::log(singular_values(exterior_power(g, k))(0));
  cum[d] = log_abs_det(g);
  return cum;
}

}  // namespace detail

// Cartan projection mu(g): log singular values, nonincreasing.
inline CartanVector cartan_projection(const Mat& g) {
  require_invertible(g, "cartan_projection");
  int d = static_cast<int>(g.rows());

  // Reconstruction check for the underlying factorization.
  Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat rebuilt = svd.matrixU() * svd.singularValues().asDiagonal() *
                svd.matrixV().transpose();
  if ((rebuilt - g).norm() > 1e-9 * g.norm())
    throw NumericalFailure("cartan_projection: SVD reconstruction check failed");

  auto cum = detail::cumulative_log_sv(g);
  CartanVector mu(d);
  for (int k = 1; k <= d; ++k) mu(k - 1) = cum[k] - cum[k - 1];
  // The exterior route guarantees monotonicity up to rounding; clamp the dust.
  for (int k = 1; k < d; ++k) mu(k) = std::min(mu(k), mu(k - 1));
  return mu;
}

// mu(g^n) without forming g^n naively: each cumulative sum is the log top
// singular value of (ext_k g)^n, evaluated with scale tracking.
inline CartanVector cartan_projection_power(const Mat& g, std::uint64_t n) {
  require_invertible(g, "cartan_projection_power");
  int d = static_cast<int>(g.rows());
  std::vector<double> cum(d + 1, 0.0);
  for (int k = 1; k < d; ++k)
    cum[k] = log_top_sv_power(exterior_power(g, k), n);
  cum[d] = static_cast<double>(n) * log_abs_det(g);
  CartanVector mu(d);
  for (int k = 1; k <= d; ++k) mu(k - 1) = cum[k] - cum[k - 1];
  for (int k = 1; k < d; ++k) mu(k) = std::min(mu(k), mu(k - 1));
  return mu;
}

// Jordan projection lambda(g): log moduli of eigenvalues, nonincreasing.
// Dense QR-class eigensolver; intended for dim <= 8.
inline JordanVector jordan_projection(const Mat& g) {
  require_invertible(g, "jordan_projection");
  Eigen::EigenSolver<Mat> es(g, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("jordan_projection: eigensolver did not converge");
  int d = static_cast<int>(g.rows());
  JordanVector lam(d);
  for (int i = 0; i < d; ++i) lam(i) = std::log(std::abs(es.eigenvalues()(i)));
  std::sort(lam.data(), lam.data() + d, std::greater<double>());
  return lam;
}

// lambda_1 <= mu_1 with the gap correction: checks
//   mu_1(g) - |log(gap^2/2)| <= lambda_1(g) <= mu_1(g)
// with gap = d(x_g^+, X_g^-).  The upper bound always holds.  The lower
// bound holds in dim 2, and in general whenever g is quantitatively
// proximal — e.g. certified (gap/2, eps)-proximal for some eps, or under
// the cheaper sufficient condition
//   ||g restricted to X^-|| <= e^{lambda_1} (2 - gap) / (gap (1 + gap)),
// because the eps-Lipschitz bound at x^+ controls the restriction to the
// invariant complement.  A spectral gap alone does not: the block matrix
// diag(2, [[1/2, K], [0, 1/2]]) has gap 1 yet mu_1 - lambda_1 ~ log K, so
// `holds` is a reported verdict, not an assertion.
struct GapBoundResult {
  double lhs;
  double lambda1;
  double mu1;
  bool holds;
};

inline GapBoundResult gap_bound_check(const Mat& g, double gap) {
  if (!(gap > 0) || gap > 1)
    throw InvalidInput("gap_bound_check: gap must lie in (0, 1]");
  double mu1 = cartan_projection(g)(0);
  double l1 = jordan_projection(g)(0);
  double lhs = mu1 - std::fabs(std::log(gap * gap / 2.0));
  bool holds = lhs <= l1 + 1e-9 && l1 <= mu1 + 1e-9;
  return {lhs, l1, mu1, holds};
}

// ||mu(g1 g g2) - mu(g)|| <= ||mu(g1)|| + ||mu(g2)||; returns RHS - LHS.
inline double mu_subadditivity_check(const Mat& g1, const Mat& g, const Mat& g2) {
  CartanVector inner = cartan_projection(g);
  CartanVector outer = cartan_projection(g1 * g * g2);
  double lhs = (outer - inner).norm();
  double rhs = cartan_projection(g1).norm() + cartan_projection(g2).norm();
  return rhs - lhs;
}

// Closed forms for the unipotent u with u e1 = e1 + v, identity on a
// complement: the nontrivial singular values solve
// X^2 - (2 + |v|^2) X + 1 = 0, and the attracting flag gap is 1/sqrt(1+|v|^2).
struct UnipotentData {
  double mu1;
  double flag_gap;
};

inline UnipotentData unipotent_gap_formula(double v_norm) {
  if (v_norm < 0) throw InvalidInput("unipotent_gap_formula: negative norm");
  double v2 = v_norm * v_norm;
  double mu1 = 0.5 * std::log1p(0.5 * (v2 + std::sqrt(v2 * (4.0 + v2))));
  double gap = 1.0 / std::sqrt(1.0 + v2);
  return {mu1, gap};
}

// The matrix that realizes the formula above: column 1 is e1 + v.
inline Mat make_unipotent(int dim, const Vec& v) {
  if (v.size() != dim - 1)
    throw InvalidInput("make_unipotent: v must have dim-1 entries");
  Mat u = Mat::Identity(dim, dim);
  for (int i = 1; i < dim; ++i) u(i, 0) = v(i - 1);
  return u;
}

}  // namespace proxlab
