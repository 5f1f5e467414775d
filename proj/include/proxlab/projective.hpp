#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "proxlab/errors.hpp"
#include "proxlab/linalg.hpp"
#include "proxlab/numeric.hpp"
#include "proxlab/rng.hpp"

namespace proxlab {

// Canonical representative of a projective class: unit norm, first coordinate
// above the canonicalization threshold made positive.  Keeps equality and
// hashing deterministic across code paths.
inline Vec canonicalize_direction(Vec v) {
  double n = v.norm();
  if (!(n > 0) || !std::isfinite(n))
    throw InvalidInput("canonicalize_direction: zero or non-finite vector");
  v /= n;
  for (int i = 0; i < v.size(); ++i) {
    if (std::fabs(v(i)) > tol::canon_tol) {
      if (v(i) < 0) v = -v;
      break;
    }
  }
  return v;
}

// Point of P(V), stored as a canonical unit vector.
struct ProjPoint {
  Vec v;
  explicit ProjPoint(Vec raw) : v(canonicalize_direction(std::move(raw))) {}
  int dim() const { return static_cast<int>(v.size()); }
};

// Projective hyperplane, stored by its canonical unit normal.
struct ProjHyperplane {
  Vec normal;
  explicit ProjHyperplane(Vec raw) : normal(canonicalize_direction(std::move(raw))) {}
  int dim() const { return static_cast<int>(normal.size()); }
};

// Attracting point plus repelling hyperplane of a (would-be) proximal map.
struct ProjFlag {
  ProjPoint attractor;
  ProjHyperplane repellor;
};

// d([v],[w]) = sin of the angle between the lines.  Computed as the norm of
// the component of v orthogonal to w, which stays accurate for tiny angles
// where sqrt(1 - <v,w>^2) would cancel.
inline double proj_distance(const ProjPoint& a, const ProjPoint& b) {
  double c = a.v.dot(b.v);
  Vec orth = a.v - c * b.v;
  double s = orth.norm();
  return s > 1.0 ? 1.0 : s;
}

// Distance from a point to a hyperplane: |<vector, normal>| for unit inputs.
inline double point_hyperplane_distance(const ProjPoint& p, const ProjHyperplane& h) {
  double d = std::fabs(p.v.dot(h.normal));
  return d > 1.0 ? 1.0 : d;
}

// Distance from a point to the projective subspace spanned by the (linearly
// independent) columns of basis: norm of the orthogonal residual.
inline double point_subspace_distance(const ProjPoint& p, const Mat& basis) {
  Eigen::HouseholderQR<Mat> qr(basis);
  Mat q = qr.householderQ() * Mat::Identity(basis.rows(), basis.cols());
  Vec res = p.v - q * (q.transpose() * p.v);
  double s = res.norm();
  return s > 1.0 ? 1.0 : s;
}

// Operator norm of g restricted to the hyperplane {<v, n> = 0}, expressed
// in an orthonormal basis of the hyperplane.  Meaningful as a restriction
// norm when the hyperplane is g-invariant.
inline double restriction_norm(const Mat& g, const ProjHyperplane& h) {
  int d = static_cast<int>(g.rows());
  Mat n(d, 1);
  n.col(0) = h.normal;
  Eigen::HouseholderQR<Mat> qr(n);
  Mat q = qr.householderQ() * Mat::Identity(d, d);
  Mat basis = q.rightCols(d - 1);
  Mat a = basis.transpose() * g * basis;
  return singular_values(a)(0);
}

// Linear action on points and the contragredient action on hyperplanes:
// g.{v: <v,n> = 0} has normal g^{-T} n.
inline ProjPoint act(const Mat& g, const ProjPoint& p) {
  return ProjPoint(g * p.v);
}

inline ProjHyperplane act(const Mat& g, const ProjHyperplane& h) {
  return ProjHyperplane(g.transpose().fullPivLu().solve(h.normal));
}

// Deterministic cover of the sphere: a Kronecker (additive) low-discrepancy
// sequence pushed through Box-Muller.  For dim 2 an exact angular grid of the
// projective circle is used instead.
inline std::vector<ProjPoint> sphere_grid(int dim, int count) {
  std::vector<ProjPoint> out;
  out.reserve(count);
  if (dim == 2) {
    for (int i = 0; i < count; ++i) {
      double th = 3.14159265358979323846 * (i + 0.5) / count;
      out.emplace_back(Vec{{std::cos(th), std::sin(th)}});
    }
    return out;
  }
  // Generalized golden-ratio increments (Roberts' R_d sequence).
  int m = 2 * ((dim + 1) / 2);
  double phi = 1.0;
  for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (m + 1));
  std::vector<double> alpha(m), state(m, 0.5);
  for (int j = 0; j < m; ++j) alpha[j] = std::fmod(1.0 / std::pow(phi, j + 1), 1.0);
  for (int i = 0; i < count; ++i) {
    Vec v(dim);
    for (int j = 0; j < m; ++j) state[j] = std::fmod(state[j] + alpha[j], 1.0);
    for (int j = 0; j < dim; j += 2) {
      double u1 = state[j] <= 0 ? 0x1.0p-53 : state[j];
      double u2 = state[j + 1];
      double r = std::sqrt(-2.0 * std::log(u1));
      v(j) = r * std::cos(6.283185307179586477 * u2);
      if (j + 1 < dim) v(j + 1) = r * std::sin(6.283185307179586477 * u2);
    }
    if (v.norm() < 1e-8) v(0) = 1.0;
    out.emplace_back(std::move(v));
  }
  return out;
}

// Pseudo-random points on the sphere from the counter-based generator.
inline std::vector<ProjPoint> sphere_random(int dim, int count, CounterRng rng) {
  std::vector<ProjPoint> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vec v(dim);
    do {
      for (int j = 0; j < dim; ++j) v(j) = rng.normal();
    } while (v.norm() < 1e-8);
    out.emplace_back(std::move(v));
  }
  return out;
}

}  // namespace proxlab
