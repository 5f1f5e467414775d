#pragma once

// Independent oracles used only by the test suites.  Each one recomputes a
// quantity through a route the library does not take, so agreement is
// evidence rather than tautology.

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "proxlab/linalg.hpp"
#include "proxlab/rng.hpp"

namespace oracles {

using proxlab::Mat;
using proxlab::Vec;

// Singular values of a 2x2 via the quadratic formula on g^T g.
inline std::pair<double, double> svd2(double a, double b, double c, double d) {
  double t = a * a + b * b + c * c + d * d;      // trace of g^T g
  double det = a * d - b * c;                    // det g
  double disc = std::sqrt(std::max(0.0, t * t - 4.0 * det * det));
  double l1 = (t + disc) / 2.0;
  double l2 = (t - disc) / 2.0;
  if (l2 < 0) l2 = 0;
  return {std::sqrt(l1), std::sqrt(l2)};
}

// Eigenvalue moduli of a 2x2 via the characteristic quadratic.
inline std::pair<double, double> eig2_moduli(double a, double b, double c,
                                             double d) {
  double tr = a + d;
  double det = a * d - b * c;
  double disc = tr * tr - 4.0 * det;
  double m1, m2;
  if (disc >= 0) {
    double r = std::sqrt(disc);
    m1 = std::fabs((tr + r) / 2.0);
    m2 = std::fabs((tr - r) / 2.0);
  } else {
    // Complex pair: common modulus sqrt(det).
    m1 = m2 = std::sqrt(std::fabs(det));
  }
  if (m1 < m2) std::swap(m1, m2);
  return {m1, m2};
}

// Dominant eigendirection by plain power iteration (no eigensolver).
inline Vec power_iteration(const Mat& g, int iters = 4000) {
  Vec v = Vec::Ones(g.rows());
  v.normalize();
  for (int i = 0; i < iters; ++i) {
    v = g * v;
    double n = v.norm();
    if (n == 0) break;
    v /= n;
  }
  // Canonical sign: first sizable coordinate positive.
  for (int i = 0; i < v.size(); ++i)
    if (std::fabs(v(i)) > 1e-12) {
      if (v(i) < 0) v = -v;
      break;
    }
  return v;
}

// Projective distance straight from the definition sin = sqrt(1 - cos^2).
inline double proj_distance_def(const Vec& a, const Vec& b) {
  double c = a.normalized().dot(b.normalized());
  double s2 = 1.0 - c * c;
  return s2 <= 0 ? 0.0 : std::sqrt(s2);
}

// Random matrix with entries uniform in [-scale, scale], regenerated until
// |det| clears the floor.
inline Mat random_matrix(proxlab::CounterRng& rng, int dim, double scale,
                         double det_floor) {
  while (true) {
    Mat g(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) g(i, j) = rng.uniform(-scale, scale);
    if (std::fabs(g.determinant()) >= det_floor) return g;
  }
}

}  // namespace oracles
