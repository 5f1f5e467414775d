#pragma once

// Minimal quadruple-precision toolkit.  Certificate measurements routinely
// probe distances around 1e-20 (strongly contracted samples crowd together
// far below the double-precision noise floor of the matrix action), so the
// sampling pipeline evaluates images, distances, and fixed data in
// __float128 and narrows only the final readings.

#include <quadmath.h>

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "proxlab/errors.hpp"
#include "proxlab/linalg.hpp"

namespace proxlab {

using qd = __float128;

using QVec = std::vector<qd>;

struct QMat {
  int n = 0;
  std::vector<qd> a;  // row-major
  qd& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  qd at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

inline QMat q_from(const Mat& m) {
  QMat q;
  q.n = static_cast<int>(m.rows());
  q.a.resize(static_cast<std::size_t>(q.n) * q.n);
  for (int i = 0; i < q.n; ++i)
    for (int j = 0; j < q.n; ++j) q.at(i, j) = m(i, j);
  return q;
}

inline QVec q_from(const Vec& v) {
  QVec q(v.size());
  for (int i = 0; i < v.size(); ++i) q[i] = v(i);
  return q;
}

inline QMat q_transpose(const QMat& m) {
  QMat t;
  t.n = m.n;
  t.a.resize(m.a.size());
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) t.at(i, j) = m.at(j, i);
  return t;
}

inline QVec q_mul(const QMat& m, const QVec& v) {
  QVec out(m.n, 0);
  for (int i = 0; i < m.n; ++i) {
    qd acc = 0;
    for (int j = 0; j < m.n; ++j) acc += m.at(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

inline qd q_dot(const QVec& a, const QVec& b) {
  qd acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline qd q_norm(const QVec& a) { return sqrtq(q_dot(a, a)); }

inline void q_normalize(QVec& a) {
  qd n = q_norm(a);
  if (n == 0) throw NumericalFailure("q_normalize: zero vector");
  for (auto& x : a) x /= n;
}

// sin of the angle between the lines spanned by unit vectors a and b,
// via the orthogonal-component norm (no cancellation at tiny angles).
inline qd q_proj_distance(const QVec& a, const QVec& b) {
  qd c = q_dot(a, b);
  QVec orth(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) orth[i] = a[i] - c * b[i];
  qd s = q_norm(orth);
  return s > 1 ? qd(1) : s;
}

inline qd q_point_hyperplane(const QVec& p, const QVec& normal) {
  qd d = fabsq(q_dot(p, normal));
  return d > 1 ? qd(1) : d;
}

// Power iteration refinement of a dominant direction, starting from a seed
// (typically the double-precision eigenvector).  Converges at the modulus
// ratio of the top two eigenvalues; stops once the Rayleigh residual is
// negligible at quad scale.  Returns the seed unchanged if iteration brings
// no improvement (weak gaps), which keeps the caller's semantics monotone.
inline QVec q_refine_dominant(const QMat& m, QVec seed, int max_iters = 512) {
  q_normalize(seed);
  QVec v = seed;
  qd best_res = -1;
  QVec best = v;
  for (int it = 0; it < max_iters; ++it) {
    QVec w = q_mul(m, v);
    qd n = q_norm(w);
    if (n == 0) break;
    for (auto& x : w) x /= n;
    // Residual of w as an eigendirection: |m w - rho w| / |m w|.
    QVec mw = q_mul(m, w);
    qd rho = q_dot(mw, w);
    QVec res(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) res[i] = mw[i] - rho * w[i];
    qd r = q_norm(res) / q_norm(mw);
    if (best_res < 0 || r < best_res) {
      best_res = r;
      best = w;
    }
    v = w;
    if (r < 1e-31) break;
  }
  return best;
}

}  // namespace proxlab
