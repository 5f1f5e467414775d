#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "proxlab/errors.hpp"
#include "proxlab/numeric.hpp"

namespace proxlab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Singular values, nonincreasing.
inline Vec singular_values(const Mat& g) {
  Eigen::JacobiSVD<Mat> svd(g);
  return svd.singularValues();
}

// Throws SingularMatrix unless |det g| >= tau_det_factor * sigma_1^dim,
// i.e. the product of the singular-value ratios sigma_i/sigma_1 stays above
// the relative floor.  This separates genuine degeneracy from float noise.
inline void require_invertible(const Mat& g, const std::string& who) {
  if (g.rows() != g.cols() || g.rows() < 2)
    throw InvalidInput(who + ": matrix must be square with dim >= 2");
  Vec sv = singular_values(g);
  double s1 = sv(0);
  if (!(s1 > 0) || !std::isfinite(s1))
    throw SingularMatrix(who + ": zero or non-finite matrix");
  double rel = 1.0;
  for (int i = 0; i < sv.size(); ++i) rel *= sv(i) / s1;
  if (rel < tol::tau_det_factor)
    throw SingularMatrix(who + ": |det| below tolerance, relative value " +
                         format_real(rel));
}

// log|det g| through Householder QR: stable across the full dynamic range of
// the factors, unlike multiplying eigen- or singular values directly.
inline double log_abs_det(const Mat& g) {
  Eigen::HouseholderQR<Mat> qr(g);
  double acc = 0;
  Mat r = qr.matrixQR();
  for (int i = 0; i < g.rows(); ++i) {
    double d = std::fabs(r(i, i));
    if (!(d > 0)) throw SingularMatrix("log_abs_det: zero pivot");
    acc += std::log(d);
  }
  return acc;
}

// Sorted k-subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<int>> k_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  if (k == 0) return {{}};
  if (k > n) return out;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

// k-th exterior power: entry (S,T) is the minor det(g[S,T]) over sorted
// k-subsets in lexicographic order.  Multiplicative: ext(gh) = ext(g)ext(h).
inline Mat exterior_power(const Mat& g, int k) {
  auto subs = k_subsets(static_cast<int>(g.rows()), k);
  int m = static_cast<int>(subs.size());
  Mat out(m, m);
  Mat minor(k, k);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) minor(i, j) = g(subs[a][i], subs[b][j]);
      out(a, b) = k == 1 ? minor(0, 0) : minor.determinant();
    }
  return out;
}

// g^n together with a separate log scale, so powers of strongly expanding
// matrices never overflow: result.scaled * exp(result.log_scale) = g^n.
struct ScaledPower {
  Mat scaled;
  double log_scale = 0;
};

inline ScaledPower scaled_power(Mat base, std::uint64_t n) {
  ScaledPower acc{Mat::Identity(base.rows(), base.cols()), 0.0};
  double base_scale = 0;
  auto renorm = [](Mat& m, double& logs) {
    double top = m.cwiseAbs().maxCoeff();
    if (top > 0 && (top > 1e100 || top < 1e-100)) {
      m /= top;
      logs += std::log(top);
    }
  };
  while (n > 0) {
    if (n & 1) {
      acc.scaled = acc.scaled * base;
      acc.log_scale += base_scale;
      renorm(acc.scaled, acc.log_scale);
    }
    n >>= 1;
    if (n == 0) break;
    base = base * base;
    base_scale *= 2;
    renorm(base, base_scale);
  }
  return acc;
}

// log of the top singular value of g^n, computed through the scaled power so
// the answer stays accurate far beyond the overflow range.
inline double log_top_sv_power(const Mat& g, std::uint64_t n) {
  ScaledPower p = scaled_power(g, n);
  return std::log(singular_values(p.scaled)(0)) + p.log_scale;
}

}  // namespace proxlab
