#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "proxlab/errors.hpp"
#include "proxlab/words.hpp"

namespace proxlab {

// Cayley tree of the rank-k free group with the word metric: the simplest
// 0-hyperbolic space.  All products and boundary quantities are exact
// integer (or half-integer) arithmetic.

// Boundary point: eventually periodic infinite reduced word, stored in the
// canonical encoding (minimal preperiod, primitive repetend).  The sequence
// prefix . repeat^infinity determines the point; canonical encodings make
// equality a field comparison.
struct TreeBoundary {
  Word prefix;
  Word repeat;

  TreeBoundary(Word pre, Word rep) : prefix(std::move(pre)), repeat(std::move(rep)) {
    if (repeat.empty())
      throw InvalidInput("TreeBoundary: repetend must be nonempty");
    if (repeat.letters.front() == -repeat.letters.back() && repeat.size() > 1)
      throw InvalidInput("TreeBoundary: repetend must be cyclically reduced");
    // Cancel the junction: a prefix letter that is inverse to the repetend's
    // first letter absorbs one rotation of the infinite tail.
    while (!prefix.empty() && prefix.letters.back() == -repeat.letters.front()) {
      prefix.letters.pop_back();
      std::rotate(repeat.letters.begin(), repeat.letters.begin() + 1,
                  repeat.letters.end());
    }
    // Primitive repetend: smallest period of the cyclic word.
    int m = repeat.size();
    for (int d = 1; d <= m / 2; ++d) {
      if (m % d != 0) continue;
      bool periodic = true;
      for (int i = d; i < m && periodic; ++i)
        periodic = repeat.letters[i] == repeat.letters[i - d];
      if (periodic) {
        repeat.letters.resize(d);
        break;
      }
    }
    // Minimal preperiod: a prefix letter equal to the repetend's last letter
    // can be folded into the periodic part.
    while (!prefix.empty() && prefix.letters.back() == repeat.letters.back()) {
      prefix.letters.pop_back();
      std::rotate(repeat.letters.begin(), repeat.letters.end() - 1,
                  repeat.letters.end());
    }
  }

  bool operator==(const TreeBoundary& o) const {
    return prefix == o.prefix && repeat == o.repeat;
  }
  bool operator!=(const TreeBoundary& o) const { return !(*this == o); }

  // i-th letter of the infinite word, 0-based.
  int letter(long long i) const {
    if (i < prefix.size()) return prefix.letters[static_cast<std::size_t>(i)];
    return repeat.letters[static_cast<std::size_t>((i - prefix.size()) %
                                                   repeat.size())];
  }

  int max_generator() const {
    return std::max(prefix.max_generator(), repeat.max_generator());
  }
};

struct TreeModel {
  int rank;
  double a;        // Bourdon base; any a > 1 is admissible since delta = 0
  Word basepoint;  // o
  double delta = 0.0;
  // Calibration constants, verified by the dynamics sweeps: the
  // distance/product identity defect (exactly zero on a tree) and the
  // stable-length sandwich defect (zero by the cyclic-decomposition
  // identity |g| = len(core) + 2 len(conj), (x-|x+)_o = len(conj)).
  double C = 0.0;
  double Cprime = 0.0;

  // Shadow constant: complement of Shad_{g^-1 o}(o, sigma) has Bourdon
  // diameter <= Dprime * a^-sigma, and g is Dprime * a^(2 sigma - |g|)
  // Lipschitz on that shadow. The ultrametric makes the raw Lipschitz
  // constant exactly 1, so only the a^(C+delta) term can contribute.
  double Dprime() const { return std::max(1.0, std::pow(a, C + delta)); }

  explicit TreeModel(int k = 2, double base = 2.0, Word o = Word())
      : rank(k), a(base), basepoint(std::move(o)) {
    if (k < 2) throw InvalidInput("TreeModel: rank must be >= 2");
    if (!(base > 1.0)) throw InvalidInput("TreeModel: Bourdon base must be > 1");
    require_point(basepoint, "TreeModel basepoint");
  }

  void require_point(const Word& w, const std::string& who) const {
    if (w.max_generator() > rank)
      throw InvalidInput(who + ": generator index exceeds rank");
  }
  void require_boundary(const TreeBoundary& x, const std::string& who) const {
    if (x.max_generator() > rank)
      throw InvalidInput(who + ": generator index exceeds rank");
  }
};

// ---------------------------------------------------------------------------
// Metric and Gromov products (all exact)
// ---------------------------------------------------------------------------

inline double tree_distance(const TreeModel& m, const Word& u, const Word& v) {
  m.require_point(u, "tree_distance");
  m.require_point(v, "tree_distance");
  return static_cast<double>((u.inverse() * v).size());
}

inline double tree_gromov_product(const TreeModel& M, const Word& m,
                                  const Word& p, const Word& q) {
  return 0.5 * (tree_distance(M, m, q) + tree_distance(M, p, q) -
                tree_distance(M, m, p));
}

// Left action of the group on vertices and on boundary points.
inline Word tree_act(const TreeModel& M, const Word& g, const Word& p) {
  M.require_point(g, "tree_act");
  M.require_point(p, "tree_act");
  return g * p;
}

inline TreeBoundary tree_act(const TreeModel& M, const Word& g,
                             const TreeBoundary& x) {
  M.require_point(g, "tree_act");
  M.require_boundary(x, "tree_act");
  // The constructor absorbs any cancellation between the translated prefix
  // and the repetend.
  return TreeBoundary(g * x.prefix, x.repeat);
}

namespace detail {

// Longest common prefix of two infinite reduced words, given that they are
// distinct: they must differ within max(prefix lengths) + lcm(periods).
inline long long common_prefix_length(const TreeBoundary& x,
                                      const TreeBoundary& y) {
  long long lcm = std::lcm<long long>(x.repeat.size(), y.repeat.size());
  long long bound =
      std::max(x.prefix.size(), y.prefix.size()) + lcm + 1;
  for (long long i = 0; i < bound; ++i)
    if (x.letter(i) != y.letter(i)) return i;
  throw NumericalFailure(
      "common_prefix_length: distinct encodings never diverged");
}

// Longest common prefix of a finite reduced word and an infinite one.
inline long long common_prefix_length(const Word& u, const TreeBoundary& x) {
  for (int i = 0; i < u.size(); ++i)
    if (u.letters[i] != x.letter(i)) return i;
  return u.size();
}

}  // namespace detail

// (xi | eta)_q: length of the common prefix of the two rays leaving q.
// Returns +infinity for equal boundary points.
inline double tree_gromov_product_boundary(const TreeModel& M,
                                           const TreeBoundary& xi,
                                           const TreeBoundary& eta,
                                           const Word& q) {
  M.require_boundary(xi, "tree_gromov_product_boundary");
  M.require_boundary(eta, "tree_gromov_product_boundary");
  M.require_point(q, "tree_gromov_product_boundary");
  Word qinv = q.inverse();
  TreeBoundary xs = tree_act(M, qinv, xi);
  TreeBoundary ys = tree_act(M, qinv, eta);
  if (xs == ys) return std::numeric_limits<double>::infinity();
  return static_cast<double>(detail::common_prefix_length(xs, ys));
}

// (m | xi)_q with one interior argument.
inline double tree_gromov_product_boundary(const TreeModel& M, const Word& m,
                                           const TreeBoundary& xi,
                                           const Word& q) {
  M.require_point(m, "tree_gromov_product_boundary");
  M.require_boundary(xi, "tree_gromov_product_boundary");
  M.require_point(q, "tree_gromov_product_boundary");
  Word qinv = q.inverse();
  return static_cast<double>(
      detail::common_prefix_length(qinv * m, tree_act(M, qinv, xi)));
}

inline double tree_bourdon_distance(const TreeModel& M, const TreeBoundary& xi,
                                    const TreeBoundary& eta) {
  if (xi == eta) return 0.0;
  double prod = tree_gromov_product_boundary(M, xi, eta, M.basepoint);
  // Ultrametric: the chain infimum in the Bourdon construction is attained
  // by the direct jump, so the bound a^{-(xi|eta)_o} is the exact metric.
  return std::pow(M.a, -prod);
}

// B_x(y, z) = (z|x)_y - (y|x)_z, exact integer on the tree.
inline double tree_busemann(const TreeModel& M, const TreeBoundary& x,
                            const Word& y, const Word& z) {
  return tree_gromov_product_boundary(M, z, x, y) -
         tree_gromov_product_boundary(M, y, x, z);
}

}  // namespace proxlab
