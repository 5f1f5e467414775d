#pragma once

// Classification and length functions for isometries of the two bundled
// models: elliptic/parabolic/hyperbolic kind, boundary fixed points,
// displacement, and stable (translation) length with its power surrogate.

#include <cmath>
#include <json.hpp>
#include <string>
#include <vector>

#include "proxlab/space.hpp"

namespace proxlab {

enum class IsometryKind { Elliptic, Parabolic, Hyperbolic };

inline const char* isometry_kind_name(IsometryKind k) {
  switch (k) {
    case IsometryKind::Elliptic: return "elliptic";
    case IsometryKind::Parabolic: return "parabolic";
    default: return "hyperbolic";
  }
}

// Hyperbolic: fixed_points = {attracting, repelling}. Parabolic: one
// point. Elliptic: none on the boundary.
struct IsometryClass {
  IsometryKind kind;
  std::vector<BoundaryPoint> fixed_points;
};

// d(o, g o), the displacement of the basepoint.
inline double displacement(const Space& s, const SpaceIsometry& g) {
  SpacePoint o = s.basepoint();
  return distance(s, o, act(s, g, o));
}

inline SpaceIsometry compose(const Space& s, const SpaceIsometry& g,
                             const SpaceIsometry& h) {
  if (s.is_tree())
    return SpaceIsometry(detail::expect_alt<Word>(g, "compose") *
                         detail::expect_alt<Word>(h, "compose"));
  return SpaceIsometry(detail::expect_alt<Mobius>(g, "compose") *
                       detail::expect_alt<Mobius>(h, "compose"));
}

inline SpaceIsometry inverse(const Space& s, const SpaceIsometry& g) {
  if (s.is_tree())
    return SpaceIsometry(detail::expect_alt<Word>(g, "inverse").inverse());
  return SpaceIsometry(detail::expect_alt<Mobius>(g, "inverse").inverse());
}

inline Mobius mobius_power(Mobius g, int n) {
  if (n < 0) {
    g = g.inverse();
    n = -n;
  }
  Mobius acc(1.0, 0.0, 0.0, 1.0);
  while (n > 0) {
    if (n & 1) acc = acc * g;
    n >>= 1;
    if (n) g = g * g;
    if (!std::isfinite(acc.a) || !std::isfinite(acc.b) ||
        !std::isfinite(acc.c) || !std::isfinite(acc.d))
      throw NumericalFailure("mobius_power: entries overflowed");
  }
  return acc;
}

inline SpaceIsometry isometry_power(const Space& s, const SpaceIsometry& g,
                                    int n) {
  if (s.is_tree())
    return SpaceIsometry(word_power(detail::expect_alt<Word>(g, "power"), n));
  return SpaceIsometry(mobius_power(detail::expect_alt<Mobius>(g, "power"), n));
}

namespace detail {

inline IsometryClass classify_tree(const TreeModel& M, const Word& g) {
  M.require_point(g, "classify_isometry");
  CyclicDecomposition dec = cyclic_decomposition(g);
  if (dec.core.empty()) return IsometryClass{IsometryKind::Elliptic, {}};
  // Axis endpoints: conj . core^inf and conj . core^-inf.
  TreeBoundary plus(dec.conj, dec.core);
  TreeBoundary minus(dec.conj, dec.core.inverse());
  return IsometryClass{IsometryKind::Hyperbolic,
                       {BoundaryPoint(plus), BoundaryPoint(minus)}};
}

inline IsometryClass classify_plane(const Mobius& g) {
  double tr = std::fabs(g.trace());
  // Identity (up to sign) fixes everything: elliptic, no boundary data.
  if (std::fabs(g.b) <= tol::tau_trace && std::fabs(g.c) <= tol::tau_trace &&
      std::fabs(g.a - g.d) <= tol::tau_trace)
    return IsometryClass{IsometryKind::Elliptic, {}};
  if (tr < 2.0 - tol::tau_trace)
    return IsometryClass{IsometryKind::Elliptic, {}};
  if (tr <= 2.0 + tol::tau_trace) {
    PlaneBoundary fix = (std::fabs(g.c) <= tol::tau_trace)
                            ? PlaneBoundary::infinity()
                            : PlaneBoundary::at((g.a - g.d) / (2.0 * g.c));
    return IsometryClass{IsometryKind::Parabolic, {BoundaryPoint(fix)}};
  }
  // Hyperbolic: fixed points solve c t^2 + (d - a) t - b = 0.
  if (std::fabs(g.c) <= tol::tau_trace) {
    PlaneBoundary inf = PlaneBoundary::infinity();
    PlaneBoundary fin = PlaneBoundary::at(g.b / (g.d - g.a));
    bool inf_attracts = std::fabs(g.a) > std::fabs(g.d);
    return inf_attracts ? IsometryClass{IsometryKind::Hyperbolic,
                                        {BoundaryPoint(inf), BoundaryPoint(fin)}}
                        : IsometryClass{IsometryKind::Hyperbolic,
                                        {BoundaryPoint(fin), BoundaryPoint(inf)}};
  }
  double s_tr = g.a + g.d;
  double disc = std::sqrt(s_tr * s_tr - 4.0);
  double t1 = (g.a - g.d + disc) / (2.0 * g.c);
  double t2 = (g.a - g.d - disc) / (2.0 * g.c);
  // Attracting fixed point has Mobius derivative 1/(c t + d)^2 < 1.
  double attract1 = std::fabs(g.c * t1 + g.d);
  PlaneBoundary p1 = PlaneBoundary::at(t1), p2 = PlaneBoundary::at(t2);
  if (attract1 > 1.0)
    return IsometryClass{IsometryKind::Hyperbolic,
                         {BoundaryPoint(p1), BoundaryPoint(p2)}};
  return IsometryClass{IsometryKind::Hyperbolic,
                       {BoundaryPoint(p2), BoundaryPoint(p1)}};
}

}  // namespace detail

// n_probe is part of the interface for forward compatibility with models
// lacking closed forms; both bundled models classify exactly.
inline IsometryClass classify_isometry(const Space& s, const SpaceIsometry& g,
                                       int n_probe = 8) {
  if (n_probe < 8) throw InvalidInput("classify_isometry: n_probe must be >= 8");
  if (s.is_tree())
    return detail::classify_tree(s.tree(),
                                 detail::expect_alt<Word>(g, "classify"));
  return detail::classify_plane(detail::expect_alt<Mobius>(g, "classify"));
}

namespace detail {

// Exact translation length where the model admits one; throws
// NotHyperbolic on elliptic/parabolic input only when required = true.
inline double exact_stable_length(const Space& s, const SpaceIsometry& g,
                                  bool& has_exact) {
  has_exact = true;
  if (s.is_tree())
    return static_cast<double>(
        cyclic_decomposition(expect_alt<Word>(g, "stable_length")).core.size());
  const Mobius& m = expect_alt<Mobius>(g, "stable_length");
  double tr = std::fabs(m.trace());
  if (tr > 2.0 + tol::tau_trace) return 2.0 * std::acosh(tr / 2.0);
  has_exact = false;
  return 0.0;
}

}  // namespace detail

// liminf_n d(o, g^n o)/n, approximated by the minimum over the top half
// of the power range, cross-checked against the exact value when the
// model provides one.
inline double stable_length(const Space& s, const SpaceIsometry& g,
                            int n_max = 64) {
  if (n_max < 8) throw InvalidInput("stable_length: n_max must be >= 8");
  double surrogate = std::numeric_limits<double>::infinity();
  for (int n = n_max / 2; n <= n_max; ++n) {
    double d = displacement(s, isometry_power(s, g, n));
    surrogate = std::min(surrogate, d / n);
  }
  bool has_exact = false;
  double exact = detail::exact_stable_length(s, g, has_exact);
  if (!has_exact) return surrogate;
  if (s.is_tree()) {
    // d(o, g^n o) = n len(core) + 2 len(conjugator) exactly, so the
    // surrogate sits at exact + 2 len(conj)/n_max.
    double conj = (displacement(s, g) - exact) / 2.0;
    if (std::fabs(surrogate - exact - 2.0 * conj / n_max) > 1e-12)
      throw NumericalFailure("stable_length: tree surrogate disagrees");
    return exact;
  }
  double slack = 4.0 * s.delta() / n_max + 1e-6;
  if (surrogate < exact - slack || surrogate > exact + 2.0 * displacement(s, g) / n_max + slack)
    throw NumericalFailure(
        "stable_length: surrogate did not converge at this n_max; basepoint "
        "may be far from the axis, increase n_max");
  return exact;
}

// Slack of | |g1 g g2| - |g| | <= |g1| + |g2|, nonnegative when the
// inequality holds (exactly on the tree, to roundoff on the plane).
inline double length_subadditivity_check(const Space& s, const SpaceIsometry& g1,
                                         const SpaceIsometry& g,
                                         const SpaceIsometry& g2) {
  double lhs = std::fabs(
      displacement(s, compose(s, compose(s, g1, g), g2)) - displacement(s, g));
  return displacement(s, g1) + displacement(s, g2) - lhs;
}

inline nlohmann::json isometry_to_json(const Space& s, const SpaceIsometry& g) {
  if (s.is_tree())
    return nlohmann::json(
        format_word(detail::expect_alt<Word>(g, "isometry_to_json")));
  const Mobius& m = detail::expect_alt<Mobius>(g, "isometry_to_json");
  return nlohmann::json{{"mat", {{m.a, m.b}, {m.c, m.d}}}};
}

inline SpaceIsometry isometry_from_json(const Space& s,
                                        const nlohmann::json& j) {
  if (s.is_tree()) {
    if (!j.is_string())
      throw InvalidInput("isometry_from_json: tree isometries are word strings");
    return SpaceIsometry(parse_word(j.get<std::string>()));
  }
  if (!j.contains("mat"))
    throw InvalidInput("isometry_from_json: plane isometries need a mat field");
  auto rows = j.at("mat");
  if (!rows.is_array() || rows.size() != 2 || rows[0].size() != 2 ||
      rows[1].size() != 2)
    throw InvalidInput("isometry_from_json: mat must be 2x2");
  return SpaceIsometry(Mobius(rows[0][0].get<double>(), rows[0][1].get<double>(),
                              rows[1][0].get<double>(), rows[1][1].get<double>()));
}

}  // namespace proxlab
