#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "proxlab/errors.hpp"
#include "proxlab/halfplane.hpp"
#include "proxlab/tree.hpp"
#include "proxlab/words.hpp"

namespace proxlab {

// Model-dispatching facade over the two concrete hyperbolic spaces.  Values
// carry their model's point representation; mixing representations across
// models is a ModelMismatch.

using SpacePoint = std::variant<Word, PlanePoint>;
using BoundaryPoint = std::variant<TreeBoundary, PlaneBoundary>;
using SpaceIsometry = std::variant<Word, Mobius>;

struct Space {
  std::variant<TreeModel, PlaneModel> model;

  explicit Space(TreeModel m) : model(std::move(m)) {}
  explicit Space(PlaneModel m) : model(std::move(m)) {}

  bool is_tree() const { return std::holds_alternative<TreeModel>(model); }
  const TreeModel& tree() const {
    if (!is_tree()) throw ModelMismatch("expected the tree model");
    return std::get<TreeModel>(model);
  }
  const PlaneModel& plane() const {
    if (is_tree()) throw ModelMismatch("expected the plane model");
    return std::get<PlaneModel>(model);
  }

  double delta() const { return is_tree() ? tree().delta : plane().delta; }
  double bourdon_base() const { return is_tree() ? tree().a : plane().a; }
  SpacePoint basepoint() const {
    if (is_tree()) return SpacePoint(tree().basepoint);
    return SpacePoint(plane().basepoint);
  }
};

namespace detail {

template <class T>
const T& expect(const std::variant<Word, PlanePoint>& p, const char* who) {
  if (!std::holds_alternative<T>(p))
    throw ModelMismatch(std::string(who) + ": point from the wrong model");
  return std::get<T>(p);
}

template <class T, class A, class B>
const T& expect_alt(const std::variant<A, B>& v, const char* who) {
  if (!std::holds_alternative<T>(v))
    throw ModelMismatch(std::string(who) + ": value from the wrong model");
  return std::get<T>(v);
}

}  // namespace detail

inline double distance(const Space& s, const SpacePoint& m,
                       const SpacePoint& p) {
  if (s.is_tree())
    return tree_distance(s.tree(), detail::expect<Word>(m, "distance"),
                         detail::expect<Word>(p, "distance"));
  return plane_distance(s.plane(), detail::expect<PlanePoint>(m, "distance"),
                        detail::expect<PlanePoint>(p, "distance"));
}

inline double gromov_product(const Space& s, const SpacePoint& m,
                             const SpacePoint& p, const SpacePoint& q) {
  return 0.5 * (distance(s, m, q) + distance(s, p, q) - distance(s, m, p));
}

inline double gromov_product_boundary(const Space& s, const BoundaryPoint& xi,
                                      const BoundaryPoint& eta,
                                      const SpacePoint& q) {
  if (s.is_tree())
    return tree_gromov_product_boundary(
        s.tree(), detail::expect_alt<TreeBoundary>(xi, "gromov_product_boundary"),
        detail::expect_alt<TreeBoundary>(eta, "gromov_product_boundary"),
        detail::expect<Word>(q, "gromov_product_boundary"));
  return plane_gromov_product_boundary(
      s.plane(), detail::expect_alt<PlaneBoundary>(xi, "gromov_product_boundary"),
      detail::expect_alt<PlaneBoundary>(eta, "gromov_product_boundary"),
      detail::expect<PlanePoint>(q, "gromov_product_boundary"));
}

inline double gromov_product_boundary(const Space& s, const SpacePoint& m,
                                      const BoundaryPoint& xi,
                                      const SpacePoint& q) {
  if (s.is_tree())
    return tree_gromov_product_boundary(
        s.tree(), detail::expect<Word>(m, "gromov_product_boundary"),
        detail::expect_alt<TreeBoundary>(xi, "gromov_product_boundary"),
        detail::expect<Word>(q, "gromov_product_boundary"));
  return plane_gromov_product_boundary(
      s.plane(), detail::expect<PlanePoint>(m, "gromov_product_boundary"),
      detail::expect_alt<PlaneBoundary>(xi, "gromov_product_boundary"),
      detail::expect<PlanePoint>(q, "gromov_product_boundary"));
}

inline double bourdon_distance(const Space& s, const BoundaryPoint& xi,
                               const BoundaryPoint& eta) {
  if (s.is_tree())
    return tree_bourdon_distance(
        s.tree(), detail::expect_alt<TreeBoundary>(xi, "bourdon_distance"),
        detail::expect_alt<TreeBoundary>(eta, "bourdon_distance"));
  return plane_bourdon_distance(
      s.plane(), detail::expect_alt<PlaneBoundary>(xi, "bourdon_distance"),
      detail::expect_alt<PlaneBoundary>(eta, "bourdon_distance"));
}

inline double busemann(const Space& s, const BoundaryPoint& x,
                       const SpacePoint& y, const SpacePoint& z) {
  return gromov_product_boundary(s, z, x, y) -
         gromov_product_boundary(s, y, x, z);
}

inline SpacePoint act(const Space& s, const SpaceIsometry& g,
                      const SpacePoint& p) {
  if (s.is_tree())
    return SpacePoint(tree_act(s.tree(), detail::expect_alt<Word>(g, "act"),
                               detail::expect<Word>(p, "act")));
  return SpacePoint(plane_act(detail::expect_alt<Mobius>(g, "act"),
                              detail::expect<PlanePoint>(p, "act")));
}

inline BoundaryPoint act(const Space& s, const SpaceIsometry& g,
                         const BoundaryPoint& x) {
  if (s.is_tree())
    return BoundaryPoint(tree_act(s.tree(), detail::expect_alt<Word>(g, "act"),
                                  detail::expect_alt<TreeBoundary>(x, "act")));
  return BoundaryPoint(plane_act(detail::expect_alt<Mobius>(g, "act"),
                                 detail::expect_alt<PlaneBoundary>(x, "act")));
}

// Gromov inequality slack at a chosen base: (m|p)_b - min((m|q)_b,(p|q)_b)
// + delta.  Exact word arithmetic makes a negative tree slack a hard bug.
inline double gromov_inequality_check(const Space& s, const SpacePoint& m,
                                      const SpacePoint& p, const SpacePoint& q,
                                      const SpacePoint& base) {
  double slack = gromov_product(s, m, p, base) -
                 std::min(gromov_product(s, m, q, base),
                          gromov_product(s, p, q, base)) +
                 s.delta();
  if (s.is_tree() && slack < 0)
    throw NumericalFailure("gromov_inequality_check: tree slack negative");
  return slack;
}

// Worst four-point defect over sampled triples against the model basepoint,
// floored at 0.  Deterministic: all triples up to a cap, then a fixed stride.
inline double estimate_delta(const Space& s,
                             const std::vector<SpacePoint>& samples) {
  std::size_t n = samples.size();
  if (n < 4) throw TooFewPoints("estimate_delta: need at least 4 points");
  SpacePoint o = s.basepoint();
  std::size_t stride = 1;
  while (n * n * n / (stride * stride * stride) > 300000) ++stride;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; i += stride)
    for (std::size_t j = i + 1; j < n; j += stride)
      for (std::size_t k = j + 1; k < n; k += stride) {
        const SpacePoint& m = samples[i];
        const SpacePoint& p = samples[j];
        const SpacePoint& q = samples[k];
        double mp = gromov_product(s, m, p, o);
        double mq = gromov_product(s, m, q, o);
        double pq = gromov_product(s, p, q, o);
        // All three roles of the excluded pair.
        worst = std::max(worst, std::min(mq, pq) - mp);
        worst = std::max(worst, std::min(mp, pq) - mq);
        worst = std::max(worst, std::min(mp, mq) - pq);
      }
  return worst;
}

// max |(o|x)_m + (m|x)_o - d(o,m)| over sampled pairs; identically 0 in
// both closed-form models, asserted exactly on the tree.
inline double dist_gromov_identity_constant(
    const Space& s,
    const std::vector<std::pair<SpacePoint, BoundaryPoint>>& samples) {
  if (samples.empty())
    throw TooFewPoints("dist_gromov_identity_constant: need samples");
  SpacePoint o = s.basepoint();
  double worst = 0.0;
  for (const auto& [m, x] : samples) {
    double v = std::fabs(gromov_product_boundary(s, o, x, m) +
                         gromov_product_boundary(s, m, x, o) -
                         distance(s, o, m));
    if (s.is_tree() && v != 0.0)
      throw NumericalFailure(
          "dist_gromov_identity_constant: tree identity not exact");
    worst = std::max(worst, v);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Model configuration (structured text)
// ---------------------------------------------------------------------------

inline nlohmann::json space_to_json(const Space& s) {
  nlohmann::json j;
  if (s.is_tree()) {
    j["model"] = "tree";
    j["rank"] = s.tree().rank;
    j["a"] = s.tree().a;
    j["basepoint"] = format_word(s.tree().basepoint);
  } else {
    j["model"] = "plane";
    j["a"] = s.plane().a;
    j["basepoint"] = {s.plane().basepoint.x, s.plane().basepoint.y};
    j["delta"] = s.plane().delta;
  }
  return j;
}

inline Space space_from_json(const nlohmann::json& j) {
  std::string kind = j.at("model").get<std::string>();
  if (kind == "tree") {
    TreeModel m(j.at("rank").get<int>(),
                j.value("a", 2.0),
                parse_word(j.value("basepoint", std::string("e"))));
    return Space(m);
  }
  if (kind == "plane") {
    PlanePoint o(0.0, 1.0);
    if (j.contains("basepoint"))
      o = PlanePoint(j["basepoint"].at(0).get<double>(),
                     j["basepoint"].at(1).get<double>());
    PlaneModel m(j.value("a", 2.718281828459045235), o, j.value("delta", 0.7));
    return Space(m);
  }
  throw InvalidInput("space_from_json: unknown model '" + kind + "'");
}

}  // namespace proxlab
