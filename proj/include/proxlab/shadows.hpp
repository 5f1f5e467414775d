#pragma once

// Shadows on the boundary at infinity, canonical attractor selection,
// (r,eps)-proximality certification in the Bourdon metric, and the
// quantitative length/threshold checks built on top of them.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "proxlab/isometry.hpp"
#include "proxlab/rng.hpp"
#include "proxlab/verdict.hpp"

namespace proxlab {

struct ShadowSpec {
  SpacePoint light;
  SpacePoint occluder;
  double sigma;

  ShadowSpec(SpacePoint m, SpacePoint p, double s)
      : light(std::move(m)), occluder(std::move(p)), sigma(s) {
    if (!(sigma > 0.0)) throw InvalidInput("ShadowSpec: sigma must be > 0");
  }
};

// Shad_m(p, sigma) = { x : (m|x)_p <= sigma }.
inline bool shadow_contains(const Space& s, const ShadowSpec& spec,
                            const BoundaryPoint& xi) {
  return gromov_product_boundary(s, spec.light, xi, spec.occluder) <=
         spec.sigma;
}

// One row of a shadow-diameter report: measured diameter of a sampled
// set against its theoretical bound.
struct ShadowRow {
  double sigma;
  double d;  // relevant displacement d(o, p)
  double diameter;
  double bound;
  double slack;  // bound - diameter
};

inline std::string shadow_csv_header() { return "sigma,d,diameter,bound,slack"; }

inline std::string to_csv(const ShadowRow& r) {
  return format_real(r.sigma) + "," + format_real(r.d) + "," +
         format_real(r.diameter) + "," + format_real(r.bound) + "," +
         format_real(r.slack);
}

struct ShadowLemmaReport {
  ShadowRow complement;  // diameter of the complement of Shad_light(o, sigma)
  ShadowRow image;       // diameter of Shad_o(occluder, sigma)
  bool disjointness_applicable;  // d(o, occluder) > 2 sigma + C
  bool disjointness_holds;
  std::size_t samples;
};

namespace detail {

inline double sampled_diameter(const Space& s,
                               const std::vector<BoundaryPoint>& pts) {
  double diam = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      diam = std::max(diam, bourdon_distance(s, pts[i], pts[j]));
  return diam;
}

inline double model_C(const Space& s) {
  return s.is_tree() ? s.tree().C : s.plane().C;
}

inline double model_Cprime(const Space& s) {
  return s.is_tree() ? s.tree().Cprime : s.plane().Cprime;
}

inline double model_Dprime(const Space& s) {
  return s.is_tree() ? s.tree().Dprime() : s.plane().Dprime();
}

}  // namespace detail

// Deterministic boundary sample set. Trees mix random finite prefixes
// with short repetends; the plane mixes a uniform angular grid seen
// from i with random directions and the point at infinity.
inline std::vector<BoundaryPoint> sample_boundary(const Space& s, int count,
                                                  std::uint64_t seed,
                                                  int depth = 16) {
  if (count < 1) throw InvalidInput("sample_boundary: count must be positive");
  std::vector<BoundaryPoint> out;
  out.reserve(count);
  CounterRng rng = task_rng(seed, "boundary-sample", count);
  if (s.is_tree()) {
    const TreeModel& M = s.tree();
    for (int i = 0; i < count; ++i) {
      int plen = static_cast<int>(rng.below(depth + 1));
      std::vector<int> prefix;
      while (static_cast<int>(prefix.size()) < plen) {
        int gidx = 1 + static_cast<int>(rng.below(M.rank));
        int letter = rng.below(2) ? gidx : -gidx;
        if (!prefix.empty() && prefix.back() == -letter) continue;
        prefix.push_back(letter);
      }
      int rlen = 1 + static_cast<int>(rng.below(3));
      std::vector<int> rep;
      while (static_cast<int>(rep.size()) < rlen) {
        int gidx = 1 + static_cast<int>(rng.below(M.rank));
        int letter = rng.below(2) ? gidx : -gidx;
        if (!rep.empty() && rep.back() == -letter) continue;
        if (static_cast<int>(rep.size()) == rlen - 1 && rlen > 1 &&
            rep.front() == -letter)
          continue;
        rep.push_back(letter);
      }
      out.emplace_back(TreeBoundary(Word(std::move(prefix)), Word(std::move(rep))));
    }
    return out;
  }
  for (int i = 0; i < count; ++i) {
    double theta;
    if (i == 0) {
      out.emplace_back(PlaneBoundary::infinity());
      continue;
    }
    if (i % 2 == 0) {
      theta = 3.14159265358979323846 * ((i + 0.5) / count - 0.5);
    } else {
      theta = 3.14159265358979323846 * (rng.uniform(0.0, 1.0) - 0.5);
    }
    out.emplace_back(PlaneBoundary::at(std::tan(theta)));
  }
  return out;
}

// Checks the sampled shadow-diameter bounds: the complement of
// Shad_light(o, sigma) has Bourdon diameter <= a^(delta - sigma); the
// shadow Shad_o(p, sigma) has diameter <= a^(C + delta + sigma - d(o,p));
// and when d(o,p) > 2 sigma + C the two opposite shadows are disjoint.
inline ShadowLemmaReport shadow_lemma_check(
    const Space& s, const ShadowSpec& spec,
    const std::vector<BoundaryPoint>& samples) {
  if (samples.size() < 100)
    throw TooFewPoints("shadow_lemma_check: need at least 100 boundary samples");
  SpacePoint o = s.basepoint();
  double a = s.bourdon_base();
  double delta = s.delta();
  double C = detail::model_C(s);

  std::vector<BoundaryPoint> outside;
  std::vector<BoundaryPoint> in_shadow;
  ShadowSpec from_light(spec.light, o, spec.sigma);
  ShadowSpec from_o(o, spec.occluder, spec.sigma);
  ShadowSpec reversed(spec.occluder, o, spec.sigma);
  bool disjoint = true;
  for (const auto& xi : samples) {
    if (!shadow_contains(s, from_light, xi)) outside.push_back(xi);
    bool in_fwd = shadow_contains(s, from_o, xi);
    if (in_fwd) in_shadow.push_back(xi);
    if (in_fwd && shadow_contains(s, reversed, xi)) disjoint = false;
  }

  double d_op = distance(s, o, spec.occluder);
  ShadowRow complement{spec.sigma, distance(s, o, spec.light),
                       detail::sampled_diameter(s, outside),
                       std::pow(a, delta - spec.sigma), 0.0};
  complement.slack = complement.bound - complement.diameter;
  ShadowRow image{spec.sigma, d_op, detail::sampled_diameter(s, in_shadow),
                  std::pow(a, C + delta + spec.sigma - d_op), 0.0};
  image.slack = image.bound - image.diameter;
  return ShadowLemmaReport{complement, image, d_op > 2.0 * spec.sigma + C,
                           disjoint, samples.size()};
}

struct AttractorPair {
  BoundaryPoint y_plus;
  BoundaryPoint y_minus;
  double sigma;
};

namespace detail {

// Boundary endpoint of the geodesic ray from `from` through `through`.
inline BoundaryPoint ray_endpoint_tree(const TreeModel& M, const Word& from,
                                       const Word& through) {
  Word u = from.inverse() * through;
  if (u.empty())
    throw LowDisplacement("ray endpoint undefined: coincident points");
  (void)M;
  return BoundaryPoint(
      TreeBoundary(through, Word(std::vector<int>{u.letters.back()})));
}

inline BoundaryPoint ray_endpoint_plane(const PlanePoint& from,
                                        const PlanePoint& through) {
  double dx = through.x - from.x;
  if (std::fabs(dx) < 1e-14) {
    if (through.y == from.y)
      throw LowDisplacement("ray endpoint undefined: coincident points");
    return BoundaryPoint(through.y > from.y ? PlaneBoundary::infinity()
                                            : PlaneBoundary::at(from.x));
  }
  // Geodesic circle centered on the real axis through both points.
  double c = (through.x * through.x + through.y * through.y - from.x * from.x -
              from.y * from.y) /
             (2.0 * dx);
  double r = std::hypot(from.x - c, from.y);
  return BoundaryPoint(PlaneBoundary::at(dx > 0.0 ? c + r : c - r));
}

inline BoundaryPoint ray_endpoint(const Space& s, const SpacePoint& from,
                                  const SpacePoint& through) {
  if (s.is_tree())
    return ray_endpoint_tree(s.tree(), expect_alt<Word>(from, "ray"),
                             expect_alt<Word>(through, "ray"));
  return ray_endpoint_plane(expect_alt<PlanePoint>(from, "ray"),
                            expect_alt<PlanePoint>(through, "ray"));
}

}  // namespace detail

// Canonical attractor/repellor selection: sigma is the smallest value
// with Dprime a^-sigma <= eps, y+ is the endpoint of the ray from o
// through g o (a point of Shad_o(g o, sigma)), and y- the endpoint of
// the ray through g^-1 o. Requires d(o, g o) > 2 sigma + C.
inline AttractorPair choose_attractor_pair(const Space& s,
                                           const SpaceIsometry& g, double eps) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw InvalidInput("choose_attractor_pair: eps must lie in (0,1)");
  double a = s.bourdon_base();
  double sigma =
      std::max(std::log(detail::model_Dprime(s) / eps) / std::log(a), 1e-9);
  double d = displacement(s, g);
  if (!(d > 2.0 * sigma + detail::model_C(s)))
    throw LowDisplacement(
        "choose_attractor_pair: displacement " + format_real(d) +
        " does not exceed 2 sigma + C = " +
        format_real(2.0 * sigma + detail::model_C(s)));
  SpacePoint o = s.basepoint();
  BoundaryPoint plus = detail::ray_endpoint(s, o, act(s, g, o));
  BoundaryPoint minus = detail::ray_endpoint(s, o, act(s, inverse(s, g), o));
  return AttractorPair{plus, minus, sigma};
}

// Sampled contraction data of g on the ball B^eps around dom_center:
// image radius measured around img_center, Lipschitz ratio over sampled
// pairs inside the domain.
struct BallDynamics {
  double image_radius;
  double lipschitz;
  std::size_t samples_in_domain;
};

inline BallDynamics ball_dynamics(const Space& s, const SpaceIsometry& g,
                                  const BoundaryPoint& dom_center,
                                  const BoundaryPoint& img_center, double eps,
                                  int resolution, std::uint64_t seed) {
  if (resolution < 8)
    throw InvalidInput("ball_dynamics: resolution must be >= 8");
  int depth = 16;
  if (s.is_tree())
    depth = std::max(16, 4 + static_cast<int>(std::ceil(
                              std::log(1.0 / eps) / std::log(s.bourdon_base()))));
  std::vector<BoundaryPoint> pts = sample_boundary(s, resolution, seed, depth);
  std::vector<BoundaryPoint> dom;
  for (const auto& xi : pts)
    if (bourdon_distance(s, xi, dom_center) >= eps) dom.push_back(xi);

  BallDynamics out{0.0, 0.0, dom.size()};
  std::vector<BoundaryPoint> img;
  img.reserve(dom.size());
  for (const auto& xi : dom) {
    BoundaryPoint gx = act(s, g, xi);
    out.image_radius = std::max(out.image_radius,
                                bourdon_distance(s, gx, img_center));
    img.push_back(gx);
  }
  CounterRng rng = task_rng(seed, "ball-pairs", resolution);
  auto ratio = [&](std::size_t i, std::size_t j) {
    double dx = bourdon_distance(s, dom[i], dom[j]);
    if (dx < 1e-300) return;
    out.lipschitz =
        std::max(out.lipschitz, bourdon_distance(s, img[i], img[j]) / dx);
  };
  for (std::size_t i = 0; i + 1 < dom.size(); ++i) ratio(i, i + 1);
  for (std::size_t k = 0; k < 4 * dom.size(); ++k) {
    std::size_t i = rng.below(dom.size());
    std::size_t j = rng.below(dom.size());
    if (i != j) ratio(i, j);
  }
  return out;
}

// Certificate for (r,eps)-proximality of g on the boundary: the fixed
// points must be 2r-separated in the Bourdon metric, g must map the
// complement of the eps-ball around x- into the eps-ball around x+,
// and be eps-Lipschitz there.
struct BoundaryCertificate {
  Verdict verdict;
  double r;
  double eps;
  int resolution;
  std::uint64_t seed;
  double gap;
  double image_radius;
  double lipschitz_estimate;
  double violation;
  std::size_t samples_in_domain;
  BoundaryPoint attractor;
  BoundaryPoint repellor;
  std::string notes;
};

inline BoundaryCertificate certify_r_eps_proximal_boundary(
    const Space& s, const SpaceIsometry& g, double r, double eps,
    int resolution, std::uint64_t seed = 2026) {
  if (!(r > 0.0) || !(r < 1.0))
    throw InvalidInput("certify_r_eps_proximal_boundary: need 0 < r < 1");
  if (!(eps > 0.0) || eps > r)
    throw InvalidInput("certify_r_eps_proximal_boundary: need 0 < eps <= r");
  IsometryClass cls = classify_isometry(s, g);
  if (cls.kind != IsometryKind::Hyperbolic)
    throw NotHyperbolic(std::string("certify_r_eps_proximal_boundary: ") +
                        isometry_kind_name(cls.kind) +
                        " isometry has no attracting fixed point");
  const BoundaryPoint& plus = cls.fixed_points[0];
  const BoundaryPoint& minus = cls.fixed_points[1];
  double gap = bourdon_distance(s, plus, minus);
  BallDynamics dyn = ball_dynamics(s, g, minus, plus, eps, resolution, seed);
  if (dyn.samples_in_domain < 10)
    throw ResolutionTooLow(
        "certify_r_eps_proximal_boundary: fewer than 10 samples outside the "
        "eps-ball; raise the resolution");
  double violation = std::max({2.0 * r - gap, dyn.image_radius - eps,
                               dyn.lipschitz - eps});
  Verdict v = violation <= 0.0 ? Verdict::Certified
              : violation > tol::tau_margin ? Verdict::Refuted
                                            : Verdict::Inconclusive;
  return BoundaryCertificate{v,
                             r,
                             eps,
                             resolution,
                             seed,
                             gap,
                             dyn.image_radius,
                             dyn.lipschitz,
                             violation,
                             dyn.samples_in_domain,
                             plus,
                             minus,
                             ""};
}

// Sandwich |g| - 2 (x-|x+)_o - Cprime <= stable <= |g| for hyperbolic g;
// returns (lhs, stable, displacement, product) and throws if violated.
struct LengthGapReport {
  double lhs;
  double stable;
  double displacement;
  double product;
};

inline LengthGapReport length_gap_check(const Space& s, const SpaceIsometry& g) {
  IsometryClass cls = classify_isometry(s, g);
  if (cls.kind != IsometryKind::Hyperbolic)
    throw NotHyperbolic("length_gap_check: isometry is not hyperbolic");
  double disp = displacement(s, g);
  double product = gromov_product_boundary(s, cls.fixed_points[1],
                                           cls.fixed_points[0], s.basepoint());
  bool has_exact = false;
  double stable = detail::exact_stable_length(s, g, has_exact);
  if (!has_exact)
    throw NumericalFailure("length_gap_check: no exact stable length");
  double lhs = disp - 2.0 * product - detail::model_Cprime(s);
  double tolerance = s.is_tree() ? 0.0 : 1e-9;
  if (lhs > stable + tolerance || stable > disp + tolerance)
    throw NumericalFailure("length_gap_check: sandwich violated: lhs " +
                           format_real(lhs) + " stable " + format_real(stable) +
                           " displacement " + format_real(disp));
  return LengthGapReport{lhs, stable, disp, product};
}

namespace detail {

inline bool same_boundary_point(const Space& s, const BoundaryPoint& x,
                                const BoundaryPoint& y) {
  if (s.is_tree())
    return expect_alt<TreeBoundary>(x, "lineal") ==
           expect_alt<TreeBoundary>(y, "lineal");
  return bourdon_distance(s, x, y) <= 1e-9;
}

}  // namespace detail

// For generators sharing the fixed-point pair {x0, x1} with
// 4r <= d(x0, x1): the smallest sampled displacement threshold such
// that every sampled product above it certifies (r,eps)-proximal.
inline double lineal_threshold_check(const Space& s,
                                     const std::vector<SpaceIsometry>& gens,
                                     double r, double eps,
                                     int sample_budget = 160,
                                     int resolution = 256,
                                     std::uint64_t seed = 2026) {
  if (gens.empty())
    throw InvalidInput("lineal_threshold_check: no generators");
  std::vector<IsometryClass> classes;
  for (const auto& g : gens) {
    IsometryClass c = classify_isometry(s, g);
    if (c.kind != IsometryKind::Hyperbolic)
      throw NotLineal("lineal_threshold_check: generator is not hyperbolic");
    classes.push_back(std::move(c));
  }
  const BoundaryPoint& x0 = classes[0].fixed_points[0];
  const BoundaryPoint& x1 = classes[0].fixed_points[1];
  for (const auto& c : classes) {
    bool direct = detail::same_boundary_point(s, c.fixed_points[0], x0) &&
                  detail::same_boundary_point(s, c.fixed_points[1], x1);
    bool swapped = detail::same_boundary_point(s, c.fixed_points[0], x1) &&
                   detail::same_boundary_point(s, c.fixed_points[1], x0);
    if (!direct && !swapped)
      throw NotLineal("lineal_threshold_check: generators have distinct axes");
  }
  if (!(4.0 * r <= bourdon_distance(s, x0, x1) + 1e-15))
    throw InvalidInput(
        "lineal_threshold_check: 4r exceeds the fixed-point separation");

  CounterRng rng = task_rng(seed, "lineal-products", sample_budget);
  double threshold = 0.0;
  double best_certified = -1.0;
  for (int it = 0; it < sample_budget; ++it) {
    int len = 1 + static_cast<int>(rng.below(8));
    SpaceIsometry gamma = gens[rng.below(gens.size())];
    for (int k = 1; k < len; ++k)
      gamma = compose(s, gamma, gens[rng.below(gens.size())]);
    double d = displacement(s, gamma);
    bool certified = false;
    try {
      certified = certify_r_eps_proximal_boundary(s, gamma, r, eps, resolution,
                                                  seed)
                      .verdict == Verdict::Certified;
    } catch (const NotHyperbolic&) {
      certified = false;
    } catch (const ResolutionTooLow&) {
      certified = false;
    }
    if (certified)
      best_certified = std::max(best_certified, d);
    else
      threshold = std::max(threshold, d);
  }
  if (best_certified <= threshold)
    throw BudgetExhausted(
        "lineal_threshold_check: no certified sample beyond the largest "
        "failing displacement; raise the budget or resolution");
  return threshold;
}

}  // namespace proxlab
