#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "proxlab/errors.hpp"
#include "proxlab/numeric.hpp"

namespace proxlab {

// Upper half-plane with the hyperbolic metric, boundary R union {infinity},
// isometries = Moebius transformations from unit-determinant real 2x2
// matrices.  All boundary quantities have closed forms; the infinity point
// is handled by explicit limit branches throughout.

struct PlanePoint {
  double x = 0.0;
  double y = 1.0;

  PlanePoint() = default;
  PlanePoint(double px, double py) : x(px), y(py) {
    if (!(y > 0) || !std::isfinite(x) || !std::isfinite(y))
      throw InvalidInput("PlanePoint: need finite coordinates with y > 0");
  }
};

struct PlaneBoundary {
  bool is_infinity = false;
  double xi = 0.0;

  static PlaneBoundary infinity() {
    PlaneBoundary b;
    b.is_infinity = true;
    return b;
  }
  static PlaneBoundary at(double xi) {
    if (!std::isfinite(xi))
      throw InvalidInput("PlaneBoundary: coordinate must be finite");
    PlaneBoundary b;
    b.xi = xi;
    return b;
  }
  bool operator==(const PlaneBoundary& o) const {
    if (is_infinity || o.is_infinity) return is_infinity == o.is_infinity;
    return xi == o.xi;
  }
  bool operator!=(const PlaneBoundary& o) const { return !(*this == o); }
};

// Unit-determinant isometry acting as z -> (az+b)/(cz+d).
struct Mobius {
  double a = 1, b = 0, c = 0, d = 1;

  Mobius() = default;
  Mobius(double pa, double pb, double pc, double pd)
      : a(pa), b(pb), c(pc), d(pd) {
    double det = a * d - b * c;
    if (std::fabs(det - 1.0) > tol::tau_plane_det)
      throw InvalidInput("Mobius: determinant must be 1, got " +
                         format_real(det));
    // Exact renormalization removes the residual determinant error.
    double s = std::sqrt(det);
    a /= s;
    b /= s;
    c /= s;
    d /= s;
  }

  double trace() const { return a + d; }
  Mobius inverse() const {
    Mobius m;
    m.a = d;
    m.b = -b;
    m.c = -c;
    m.d = a;
    return m;
  }
};

inline Mobius operator*(const Mobius& l, const Mobius& r) {
  Mobius m;
  m.a = l.a * r.a + l.b * r.c;
  m.b = l.a * r.b + l.b * r.d;
  m.c = l.c * r.a + l.d * r.c;
  m.d = l.c * r.b + l.d * r.d;
  return m;
}

struct PlaneModel {
  double a;  // Bourdon base; a = e gives the exact CAT(-1) visual metric
  PlanePoint basepoint;
  double delta;  // calibrated four-point constant, see estimate routines
  // Calibration constants, verified by the dynamics sweeps. C: the
  // distance/product identity defect (the Poisson-kernel closed forms
  // make it vanish). Cprime: stable-length sandwich defect; with the
  // a = e visual metric, d(o, g o) - 2(x-|x+)_o increases to the
  // translation length as o approaches the axis, so zero is sharp.
  double C = 0.0;
  double Cprime = 0.0;

  // Shadow constant: the Bourdon metric transforms conformally with
  // factor e^{Busemann}, so the raw Lipschitz constant is 1 and only
  // a^(C+delta) contributes.
  double Dprime() const { return std::max(1.0, std::pow(a, C + delta)); }

  explicit PlaneModel(double base = 2.718281828459045235,
                      PlanePoint o = PlanePoint(0.0, 1.0),
                      double hyp_delta = 0.7)
      : a(base), basepoint(o), delta(hyp_delta) {
    if (!(a > 1.0)) throw InvalidInput("PlaneModel: Bourdon base must be > 1");
    if (!(delta >= 0)) throw InvalidInput("PlaneModel: delta must be >= 0");
  }
};

// d((x1,y1),(x2,y2)) = arcosh(1 + ((dx)^2+(dy)^2)/(2 y1 y2)), computed in
// the equivalent asinh form which is stable for nearby points.
inline double plane_distance(const PlaneModel&, const PlanePoint& m,
                             const PlanePoint& p) {
  double dx = m.x - p.x, dy = m.y - p.y;
  double q = (dx * dx + dy * dy) / (4.0 * m.y * p.y);
  return 2.0 * std::asinh(std::sqrt(q));
}

inline double plane_gromov_product(const PlaneModel& M, const PlanePoint& m,
                                   const PlanePoint& p, const PlanePoint& q) {
  return 0.5 * (plane_distance(M, m, q) + plane_distance(M, p, q) -
                plane_distance(M, m, p));
}

// Moebius action on interior points: z -> (az+b)/(cz+d) with
// y' = y/|cz+d|^2 and x' = ((ax+b)(cx+d) + a c y^2)/|cz+d|^2.
inline PlanePoint plane_act(const Mobius& g, const PlanePoint& z) {
  double den = (g.c * z.x + g.d) * (g.c * z.x + g.d) + g.c * g.c * z.y * z.y;
  if (!(den > 0))
    throw NumericalFailure("plane_act: image escaped to the boundary");
  double nx = (g.a * z.x + g.b) * (g.c * z.x + g.d) + g.a * g.c * z.y * z.y;
  return PlanePoint(nx / den, z.y / den);
}

inline PlaneBoundary plane_act(const Mobius& g, const PlaneBoundary& x) {
  if (x.is_infinity) {
    if (g.c == 0.0) return PlaneBoundary::infinity();
    return PlaneBoundary::at(g.a / g.c);
  }
  double den = g.c * x.xi + g.d;
  if (den == 0.0) return PlaneBoundary::infinity();
  return PlaneBoundary::at((g.a * x.xi + g.b) / den);
}

namespace detail {

// (xi|eta)_i at the standard basepoint i = (0,1):
//   -log( |xi－eta| / (sqrt(1+xi^2) sqrt(1+eta^2)) ),
// with the infinity branches (xi|inf)_i = (1/2) log(1+xi^2).
inline double product_at_i(const PlaneBoundary& xi, const PlaneBoundary& eta) {
  if (xi.is_infinity && eta.is_infinity)
    return std::numeric_limits<double>::infinity();
  if (xi.is_infinity) return 0.5 * std::log1p(eta.xi * eta.xi);
  if (eta.is_infinity) return 0.5 * std::log1p(xi.xi * xi.xi);
  if (xi.xi == eta.xi) return std::numeric_limits<double>::infinity();
  // Fixed summation order keeps the product exactly symmetric in (xi, eta).
  double lo = std::min(xi.xi, eta.xi), hi = std::max(xi.xi, eta.xi);
  return -std::log(hi - lo) + 0.5 * std::log1p(lo * lo) +
         0.5 * std::log1p(hi * hi);
}

// Isometry moving q to the standard basepoint i: z -> (z - x)/y.
inline Mobius move_to_i(const PlanePoint& q) {
  double s = std::sqrt(q.y);
  Mobius m;
  m.a = 1.0 / s;
  m.b = -q.x / s;
  m.c = 0.0;
  m.d = s;
  return m;
}

// Poisson kernel P((x,y), xi) = y/((x-xi)^2 + y^2), P(z, inf) = y.
inline double poisson(const PlanePoint& z, const PlaneBoundary& xi) {
  if (xi.is_infinity) return z.y;
  double dx = z.x - xi.xi;
  return z.y / (dx * dx + z.y * z.y);
}

}  // namespace detail

// (xi|eta)_q: conjugate q to the standard basepoint and apply the closed
// form there.  Equal boundary points give the +infinity sentinel.
inline double plane_gromov_product_boundary(const PlaneModel&,
                                            const PlaneBoundary& xi,
                                            const PlaneBoundary& eta,
                                            const PlanePoint& q) {
  if (xi == eta) return std::numeric_limits<double>::infinity();
  Mobius t = detail::move_to_i(q);
  return detail::product_at_i(plane_act(t, xi), plane_act(t, eta));
}

// (m|xi)_q = (1/2)( d(m,q) + log(P(m,xi)/P(q,xi)) ): the Busemann cocycle
// form of the product with one interior argument.
inline double plane_gromov_product_boundary(const PlaneModel& M,
                                            const PlanePoint& m,
                                            const PlaneBoundary& xi,
                                            const PlanePoint& q) {
  return 0.5 * (plane_distance(M, m, q) +
                std::log(detail::poisson(m, xi) / detail::poisson(q, xi)));
}

inline double plane_bourdon_distance(const PlaneModel& M,
                                     const PlaneBoundary& xi,
                                     const PlaneBoundary& eta) {
  if (xi == eta) return 0.0;
  double prod = plane_gromov_product_boundary(M, xi, eta, M.basepoint);
  return std::pow(M.a, -prod);
}

// B_x(y,z) = (z|x)_y - (y|x)_z.
inline double plane_busemann(const PlaneModel& M, const PlaneBoundary& x,
                             const PlanePoint& y, const PlanePoint& z) {
  return plane_gromov_product_boundary(M, z, x, y) -
         plane_gromov_product_boundary(M, y, x, z);
}

}  // namespace proxlab
