#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace proxlab {

// Central home for every tolerance the library pins down, so that tests and
// documentation reference a single definition.
namespace tol {

// |det g| must exceed tau_det_factor * sigma_1(g)^dim at construction.
inline constexpr double tau_det_factor = 1e-12;

// Proximality gap threshold in log-eigenvalue scale.
inline constexpr double spectral_tol = 1e-6;

// SVD top-gap below which the attracting flag selection is branch-dependent.
inline constexpr double tau_svdgap = 1e-9;

// First-nonzero threshold for projective canonicalization.
inline constexpr double canon_tol = 1e-12;

// A sampled certificate violation below this yields Inconclusive, not Refuted.
inline constexpr double tau_margin = 1e-7;

// Quantitative floor for transversality margins.
inline constexpr double tau_trans = 1e-3;

// Guard band around |trace| = 2 for the parabolic classification on the plane.
inline constexpr double tau_trace = 1e-9;

// Determinant slack for matrices acting on the half-plane.
inline constexpr double tau_plane_det = 1e-10;

}  // namespace tol

// All reals in reports are serialized as decimals with 17 significant digits,
// which round-trips IEEE doubles and keeps CSV output byte-reproducible.
inline std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

inline bool close(double a, double b, double tolerance) {
  return std::fabs(a - b) <= tolerance;
}

inline double sqr(double x) { return x * x; }

}  // namespace proxlab
