#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "oracles.hpp"
#include "proxlab/proximal.hpp"

using namespace proxlab;

namespace {

Mat rot2(double th) {
  Mat r(2, 2);
  r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  return r;
}

Mat diag2(double a, double b) {
  Mat d(2, 2);
  d << a, 0, 0, b;
  return d;
}

}  // namespace

TEST_CASE("proximal_data matches the power-iteration oracle") {
  auto rng = task_rng(31, "test-proxdata");
  int tested = 0;
  for (int it = 0; it < 2000 && tested < 200; ++it) {
    int dim = 2 + static_cast<int>(rng.below(3));
    Mat g = oracles::random_matrix(rng, dim, 8.0, 0.1);
    auto pd = try_proximal_data(g);
    if (!pd || pd->lambda_gap < 0.3) continue;
    ++tested;
    Vec xp = oracles::power_iteration(g);
    Vec xm = oracles::power_iteration(g.transpose());
    REQUIRE(proj_distance(pd->flag.attractor, ProjPoint(xp)) < 1e-8);
    REQUIRE(proj_distance(ProjPoint(pd->flag.repellor.normal), ProjPoint(xm)) <
            1e-8);
    REQUIRE(pd->gap == Catch::Approx(std::fabs(
                           pd->flag.attractor.v.dot(pd->flag.repellor.normal)))
                           .margin(1e-12));
    REQUIRE(pd->lambda1 == Catch::Approx(jordan_projection(g)(0)).margin(1e-9));
  }
  REQUIRE(tested >= 200);
}

TEST_CASE("attracting data is invariant under the action") {
  auto rng = task_rng(32, "test-invariance");
  int tested = 0;
  for (int it = 0; it < 500 && tested < 60; ++it) {
    int dim = 2 + static_cast<int>(rng.below(3));
    Mat g = oracles::random_matrix(rng, dim, 8.0, 0.1);
    auto pd = try_proximal_data(g);
    if (!pd || pd->lambda_gap < 0.3) continue;
    ++tested;
    // x^+ fixed by g; X^- invariant, so its normal is fixed by the
    // contragredient action.
    REQUIRE(proj_distance(act(g, pd->flag.attractor), pd->flag.attractor) <
            1e-10);
    auto h = act(g, pd->flag.repellor);
    REQUIRE(proj_distance(ProjPoint(h.normal),
                          ProjPoint(pd->flag.repellor.normal)) < 1e-10);
  }
  REQUIRE(tested >= 60);
}

TEST_CASE("non-proximal inputs are rejected") {
  REQUIRE_THROWS_AS(proximal_data(rot2(0.5)), NotProximal);
  REQUIRE_FALSE(try_proximal_data(rot2(0.5)).has_value());
  REQUIRE(try_proximal_data(diag2(3, 1)).has_value());
  REQUIRE_THROWS_AS(proximal_data(Mat::Identity(3, 3)), NotProximal);
}

TEST_CASE("svd attractor of powers converges to the eigen attractor") {
  Mat g = diag2(2, 1) * rot2(0.3);
  ProximalData pd = proximal_data(g);
  Mat gn = Mat::Identity(2, 2);
  for (int i = 0; i < 50; ++i) gn = gn * g;
  SvdFlag sf = svd_attractor(gn);
  REQUIRE_FALSE(sf.ambiguous);
  REQUIRE(proj_distance(sf.flag.attractor, pd.flag.attractor) < 1e-6);
  REQUIRE(sf.mu_gap > 10.0);
}

TEST_CASE("svd attractor on hand-solved matrices") {
  SvdFlag sf = svd_attractor(diag2(3, 1));
  REQUIRE(proj_distance(sf.flag.attractor, ProjPoint(Vec{{1.0, 0.0}})) < 1e-12);
  REQUIRE(point_hyperplane_distance(ProjPoint(Vec{{0.0, 1.0}}),
                                    sf.flag.repellor) < 1e-12);
  REQUIRE(sf.mu_gap == Catch::Approx(std::log(3.0)).margin(1e-12));

  // A rotation has equal singular values: the flag is branch-dependent.
  REQUIRE(svd_attractor(rot2(0.7)).ambiguous);
}

TEST_CASE("chart constant grid measurement approaches the closed form") {
  for (int dim : {2, 3}) {
    for (double eps : {0.2, 0.4, 0.6}) {
      double grid = chart_constant_grid(dim, eps);
      double exact = chart_constant(eps);
      REQUIRE(grid <= exact * (1.0 + 1e-9));
      REQUIRE(grid >= exact * 0.80);
    }
  }
  REQUIRE(chart_constant(0.5) == Catch::Approx(4.0));
  REQUIRE_THROWS_AS(chart_constant(0.0), InvalidInput);
  REQUIRE_THROWS_AS(chart_constant(1.0), InvalidInput);
}

TEST_CASE("contraction bound holds and is descriptive on diag(8,1)") {
  auto rep = contraction_check(diag2(8, 1), 0.5);
  // Image of B^0.5: worst point at |cos t| = 0.5, distance
  // sin t / sqrt(64 cos^2 t + sin^2 t).
  double worst = std::sqrt(0.75) / std::sqrt(64 * 0.25 + 0.75);
  REQUIRE(rep.measured_radius <= worst + 1e-12);
  REQUIRE(rep.measured_radius >= worst * 0.9);
  REQUIRE(rep.bound == Catch::Approx(4.0 / 8.0).margin(1e-12));
  REQUIRE(rep.measured_lipschitz <= rep.bound + 1e-9);
  REQUIRE(rep.samples_in_domain >= 10);
}

TEST_CASE("contraction bound holds on random matrices") {
  auto rng = task_rng(33, "test-contraction");
  int tested = 0;
  for (int it = 0; it < 200 && tested < 40; ++it) {
    int dim = 2 + static_cast<int>(rng.below(3));
    Mat g = oracles::random_matrix(rng, dim, 6.0, 0.1);
    CartanVector mu = cartan_projection(g);
    if (mu(0) - mu(1) < 0.1) continue;
    ++tested;
    auto rep = contraction_check(g, 0.3, 128, 7);
    REQUIRE(rep.measured_lipschitz <= rep.bound + 1e-9 * std::max(1.0, rep.bound));
  }
  REQUIRE(tested >= 40);
}

TEST_CASE("contraction radius decays geometrically for diagonal powers") {
  double r4 = contraction_check(diag2(16, 1), 0.5).measured_radius;    // 2^4
  double r6 = contraction_check(diag2(64, 1), 0.5).measured_radius;    // 2^6
  double r8 = contraction_check(diag2(256, 1), 0.5).measured_radius;   // 2^8
  REQUIRE(r6 / r4 == Catch::Approx(0.25).margin(0.02));
  REQUIRE(r8 / r6 == Catch::Approx(0.25).margin(0.02));
}

TEST_CASE("sparse domains raise ResolutionTooLow") {
  REQUIRE_THROWS_AS(contraction_check(diag2(8, 1), 0.99999, 16),
                    ResolutionTooLow);
}

TEST_CASE("certify verdicts on hand-built matrices") {
  // diag(M,1) is (r,eps)-proximal once 1/(M eps^2) <= eps: M = 4000 clears
  // r = 0.3, eps = 0.1 comfortably.
  auto cert = certify_r_eps_proximal(diag2(4000, 1), 0.3, 0.1);
  REQUIRE(cert.verdict == Verdict::Certified);
  REQUIRE(cert.gap == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(cert.image_radius <= 0.1);
  REQUIRE(cert.lipschitz_estimate <= 0.1);
  REQUIRE(cert.violation == 0.0);

  // diag(1.5,1) contracts far too weakly for eps = 0.1.
  auto bad = certify_r_eps_proximal(diag2(1.5, 1), 0.3, 0.1);
  REQUIRE(bad.verdict == Verdict::Refuted);
  REQUIRE(bad.violation > tol::tau_margin);

  // Insufficient gap: conjugate so that x^+ and X^- nearly touch.
  Mat s(2, 2);
  s << 1, 1, 0, 1e-3;  // maps e1, e2 to nearly parallel directions
  Mat g = s * diag2(4000, 1) * s.inverse();
  auto close = certify_r_eps_proximal(g, 0.45, 1e-4, 256, 1);
  REQUIRE(close.gap < 0.9);  // sanity: conjugation really shrank the gap
  if (close.gap < 0.9 - tol::tau_margin)
    REQUIRE(close.verdict == Verdict::Refuted);
}

TEST_CASE("certificates are monotone in (r, eps)") {
  Mat g = diag2(4000, 1);
  auto strong = certify_r_eps_proximal(g, 0.3, 0.1);
  REQUIRE(strong.verdict == Verdict::Certified);
  // Weaker demands must stay certified: smaller r, larger eps (<= r).
  for (auto [r, eps] : std::vector<std::pair<double, double>>{
           {0.2, 0.1}, {0.3, 0.15}, {0.2, 0.2}, {0.15, 0.12}}) {
    auto weak = certify_r_eps_proximal(g, r, eps);
    INFO("r=" << r << " eps=" << eps);
    REQUIRE(weak.verdict == Verdict::Certified);
    REQUIRE(weak.image_radius <= strong.image_radius + 1e-15);
  }
}

TEST_CASE("certify rejects invalid parameters and degenerate inputs") {
  Mat g = diag2(4000, 1);
  REQUIRE_THROWS_AS(certify_r_eps_proximal(g, 0.0, 0.1), InvalidInput);
  REQUIRE_THROWS_AS(certify_r_eps_proximal(g, 0.3, 0.4), InvalidInput);
  REQUIRE_THROWS_AS(certify_r_eps_proximal(g, 1.0, 0.1), InvalidInput);
  REQUIRE_THROWS_AS(certify_r_eps_proximal(rot2(0.4), 0.3, 0.1), NotProximal);
}

TEST_CASE("certification is deterministic for fixed seed and resolution") {
  Mat g = diag2(4000, 1) * rot2(0.2);
  auto a = certify_r_eps_proximal(g, 0.25, 0.1, 256, 9);
  auto b = certify_r_eps_proximal(g, 0.25, 0.1, 256, 9);
  REQUIRE(a.image_radius == b.image_radius);
  REQUIRE(a.lipschitz_estimate == b.lipschitz_estimate);
  REQUIRE(a.gap == b.gap);
}

TEST_CASE("criterion certifies proximality from approximate flag data") {
  Mat g = diag2(1e5, 1);
  ProjFlag exact{ProjPoint(Vec{{1.0, 0.0}}), ProjHyperplane(Vec{{1.0, 0.0}})};
  REQUIRE(criterion_implies_proximal(g, exact, 0.1, 0.05));

  // A slightly wrong flag still satisfies the hypotheses; the criterion
  // must still produce a certified conclusion with eps-close true data.
  ProjFlag tilted{ProjPoint(Vec{{1.0, 0.01}}), ProjHyperplane(Vec{{1.0, -0.01}})};
  REQUIRE(criterion_implies_proximal(g, tilted, 0.1, 0.05));
}

TEST_CASE("criterion reports failed hypotheses") {
  // Far too weak a contraction: containment and Lipschitz both fail.
  Mat g = diag2(1.2, 1);
  ProjFlag flag{ProjPoint(Vec{{1.0, 0.0}}), ProjHyperplane(Vec{{1.0, 0.0}})};
  REQUIRE_THROWS_AS(criterion_implies_proximal(g, flag, 0.1, 0.05),
                    HypothesisFailed);
  try {
    criterion_implies_proximal(g, flag, 0.1, 0.05);
  } catch (const HypothesisFailed& e) {
    REQUIRE(std::string(e.what()).find("radius") != std::string::npos);
  }

  // Insufficient gap: orthogonal-ish flag scaled inward.
  Mat strong = diag2(1e5, 1);
  ProjFlag narrow{ProjPoint(Vec{{0.2, std::sqrt(1 - 0.04)}}),
                  ProjHyperplane(Vec{{1.0, 0.0}})};
  REQUIRE_THROWS_AS(criterion_implies_proximal(strong, narrow, 0.1, 0.05),
                    HypothesisFailed);

  REQUIRE_THROWS_AS(
      criterion_implies_proximal(strong, flag, 0.5, 0.05),  // 2r >= 1 fails
      InvalidInput);
}
