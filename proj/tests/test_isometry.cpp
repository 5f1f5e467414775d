#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "proxlab/isometry.hpp"
#include "proxlab/rng.hpp"

using namespace proxlab;

namespace {

Word random_reduced(CounterRng& rng, int rank, int len) {
  std::vector<int> raw;
  while (static_cast<int>(raw.size()) < len) {
    int g = 1 + static_cast<int>(rng.below(rank));
    int s = rng.below(2) ? g : -g;
    if (!raw.empty() && raw.back() == -s) continue;
    raw.push_back(s);
  }
  return Word(std::move(raw));
}

Mobius random_mobius(CounterRng& rng) {
  double t = rng.uniform(-2.0, 2.0);
  double l = std::exp(rng.uniform(-0.8, 0.8));
  double th = rng.uniform(0.0, 3.14159);
  return Mobius(1.0, t, 0.0, 1.0) * Mobius(l, 0.0, 0.0, 1.0 / l) *
         Mobius(std::cos(th), -std::sin(th), std::sin(th), std::cos(th));
}

// Conjugated dilation: hyperbolic with translation length len.
Mobius random_hyperbolic(CounterRng& rng, double len) {
  Mobius k = random_mobius(rng);
  double h = std::exp(len / 2.0);
  return k * Mobius(h, 0.0, 0.0, 1.0 / h) * k.inverse();
}

}  // namespace

TEST_CASE("displacement of basepoints") {
  Space tree{TreeModel(2)};
  Space plane{PlaneModel()};
  REQUIRE(displacement(tree, SpaceIsometry(Word())) == 0.0);
  REQUIRE(displacement(tree, SpaceIsometry(parse_word("ab"))) == 2.0);
  double h = std::exp(0.5);
  REQUIRE(displacement(plane, SpaceIsometry(Mobius(1.0, 0.0, 0.0, 1.0))) == 0.0);
  REQUIRE(std::abs(displacement(plane, SpaceIsometry(Mobius(h, 0.0, 0.0, 1.0 / h))) -
                   1.0) < 1e-12);
}

TEST_CASE("classification on the plane") {
  Space plane{PlaneModel()};
  auto parab = classify_isometry(plane, SpaceIsometry(Mobius(1, 1, 0, 1)));
  REQUIRE(parab.kind == IsometryKind::Parabolic);
  REQUIRE(parab.fixed_points.size() == 1);
  REQUIRE(std::get<PlaneBoundary>(parab.fixed_points[0]).is_infinity);

  auto hyp = classify_isometry(plane, SpaceIsometry(Mobius(2, 0, 0, 0.5)));
  REQUIRE(hyp.kind == IsometryKind::Hyperbolic);
  REQUIRE(hyp.fixed_points.size() == 2);
  REQUIRE(std::get<PlaneBoundary>(hyp.fixed_points[0]).is_infinity);
  REQUIRE(std::get<PlaneBoundary>(hyp.fixed_points[1]).xi == 0.0);

  double th = 0.7;
  auto ell = classify_isometry(
      plane, SpaceIsometry(Mobius(std::cos(th), -std::sin(th), std::sin(th),
                                  std::cos(th))));
  REQUIRE(ell.kind == IsometryKind::Elliptic);
  REQUIRE(ell.fixed_points.empty());
  REQUIRE(classify_isometry(plane, SpaceIsometry(Mobius(1, 0, 0, 1))).kind ==
          IsometryKind::Elliptic);
  REQUIRE_THROWS_AS(classify_isometry(plane, SpaceIsometry(Mobius(1, 1, 0, 1)), 4),
                    InvalidInput);
}

TEST_CASE("classification on the tree") {
  Space tree{TreeModel(2)};
  auto id = classify_isometry(tree, SpaceIsometry(Word()));
  REQUIRE(id.kind == IsometryKind::Elliptic);

  auto hyp = classify_isometry(tree, SpaceIsometry(parse_word("ab")));
  REQUIRE(hyp.kind == IsometryKind::Hyperbolic);
  REQUIRE(std::get<TreeBoundary>(hyp.fixed_points[0]) ==
          TreeBoundary(Word(), parse_word("ab")));
  REQUIRE(std::get<TreeBoundary>(hyp.fixed_points[1]) ==
          TreeBoundary(Word(), parse_word("BA")));
}

TEST_CASE("fixed points are fixed") {
  Space tree{TreeModel(2)};
  Space plane{PlaneModel()};
  auto rng = task_rng(61, "fixed-points");
  for (int it = 0; it < 100; ++it) {
    Word w = random_reduced(rng, 2, 1 + static_cast<int>(rng.below(8)));
    SpaceIsometry g(w);
    auto cls = classify_isometry(tree, g);
    if (cls.kind != IsometryKind::Hyperbolic) continue;
    for (const auto& fp : cls.fixed_points) {
      BoundaryPoint moved = act(tree, g, fp);
      REQUIRE(std::get<TreeBoundary>(moved) == std::get<TreeBoundary>(fp));
    }
  }
  for (int it = 0; it < 100; ++it) {
    SpaceIsometry g(random_hyperbolic(rng, rng.uniform(0.5, 3.0)));
    auto cls = classify_isometry(plane, g);
    REQUIRE(cls.kind == IsometryKind::Hyperbolic);
    for (const auto& fp : cls.fixed_points) {
      BoundaryPoint moved = act(plane, g, fp);
      REQUIRE(bourdon_distance(plane, moved, fp) < 1e-9);
    }
    // Attracting/repelling order: iterating g pulls a generic point
    // toward fixed_points[0].
    BoundaryPoint probe{PlaneBoundary::at(rng.uniform(-4.0, 4.0))};
    double before = bourdon_distance(plane, probe, cls.fixed_points[0]);
    if (before < 0.05) continue;  // started on top of the attractor
    if (bourdon_distance(plane, probe, cls.fixed_points[1]) < 0.05)
      continue;  // pinned near the repellor, convergence is slow there
    BoundaryPoint iter = probe;
    for (int k = 0; k < 12; ++k) iter = act(plane, g, iter);
    REQUIRE(bourdon_distance(plane, iter, cls.fixed_points[0]) <
            0.5 * before + 1e-9);
  }
}

TEST_CASE("stable length agrees with closed forms") {
  Space tree{TreeModel(2)};
  Space plane{PlaneModel()};
  REQUIRE(stable_length(tree, SpaceIsometry(parse_word("abA"))) == 1.0);
  REQUIRE(displacement(tree, SpaceIsometry(parse_word("abA"))) == 3.0);
  REQUIRE(stable_length(tree, SpaceIsometry(Word())) == 0.0);

  double h = std::exp(0.5);
  REQUIRE(std::abs(stable_length(plane, SpaceIsometry(Mobius(h, 0, 0, 1 / h))) -
                   1.0) < 1e-12);

  auto rng = task_rng(62, "stable-length");
  for (int it = 0; it < 120; ++it) {
    Word w = random_reduced(rng, 2, static_cast<int>(rng.below(9)));
    double expect = static_cast<double>(cyclic_decomposition(w).core.size());
    REQUIRE(stable_length(tree, SpaceIsometry(w)) == expect);
  }
  for (int it = 0; it < 60; ++it) {
    double len = rng.uniform(0.8, 2.5);
    Mobius g = random_hyperbolic(rng, len);
    double got = stable_length(plane, SpaceIsometry(g), 64);
    REQUIRE(std::abs(got - len) < 1e-9);
  }
}

TEST_CASE("classification consistency with stable length") {
  Space tree{TreeModel(2)};
  Space plane{PlaneModel()};
  auto rng = task_rng(63, "class-consistency");
  for (int it = 0; it < 100; ++it) {
    Word w = random_reduced(rng, 2, static_cast<int>(rng.below(8)));
    bool hyp = classify_isometry(tree, SpaceIsometry(w)).kind ==
               IsometryKind::Hyperbolic;
    REQUIRE(hyp == (stable_length(tree, SpaceIsometry(w)) > 0.0));
  }
  // Parabolic and elliptic surrogates decay like log(n)/n; hyperbolic
  // translation lengths stay bounded away from zero.
  double parab = stable_length(plane, SpaceIsometry(Mobius(1, 1, 0, 1)), 256);
  REQUIRE(parab >= 0.0);
  REQUIRE(parab < 0.1);
  double ell = stable_length(
      plane, SpaceIsometry(Mobius(std::cos(0.3), -std::sin(0.3), std::sin(0.3),
                                  std::cos(0.3))),
      256);
  REQUIRE(ell < 0.05);
  for (int it = 0; it < 30; ++it) {
    Mobius g = random_hyperbolic(rng, rng.uniform(0.8, 2.0));
    REQUIRE(stable_length(plane, SpaceIsometry(g), 64) > 0.5);
  }
}

TEST_CASE("length subadditivity") {
  Space tree{TreeModel(2)};
  Space plane{PlaneModel()};
  SpaceIsometry e_t{Word()};
  REQUIRE(length_subadditivity_check(tree, e_t, SpaceIsometry(parse_word("ab")),
                                     e_t) == 0.0);
  REQUIRE(length_subadditivity_check(tree, SpaceIsometry(parse_word("a")),
                                     SpaceIsometry(parse_word("b")),
                                     SpaceIsometry(parse_word("A"))) == 0.0);
  auto rng = task_rng(64, "subadd");
  for (int it = 0; it < 1000; ++it) {
    if (it % 2 == 0) {
      SpaceIsometry g1(random_reduced(rng, 2, static_cast<int>(rng.below(7))));
      SpaceIsometry g(random_reduced(rng, 2, static_cast<int>(rng.below(7))));
      SpaceIsometry g2(random_reduced(rng, 2, static_cast<int>(rng.below(7))));
      REQUIRE(length_subadditivity_check(tree, g1, g, g2) >= 0.0);
    } else {
      SpaceIsometry g1(random_mobius(rng)), g(random_mobius(rng)),
          g2(random_mobius(rng));
      REQUIRE(length_subadditivity_check(plane, g1, g, g2) >= -1e-9);
    }
  }
}

TEST_CASE("isometry serialization") {
  Space tree{TreeModel(2)};
  Space plane{PlaneModel()};
  SpaceIsometry w(parse_word("abA"));
  REQUIRE(std::get<Word>(isometry_from_json(tree, isometry_to_json(tree, w))) ==
          parse_word("abA"));
  Mobius m(2.0, 1.0, 1.0, 1.0);
  nlohmann::json j = isometry_to_json(plane, SpaceIsometry(m));
  REQUIRE(j.contains("mat"));
  Mobius back = std::get<Mobius>(isometry_from_json(plane, j));
  REQUIRE(back.a == m.a);
  REQUIRE(back.d == m.d);
  REQUIRE_THROWS_AS(isometry_from_json(plane, nlohmann::json{{"mat", {1, 2}}}),
                    InvalidInput);
  REQUIRE_THROWS_AS(isometry_from_json(tree, nlohmann::json{{"mat", {1, 2}}}),
                    InvalidInput);
}

TEST_CASE("power overflow is reported, not silently wrong") {
  double h = std::exp(20.0);
  Mobius g(h, 0.0, 0.0, 1.0 / h);
  REQUIRE_THROWS_AS(mobius_power(g, 64), NumericalFailure);
}
