#include <doctest.h>

#include <random>

#include "bell/errors.hpp"
#include "bell/scenario.hpp"

using namespace bell;

TEST_CASE("scenario parsing and counting") {
  const BellScenario s = BellScenario::parse("2,2,1");
  CHECK(s.parties() == 3);
  CHECK(s.dimension() == 17);
  CHECK(s.vertex_count() == 32);
  CHECK(s.setting_tuples() == 4);

  CHECK(BellScenario::parse("2,2").dimension() == 8);
  CHECK(BellScenario::parse("2,2,1,1").dimension() == 35);
  CHECK(BellScenario::parse("2,2,1,1").vertex_count() == 64);
  CHECK(BellScenario::parse("2,2,1,1,1").dimension() == 71);
  CHECK(BellScenario::parse("2,2,1,1,1").vertex_count() == 128);

  CHECK_THROWS_AS(BellScenario::parse(""), SpecError);
  CHECK_THROWS_AS(BellScenario::parse("2,x"), SpecError);
  CHECK_THROWS_AS(BellScenario::parse("2,0"), SpecError);
}

TEST_CASE("parametrization order matches the printed coordinate list") {
  // P(a0),P(a1),P(b0),P(b1),P(c0), P(a0b0..a1b1), P(a0c0),P(a1c0),
  // P(b0c0),P(b1c0), P(a0b0c0..a1b1c0)
  const Parametrization par(BellScenario::parse("2,2,1"));
  REQUIRE(par.size() == 17);
  auto T = [](std::vector<std::pair<int, int>> m) { return Term{std::move(m)}; };
  CHECK(par.index_of(T({{0, 0}})) == 0);
  CHECK(par.index_of(T({{0, 1}})) == 1);
  CHECK(par.index_of(T({{1, 0}})) == 2);
  CHECK(par.index_of(T({{1, 1}})) == 3);
  CHECK(par.index_of(T({{2, 0}})) == 4);
  CHECK(par.index_of(T({{0, 0}, {1, 0}})) == 5);
  CHECK(par.index_of(T({{0, 0}, {1, 1}})) == 6);
  CHECK(par.index_of(T({{0, 1}, {1, 0}})) == 7);
  CHECK(par.index_of(T({{0, 1}, {1, 1}})) == 8);
  CHECK(par.index_of(T({{0, 0}, {2, 0}})) == 9);
  CHECK(par.index_of(T({{0, 1}, {2, 0}})) == 10);
  CHECK(par.index_of(T({{1, 0}, {2, 0}})) == 11);
  CHECK(par.index_of(T({{1, 1}, {2, 0}})) == 12);
  CHECK(par.index_of(T({{0, 0}, {1, 0}, {2, 0}})) == 13);
  CHECK(par.index_of(T({{0, 0}, {1, 1}, {2, 0}})) == 14);
  CHECK(par.index_of(T({{0, 1}, {1, 0}, {2, 0}})) == 15);
  CHECK(par.index_of(T({{0, 1}, {1, 1}, {2, 0}})) == 16);
  CHECK(par.index_of(T({{0, 0}, {1, 0}, {2, 1}})) == -1);
}

TEST_CASE("deterministic strategies round-trip through their index") {
  const BellScenario s = BellScenario::parse("2,2,1");
  for (long i = 0; i < s.vertex_count(); ++i) {
    const auto strat = DeterministicStrategy::from_index(s, i);
    CHECK(strat.index() == i);
  }
}

TEST_CASE("vertex behaviors are 0/1 products of outcomes") {
  const BellScenario s = BellScenario::parse("2,2,1");
  const Parametrization par(s);
  const auto vertices = enumerate_vertices(s);
  REQUIRE(vertices.size() == 32);
  for (long i = 0; i < 32; ++i) {
    const auto strat = DeterministicStrategy::from_index(s, i);
    for (int k = 0; k < par.size(); ++k) {
      Rat expect = 1;
      for (const auto& [p, x] : par.terms[k].members)
        if (strat.outcome[p][x] != 0) expect = 0;
      CHECK(vertices[i].coords[k] == expect);
    }
  }
}

TEST_CASE("strategy joints are normalized and no-signaling") {
  const BellScenario s = BellScenario::parse("2,2,1");
  for (long i = 0; i < s.vertex_count(); ++i) {
    const auto strat = DeterministicStrategy::from_index(s, i);
    const FullJoint joint = FullJoint::of_strategy(strat);
    CHECK(check_no_signaling(joint).ok);
    const Behavior projected = project_to_parametrization(joint);
    CHECK(projected.coords == behavior_of(strat).coords);
  }
}

TEST_CASE("uniform joint projects to 2^-k coordinates") {
  const BellScenario s = BellScenario::parse("2,2,1");
  const Parametrization par(s);
  const Behavior b = project_to_parametrization(FullJoint::uniform(s));
  for (int k = 0; k < par.size(); ++k) {
    const Rat expect(1, 1 << par.terms[k].members.size());
    CHECK(b.coords[k] == expect);
  }
}

TEST_CASE("signaling and unnormalized joints are rejected") {
  const BellScenario s = BellScenario::parse("2,2");
  FullJoint joint = FullJoint::uniform(s);
  // party 0's outcome now depends on party 1's setting: signaling
  for (long idx = 0; idx < s.setting_tuples(); ++idx) {
    const int y = static_cast<int>(idx & 1);
    for (int bits = 0; bits < 4; ++bits)
      joint.p[idx][bits] = (bits >> 1) == y && (bits & 1) == 0 ? 1 : 0;
  }
  CHECK_FALSE(check_no_signaling(joint).ok);
  CHECK_FALSE(check_no_signaling(joint).violations.empty());
  CHECK_THROWS_AS(project_to_parametrization(joint), SignalingError);

  FullJoint bad = FullJoint::uniform(s);
  bad.p[0][0] += 1;
  CHECK_THROWS_AS(check_no_signaling(bad), NormalizationError);
}

TEST_CASE("vertex enumeration respects the capacity cap") {
  const BellScenario big(std::vector<int>(21, 1));
  CHECK(big.vertex_count() == (1L << 21));
  CHECK_THROWS_AS(enumerate_vertices(big), CapacityError);
  CHECK(enumerate_vertices(BellScenario::parse("1,1"), 4).size() == 4);
}

TEST_CASE("random local mixtures stay no-signaling") {
  const BellScenario s = BellScenario::parse("2,2,1");
  const auto vertices = enumerate_vertices(s);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    FullJoint mix = FullJoint::uniform(s);
    for (auto& row : mix.p) std::fill(row.begin(), row.end(), Rat(0));
    Rat total = 0;
    std::vector<Rat> weights;
    for (int k = 0; k < 5; ++k) {
      weights.emplace_back(1 + static_cast<long>(rng() % 7), 8);
      weights.back().canonicalize();
      total += weights.back();
    }
    for (int k = 0; k < 5; ++k) {
      const auto strat =
          DeterministicStrategy::from_index(s, static_cast<long>(rng() % 32));
      const FullJoint vj = FullJoint::of_strategy(strat);
      for (std::size_t idx = 0; idx < mix.p.size(); ++idx)
        for (std::size_t bits = 0; bits < mix.p[idx].size(); ++bits)
          mix.p[idx][bits] += weights[k] / total * vj.p[idx][bits];
    }
    CHECK(check_no_signaling(mix).ok);
  }
}
