#include <doctest.h>

#include <random>
#include <set>

#include "published_facets.hpp"
#include "bell/errors.hpp"
#include "bell/facets.hpp"

using namespace bell;

namespace {

SymmetryOp random_op(const BellScenario& s, std::mt19937_64& rng) {
  const auto gens = symmetry_generators(s);
  SymmetryOp op = identity_op(s);
  for (int k = 0; k < 12; ++k)
    op = compose(gens[rng() % gens.size()], op);
  return op;
}

BellInequality random_integer_ineq(const BellScenario& s, std::mt19937_64& rng) {
  const Parametrization par(s);
  RatVec coeffs(par.size(), Rat(0));
  bool nonzero = false;
  for (auto& c : coeffs) {
    c = static_cast<long>(rng() % 9) - 4;
    if (c != 0) nonzero = true;
  }
  if (!nonzero) coeffs[0] = 1;
  return {s, canonicalize(coeffs, Rat(static_cast<long>(rng() % 7) - 3))};
}

}  // namespace

TEST_CASE("correlator form preserves the evaluation exactly") {
  const BellScenario s = BellScenario::parse("2,2,1");
  const auto vertices = enumerate_vertices(s);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const BellInequality ineq = random_integer_ineq(s, rng);
    const CorrelatorForm cf = to_correlator_form(ineq);
    for (const auto& v : vertices) CHECK(evaluate(ineq, v) == evaluate(cf, v));
    CHECK(from_correlator_form(cf) == ineq);
  }
}

TEST_CASE("probability/correlator round-trip on random rational behaviors") {
  const BellScenario s = BellScenario::parse("2,2,1");
  const Parametrization par(s);
  const auto vertices = enumerate_vertices(s);
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    // random rational convex combination of vertices: a valid exact behavior
    Behavior b{s, RatVec(par.size(), Rat(0))};
    Rat total = 0;
    std::vector<std::pair<long, Rat>> picks;
    for (int k = 0; k < 4; ++k) {
      Rat w(1 + static_cast<long>(rng() % 11), 12);
      w.canonicalize();
      picks.emplace_back(rng() % vertices.size(), w);
      total += w;
    }
    for (const auto& [vi, w] : picks)
      for (int i = 0; i < par.size(); ++i)
        b.coords[i] += w / total * vertices[vi].coords[i];

    const auto corr = correlators_of(b);
    // P_S = 2^-|S| sum over subsets T of S of E_T (E_empty = 1)
    for (int i = 0; i < par.size(); ++i) {
      const auto& members = par.terms[i].members;
      const int k = static_cast<int>(members.size());
      Rat sum = 1;
      for (int mask = 1; mask < (1 << k); ++mask) {
        Term sub;
        for (int j = 0; j < k; ++j)
          if (mask & (1 << j)) sub.members.push_back(members[j]);
        sum += corr.at(sub);
      }
      CHECK(b.coords[i] == sum / (1 << k));
    }
  }
}

TEST_CASE("vertex correlators are products of outcome signs") {
  const BellScenario s = BellScenario::parse("2,2,1");
  const Parametrization par(s);
  for (long i = 0; i < s.vertex_count(); ++i) {
    const auto strat = DeterministicStrategy::from_index(s, i);
    const auto corr = correlators_of(behavior_of(strat));
    for (const auto& term : par.terms) {
      Rat expect = 1;
      for (const auto& [p, x] : term.members)
        expect *= strat.outcome[p][x] == 0 ? 1 : -1;
      CHECK(corr.at(term) == expect);
    }
  }
}

TEST_CASE("positivity facets") {
  const BellScenario s = BellScenario::parse("2,2,1");
  const auto pos = positivity_facets(s);
  CHECK(pos.size() == 32);
  const auto vertices = enumerate_vertices(s);
  for (const auto& f : pos) {
    CHECK(is_positivity(f));
    for (const auto& v : vertices) CHECK(evaluate(f, v) <= f.prob_form.bound);
  }
  std::mt19937_64 rng(2);
  CHECK_FALSE(is_positivity(from_correlator_form(named_inequality("i3"))));
}

TEST_CASE("symmetry group sizes") {
  CHECK(symmetry_group_order(BellScenario::parse("2,2,1")) == 256);
  CHECK(symmetry_group_order(BellScenario::parse("2,2,1"), false) == 128);
  CHECK(symmetry_group_order(BellScenario::parse("2,2")) == 128);
  CHECK(generate_group(BellScenario::parse("2,2,1")).size() == 256);
  CHECK(generate_group(BellScenario::parse("2,2")).size() == 128);
  CHECK(generate_group(BellScenario::parse("2,2,1"), false).size() == 128);
}

TEST_CASE("symmetry ops compose and invert consistently on strategies") {
  const BellScenario s = BellScenario::parse("2,2,1");
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const SymmetryOp g = random_op(s, rng);
    const SymmetryOp h = random_op(s, rng);
    const auto strat =
        DeterministicStrategy::from_index(s, static_cast<long>(rng() % 32));
    CHECK(apply(compose(g, h), strat).index() ==
          apply(g, apply(h, strat)).index());
    CHECK(apply(inverse(g), apply(g, strat)).index() == strat.index());
    CHECK(compose(g, inverse(g)) == identity_op(s));
  }
}

TEST_CASE("inequality transport matches strategy transport") {
  const BellScenario s = BellScenario::parse("2,2,1");
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const SymmetryOp g = random_op(s, rng);
    const BellInequality ineq = random_integer_ineq(s, rng);
    const BellInequality moved = apply(g, ineq);
    for (long i = 0; i < s.vertex_count(); ++i) {
      const auto strat = DeterministicStrategy::from_index(s, i);
      const Rat lhs = evaluate(moved, behavior_of(apply(g, strat))) -
                      moved.prob_form.bound;
      const Rat rhs = evaluate(ineq, behavior_of(strat)) - ineq.prob_form.bound;
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("classification of the published 3-party facets") {
  const auto facets = testdata::published_facets_221();
  REQUIRE(facets.size() == 48);
  std::set<Halfspace> unique;
  for (const auto& f : facets) unique.insert(f.prob_form);
  CHECK(unique.size() == 48);

  const auto classes = classify(facets);
  REQUIRE(classes.size() == 2);
  CHECK(classes[0].positivity);
  CHECK(classes[0].orbit_size == 32);
  CHECK(classes[0].member_indices.size() == 32);
  CHECK_FALSE(classes[1].positivity);
  CHECK(classes[1].orbit_size == 16);
  CHECK(classes[1].member_indices.size() == 16);
}

TEST_CASE("generalized facet reduces to I3 and expands multiplicatively") {
  const CorrelatorForm g3 = generalized_facet(3);
  const CorrelatorForm i3 = named_inequality("I3");
  CHECK(g3.scenario == i3.scenario);
  CHECK(g3.bound == i3.bound);
  CHECK(g3.constant == i3.constant);
  CHECK(g3.terms == i3.terms);

  CHECK(generalized_facet(4).terms.size() == 19);
  CHECK(generalized_facet(5).terms.size() == 39);
  CHECK(generalized_facet(4).bound == 2);
  CHECK_THROWS_AS(generalized_facet(2), SpecError);
}

TEST_CASE("named inequalities") {
  const CorrelatorForm chsh = named_inequality("chsh");
  CHECK(chsh.terms.size() == 4);
  CHECK(chsh.bound == 2);

  for (const char* name : {"I1", "I2", "I3"}) {
    const CorrelatorForm cf = named_inequality(name);
    CHECK(cf.terms.size() == 9);
    CHECK(cf.bound == 2);
    CHECK(cf.constant == 0);
  }
  CHECK(named_inequality("I1").scenario == BellScenario::parse("1,2,2"));
  CHECK(named_inequality("I2").scenario == BellScenario::parse("2,1,2"));
  CHECK(named_inequality("I3").scenario == BellScenario::parse("2,2,1"));

  CHECK(named_inequality("mermin").terms.size() == 4);
  CHECK(named_inequality("svetlichny").terms.size() == 8);
  CHECK(named_inequality("svetlichny").bound == 4);
  CHECK_THROWS_AS(named_inequality("nope"), SpecError);
}

TEST_CASE("classical bounds of named inequalities hold on all vertices") {
  for (const char* name : {"chsh", "i1", "i2", "i3", "mermin", "svetlichny"}) {
    const CorrelatorForm cf = named_inequality(name);
    Rat best(-1000);
    for (const auto& v : enumerate_vertices(cf.scenario))
      best = std::max(best, evaluate(cf, v));
    CHECK(best == cf.bound);  // tight: attained and never exceeded
  }
}
