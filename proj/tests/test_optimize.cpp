#include <doctest.h>

#include <cmath>

#include "bell/errors.hpp"
#include "bell/optimize.hpp"

using namespace bell;

TEST_CASE("seesaw traces are nondecreasing over 100 random starts") {
  const CorrelatorForm cf = named_inequality("i3");
  const CorrelationTensor t = correlation_tensor(w_state());
  for (int start = 0; start < 100; ++start) {
    const auto r = seesaw(cf, t, random_settings(cf.scenario, 99, start));
    REQUIRE(r.trace.size() >= 2);
    for (std::size_t k = 1; k < r.trace.size(); ++k)
      CHECK(r.trace[k] >= r.trace[k - 1] - 1e-12);
    CHECK(r.best_value == r.trace.back());
  }
}

TEST_CASE("converged settings satisfy the effective-field optimality") {
  const CorrelatorForm cf = named_inequality("i3");
  const CorrelationTensor t = correlation_tensor(w_state());
  const auto r = seesaw(cf, t, random_settings(cf.scenario, 4, 0));
  for (int p = 0; p < 3; ++p)
    for (int x = 0; x < cf.scenario.settings(p); ++x) {
      const Eigen::Vector3d v = effective_field(cf, t, r.best_settings, p, x);
      if (v.norm() < 1e-12) continue;
      CHECK(v.dot(r.best_settings.obs[p][x].bloch()) ==
            doctest::Approx(v.norm()).epsilon(1e-9));
    }
}

TEST_CASE("seesaw on the maximally mixed state stays at the constant") {
  const CorrelatorForm cf = named_inequality("i3");
  const CorrelationTensor t = correlation_tensor(maximally_mixed(3));
  const auto init = random_settings(cf.scenario, 8, 0);
  const auto r = seesaw(cf, t, init);
  CHECK(std::abs(r.best_value) < 1e-12);
  // zero effective field everywhere: settings keep their initial values
  for (int p = 0; p < 3; ++p)
    for (int x = 0; x < cf.scenario.settings(p); ++x)
      CHECK(r.best_settings.obs[p][x].theta == init.obs[p][x].theta);
}

TEST_CASE("multistart is deterministic and monotone in the restart prefix") {
  const CorrelatorForm cf = named_inequality("i3");
  const State s = w_state();
  MultistartOptions a;
  a.seed = 7;
  a.restarts = 8;
  const double v8 = multistart_max(cf, s, a).best_value;
  const double v8again = multistart_max(cf, s, a).best_value;
  CHECK(v8 == v8again);
  a.restarts = 16;
  CHECK(multistart_max(cf, s, a).best_value >= v8);
  a.restarts = 0;
  CHECK_THROWS_AS(multistart_max(cf, s, a), SpecError);
}

TEST_CASE("optimized values respect the algebraic cap") {
  for (const char* name : {"i1", "i2", "i3"}) {
    const CorrelatorForm cf = named_inequality(name);
    MultistartOptions opts;
    opts.restarts = 16;
    for (const State& s : {ghz(), w_state(), sample_canonical_state(21)}) {
      const double v = multistart_max(cf, s, opts).best_value;
      CHECK(v <= 4 * std::sqrt(2.0) - 2 + 1e-6);
    }
  }
}

TEST_CASE("known optima") {
  MultistartOptions opts;
  opts.seed = 7;
  const CorrelatorForm i3 = named_inequality("i3");
  CHECK(multistart_max(i3, w_state(), opts).best_value ==
        doctest::Approx(3.105).epsilon(3e-3));
  CHECK(multistart_max(i3, ghz(), opts).best_value ==
        doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-6));
  CHECK(multistart_max(named_inequality("mermin"), ghz(), opts).best_value ==
        doctest::Approx(4).epsilon(1e-6));
}

TEST_CASE("gghz analytics") {
  const auto mid = gghz_analytic(1 / std::sqrt(2.0));
  CHECK(mid.max_value == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-12));
  CHECK(mid.theta == doctest::Approx(M_PI / 4).epsilon(1e-12));
  CHECK(mid.violation);

  CHECK(gghz_analytic(1).max_value == doctest::Approx(2));
  CHECK_FALSE(gghz_analytic(1).violation);
  CHECK_FALSE(gghz_analytic(0).violation);
  CHECK(gghz_analytic(std::sqrt(21.0 / 25)).max_value ==
        doctest::Approx(2 * std::sqrt(1 + 336.0 / 625)).epsilon(1e-12));
  CHECK_THROWS_AS(gghz_analytic(1.5), SpecError);
}

TEST_CASE("biseparable state violates only I1") {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(8);
  psi[0] = 1 / std::sqrt(2.0);  // |0> (|00> + |11>) / sqrt(2)
  psi[3] = 1 / std::sqrt(2.0);
  const State s = pure_state(psi);
  MultistartOptions opts;
  opts.seed = 5;
  const std::vector<CorrelatorForm> cfs = {named_inequality("i1"),
                                           named_inequality("i2"),
                                           named_inequality("i3")};
  const BestOfResult r = best_of(cfs, s, opts);
  CHECK(r.argmax == 0);
  CHECK(r.value == doctest::Approx(4 * std::sqrt(2.0) - 2).epsilon(1e-5));
  CHECK(r.per_inequality[1].best_value <= 2 + 1e-6);
  CHECK(r.per_inequality[2].best_value <= 2 + 1e-6);
}

TEST_CASE("qc ratios") {
  MultistartOptions opts;
  const std::vector<CorrelatorForm> facet = {named_inequality("i1"),
                                             named_inequality("i2"),
                                             named_inequality("i3")};
  CHECK(qc_ratio(facet, ghz(), opts) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(qc_ratio({named_inequality("mermin")}, ghz(), opts) ==
        doctest::Approx(2).epsilon(1e-6));
  CHECK(qc_ratio(facet, product_zero(3), opts) <= 1 + 1e-9);
}

TEST_CASE("noise thresholds") {
  MultistartOptions opts;
  opts.restarts = 24;
  const NoiseFamily ghz_white{ghz(), NoiseKind::White};
  const auto r =
      noise_threshold(ghz_white, {named_inequality("i3")}, 1e-4, opts);
  REQUIRE(r.found);
  CHECK(r.p_star == doctest::Approx(1 / std::sqrt(2.0)).epsilon(5e-4));
  REQUIRE(r.has_closed_form);
  CHECK(std::abs(r.p_star - r.closed_form) < 1e-3);
  CHECK(r.pure_value == doctest::Approx(2 * std::sqrt(2.0)).epsilon(1e-6));

  const NoiseFamily hopeless{product_zero(3), NoiseKind::White};
  CHECK_FALSE(noise_threshold(hopeless, {named_inequality("i3")}, 1e-3, opts).found);

  const NoiseFamily colored{ghz(), NoiseKind::Colored};
  const auto rc =
      noise_threshold(colored, {named_inequality("mermin")}, 1e-3, opts);
  REQUIRE(rc.found);
  CHECK(rc.p_star == doctest::Approx(0.38).epsilon(0.06));
}

TEST_CASE("early stop reports the first qualifying restart") {
  const CorrelatorForm cf = named_inequality("i3");
  MultistartOptions opts;
  opts.seed = 3;
  opts.restarts = 64;
  opts.early_stop_above = 2.0 + 1e-6;
  const auto r = multistart_max(cf, ghz(), opts);
  CHECK(r.best_value > 2.0 + 1e-6);
  CHECK(r.restarts_used <= 64);
}
