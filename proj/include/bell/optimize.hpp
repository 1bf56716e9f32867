#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "bell/facets.hpp"
#include "bell/quantum.hpp"

namespace bell {

struct SeesawOptions {
  double tol = 1e-10;
  int max_sweeps = 500;
};

struct OptimizationResult {
  double best_value = -std::numeric_limits<double>::infinity();
  SettingsAssignment best_settings;
  int restarts_used = 0;
  long sweeps = 0;           // total across restarts
  bool converged = false;    // best restart hit tol before max_sweeps
  std::vector<double> trace; // per-sweep values of the best restart
};

// coordinate ascent from a fixed initial assignment; the value trace is
// nondecreasing because each observable update is an exact line maximizer
OptimizationResult seesaw(const CorrelatorForm& cf, const CorrelationTensor& t,
                          SettingsAssignment init, const SeesawOptions& opts = {});

struct MultistartOptions {
  int restarts = 64;
  uint64_t seed = 1;
  SeesawOptions seesaw;
  // stop after the first restart whose value exceeds this (runs sequentially)
  double early_stop_above = std::numeric_limits<double>::infinity();
  int threads = 0;  // 0: BELLPOLY_THREADS env var, else hardware
};

// deterministic for a fixed seed: every restart draws from its own substream
// and ties between equal maxima resolve to the lowest restart index
OptimizationResult multistart_max(const CorrelatorForm& cf, const State& s,
                                  const MultistartOptions& opts = {});

SettingsAssignment random_settings(const BellScenario& s, uint64_t seed,
                                   uint64_t substream);

struct BestOfResult {
  double value = -std::numeric_limits<double>::infinity();
  std::size_t argmax = 0;
  std::vector<OptimizationResult> per_inequality;
};

BestOfResult best_of(const std::vector<CorrelatorForm>& cfs, const State& s,
                     const MultistartOptions& opts = {});

// max of best_of over the classical bound 2 shared by the named inequalities
double qc_ratio(const std::vector<CorrelatorForm>& cfs, const State& s,
                const MultistartOptions& opts = {});

// closed-form optimum of the three-qubit nontrivial facet on
// a|000> + sqrt(1-a^2)|111>: 2 sqrt(1 + 4 a^2 (1-a^2)) at sin t = 1/sqrt(...)
struct GghzAnalytic {
  double max_value = 2;
  double theta = 0;
  bool violation = false;
};

GghzAnalytic gghz_analytic(double alpha);

enum class NoiseKind { White, Colored };

struct NoiseFamily {
  State base;
  NoiseKind kind = NoiseKind::White;

  State at(double p) const;
};

struct ThresholdResult {
  bool found = false;
  double p_star = 1;
  double pure_value = 0;       // optimum at p = 1
  double closed_form = 0;      // white noise only: bound / linearized value
  bool has_closed_form = false;
};

// critical visibility above which max_i <I_i> exceeds the classical bound 2;
// coarse scan in steps of 0.02 followed by bisection down to tol
ThresholdResult noise_threshold(const NoiseFamily& family,
                                const std::vector<CorrelatorForm>& cfs,
                                double tol = 1e-3,
                                const MultistartOptions& opts = {});

}  // namespace bell
