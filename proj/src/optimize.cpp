#include "bell/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include "bell/errors.hpp"

namespace bell {

namespace {

int resolve_threads(int requested, int restarts) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("BELLPOLY_THREADS")) n = std::atoi(env);
    if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
  }
  return std::max(1, std::min(n, restarts));
}

}  // namespace

SettingsAssignment random_settings(const BellScenario& s, uint64_t seed,
                                   uint64_t substream) {
  std::seed_seq seq{seed, substream};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  SettingsAssignment a;
  a.scenario = s;
  a.obs.resize(s.parties());
  for (int p = 0; p < s.parties(); ++p) {
    a.obs[p].resize(s.settings_per_party[p]);
    for (auto& o : a.obs[p]) {
      // uniform on the sphere: z uniform in [-1,1], azimuth uniform
      const double z = 2 * unif(rng) - 1;
      o.theta = std::acos(std::clamp(z, -1.0, 1.0));
      o.phi = 2 * M_PI * unif(rng);
    }
  }
  return a;
}

OptimizationResult seesaw(const CorrelatorForm& cf, const CorrelationTensor& t,
                          SettingsAssignment init, const SeesawOptions& opts) {
  if (cf.scenario != init.scenario)
    throw SpecError("seesaw: settings do not match the inequality scenario");
  OptimizationResult r;
  r.restarts_used = 1;
  double value = bell_expectation(cf, t, init);
  r.trace.push_back(value);
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    for (int p = 0; p < cf.scenario.parties(); ++p)
      for (int x = 0; x < cf.scenario.settings_per_party[p]; ++x) {
        const Eigen::Vector3d v = effective_field(cf, t, init, p, x);
        // degenerate field: any direction is optimal, keep the current one
        if (v.norm() < 1e-12) continue;
        init.obs[p][x] = Observable::from_bloch(v);
      }
    const double next = bell_expectation(cf, t, init);
    ++r.sweeps;
    r.trace.push_back(next);
    const bool settled = next - value <= opts.tol;
    value = next;
    if (settled) {
      r.converged = true;
      break;
    }
  }
  r.best_value = value;
  r.best_settings = std::move(init);
  return r;
}

OptimizationResult multistart_max(const CorrelatorForm& cf, const State& s,
                                  const MultistartOptions& opts) {
  if (opts.restarts < 1) throw SpecError("multistart_max: needs at least one restart");
  const CorrelationTensor t = correlation_tensor(s);

  auto run_one = [&](int restart) {
    return seesaw(cf, t, random_settings(cf.scenario, opts.seed, restart),
                  opts.seesaw);
  };

  auto better = [](const OptimizationResult& a, const OptimizationResult& b) {
    return a.best_value > b.best_value;
  };

  OptimizationResult best;
  long total_sweeps = 0;
  if (std::isfinite(opts.early_stop_above)) {
    // sequential so the outcome is independent of scheduling
    int used = 0;
    for (int r = 0; r < opts.restarts; ++r) {
      OptimizationResult one = run_one(r);
      total_sweeps += one.sweeps;
      ++used;
      if (better(one, best)) best = std::move(one);
      if (best.best_value > opts.early_stop_above) break;
    }
    best.restarts_used = used;
    best.sweeps = total_sweeps;
    return best;
  }

  const int threads = resolve_threads(opts.threads, opts.restarts);
  std::vector<OptimizationResult> locals(threads);
  std::vector<int> local_idx(threads, -1);
  std::vector<long> local_sweeps(threads, 0);
  std::atomic<int> next{0};
  auto worker = [&](int tid) {
    for (int r = next.fetch_add(1); r < opts.restarts; r = next.fetch_add(1)) {
      OptimizationResult one = run_one(r);
      local_sweeps[tid] += one.sweeps;
      if (better(one, locals[tid]) || local_idx[tid] < 0) {
        locals[tid] = std::move(one);
        local_idx[tid] = r;
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int tid = 0; tid < threads; ++tid) pool.emplace_back(worker, tid);
    for (auto& th : pool) th.join();
  }
  int best_idx = -1;
  for (int tid = 0; tid < threads; ++tid) {
    total_sweeps += local_sweeps[tid];
    if (local_idx[tid] < 0) continue;
    // tie on value -> keep the lowest restart index, so the merge is
    // deterministic however the restarts were scheduled
    if (best_idx < 0 || better(locals[tid], best) ||
        (locals[tid].best_value == best.best_value && local_idx[tid] < best_idx)) {
      best = std::move(locals[tid]);
      best_idx = local_idx[tid];
    }
  }
  best.restarts_used = opts.restarts;
  best.sweeps = total_sweeps;
  return best;
}

BestOfResult best_of(const std::vector<CorrelatorForm>& cfs, const State& s,
                     const MultistartOptions& opts) {
  if (cfs.empty()) throw SpecError("best_of: empty inequality list");
  BestOfResult r;
  for (std::size_t i = 0; i < cfs.size(); ++i) {
    r.per_inequality.push_back(multistart_max(cfs[i], s, opts));
    if (r.per_inequality.back().best_value > r.value) {
      r.value = r.per_inequality.back().best_value;
      r.argmax = i;
    }
  }
  return r;
}

double qc_ratio(const std::vector<CorrelatorForm>& cfs, const State& s,
                const MultistartOptions& opts) {
  return best_of(cfs, s, opts).value / 2.0;
}

GghzAnalytic gghz_analytic(double alpha) {
  if (alpha < 0 || alpha > 1) throw SpecError("gghz_analytic: alpha outside [0,1]");
  const double ab = alpha * std::sqrt(1 - alpha * alpha);
  GghzAnalytic r;
  r.max_value = 2 * std::sqrt(1 + 4 * ab * ab);
  r.theta = std::asin(1 / std::sqrt(1 + 4 * ab * ab));
  r.violation = ab > 0;
  return r;
}

State NoiseFamily::at(double p) const {
  return kind == NoiseKind::White ? white_noise(base, p) : colored_noise(base, p);
}

ThresholdResult noise_threshold(const NoiseFamily& family,
                                const std::vector<CorrelatorForm>& cfs,
                                double tol, const MultistartOptions& opts) {
  if (cfs.empty()) throw SpecError("noise_threshold: empty inequality list");
  if (tol < 1e-6) throw SpecError("noise_threshold: tol too small");

  ThresholdResult r;
  {
    BestOfResult pure = best_of(cfs, family.at(1.0), opts);
    r.pure_value = pure.value;
  }

  auto violated = [&](double p) {
    const State s = family.at(p);
    for (const auto& cf : cfs) {
      MultistartOptions eo = opts;
      eo.early_stop_above = cf.bound.get_d() + 1e-9;
      if (multistart_max(cf, s, eo).best_value > cf.bound.get_d() + 1e-9)
        return true;
    }
    return false;
  };

  if (family.kind == NoiseKind::White) {
    // every nonempty correlator scales linearly with p under white noise, so
    // <I>(p) = c + p (<I>(1) - c) and each cf crosses its bound at a known p
    double best = std::numeric_limits<double>::infinity();
    for (const auto& cf : cfs) {
      const double c = cf.constant.get_d();
      const double pure = multistart_max(cf, family.at(1.0), opts).best_value;
      if (pure > cf.bound.get_d() + 1e-12)
        best = std::min(best, (cf.bound.get_d() - c) / (pure - c));
    }
    if (best <= 1) {
      r.closed_form = best;
      r.has_closed_form = true;
    }
  }

  double lo = 0, hi = -1;
  for (double p = 0; p <= 1 + 1e-12; p += 0.02) {
    const double pc = std::min(p, 1.0);
    if (violated(pc)) {
      hi = pc;
      break;
    }
    lo = pc;
  }
  if (hi < 0) return r;  // no violation even at p = 1

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (violated(mid) ? hi : lo) = mid;
  }
  r.found = true;
  r.p_star = 0.5 * (lo + hi);
  return r;
}

}  // namespace bell
