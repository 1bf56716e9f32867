#include "bell/quantum.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "bell/errors.hpp"

namespace bell {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Matrix2cd pauli(int k) {
  Eigen::Matrix2cd m;
  const cplx i(0, 1);
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

}  // namespace

State pure_state(Eigen::VectorXcd amplitudes) {
  const long dim = amplitudes.size();
  int n = 0;
  while ((1L << n) < dim) ++n;
  if ((1L << n) != dim || dim < 2)
    throw SpecError("amplitude vector length must be a power of two >= 2");
  const double norm = amplitudes.norm();
  if (norm < 1e-12) throw SpecError("zero state vector");
  amplitudes /= norm;
  State s;
  s.qubits = n;
  s.psi = amplitudes;
  s.rho = amplitudes * amplitudes.adjoint();
  return s;
}

State mixed_state(Eigen::MatrixXcd rho) {
  const long dim = rho.rows();
  int n = 0;
  while ((1L << n) < dim) ++n;
  if ((1L << n) != dim || rho.cols() != dim)
    throw SpecError("density matrix must be square with power-of-two size");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw SpecError("density matrix not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-12 || std::abs(rho.trace().imag()) > 1e-12)
    throw SpecError("density matrix trace != 1");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw SpecError("density matrix not positive semidefinite");
  State s;
  s.qubits = n;
  s.rho = std::move(rho);
  return s;
}

State maximally_mixed(int qubits) {
  const long dim = 1L << qubits;
  return mixed_state(Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim));
}

State product_zero(int qubits) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1L << qubits);
  v(0) = 1;
  return pure_state(std::move(v));
}

State gghz(double alpha, int qubits) {
  if (alpha < 0 || alpha > 1) throw SpecError("gghz: alpha must be in [0,1]");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1L << qubits);
  v(0) = alpha;
  v((1L << qubits) - 1) = std::sqrt(1.0 - alpha * alpha);
  return pure_state(std::move(v));
}

State ghz(int qubits) { return gghz(1.0 / std::sqrt(2.0), qubits); }

State w_class(double p001, double p010, double p100) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
  v(0b001) = std::sqrt(p001);
  v(0b010) = std::sqrt(p010);
  v(0b100) = std::sqrt(p100);
  return pure_state(std::move(v));
}

State w_state() { return w_class(1.0 / 3, 1.0 / 3, 1.0 / 3); }
State w1_state() { return w_class(1.0 / 6, 2.0 / 6, 3.0 / 6); }

State gg_class(double alpha, double beta) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
  v(0b000) = std::sin(alpha) * std::cos(beta);
  v(0b101) = std::sin(alpha) * std::sin(beta);
  v(0b111) = std::cos(alpha);
  return pure_state(std::move(v));
}

State gw_class(double alpha, double beta) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
  v(0b001) = std::sin(alpha) * std::cos(beta);
  v(0b010) = std::sin(alpha) * std::sin(beta);
  v(0b100) = std::cos(alpha);
  return pure_state(std::move(v));
}

State psi_gs(double alpha, double beta, double phi) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
  v(0b000) = alpha;
  v(0b110) = beta * std::cos(phi);
  v(0b111) = beta * std::sin(phi);
  return pure_state(std::move(v));
}

State acin_canonical(const std::array<double, 5>& lambda, double phi) {
  for (double l : lambda)
    if (l < 0) throw SpecError("canonical form requires lambda_i >= 0");
  if (lambda[0] == 0) throw SpecError("canonical form requires lambda_0 != 0");
  if (lambda[2] + lambda[4] == 0 || lambda[3] + lambda[4] == 0)
    throw SpecError("canonical form requires lambda_2+lambda_4 != 0 and lambda_3+lambda_4 != 0");
  if (phi < 0 || phi > kPi) throw SpecError("canonical form requires phi in [0,pi]");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
  v(0b000) = lambda[0];
  v(0b100) = lambda[1] * std::exp(cplx(0, phi));
  v(0b101) = lambda[2];
  v(0b110) = lambda[3];
  v(0b111) = lambda[4];
  return pure_state(std::move(v));
}

State ghz_class_example() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
  v(0b000) = std::sqrt(22.0 / 50);
  v(0b100) = std::sqrt(3.0 / 50);
  v(0b101) = std::sqrt(2.0 / 50);
  v(0b110) = std::sqrt(21.0 / 50);
  v(0b111) = std::sqrt(2.0 / 50);
  return pure_state(std::move(v));
}

State gghz1() { return gghz(std::sqrt(8.0 / 9)); }
State gghz2() { return gghz(std::sqrt(25.0 / 29)); }
State gghz3() { return gghz(std::sqrt(21.0 / 25)); }

State white_noise(const State& base, double p) {
  if (p < 0 || p > 1) throw SpecError("noise mixing parameter p must be in [0,1]");
  const long dim = base.dim();
  Eigen::MatrixXcd rho =
      p * base.rho + (1.0 - p) / static_cast<double>(dim) *
                         Eigen::MatrixXcd::Identity(dim, dim);
  return mixed_state(std::move(rho));
}

Eigen::MatrixXcd colored_noise_block() {
  auto ket = [](int a, int b, double sa, double sb) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
    v(a) = sa / std::sqrt(2.0);
    v(b) = sb / std::sqrt(2.0);
    return v;
  };
  // psi_0^+, psi_1^+-, psi_2^+- of the GHZ basis
  std::vector<Eigen::VectorXcd> kets = {
      ket(0b000, 0b111, 1, 1), ket(0b010, 0b101, 1, 1), ket(0b010, 0b101, 1, -1),
      ket(0b100, 0b011, 1, 1), ket(0b100, 0b011, 1, -1)};
  Eigen::MatrixXcd col = Eigen::MatrixXcd::Zero(8, 8);
  for (const auto& k : kets) col += k * k.adjoint();
  return col;
}

State colored_noise(const State& base, double p) {
  if (p < 0 || p > 1) throw SpecError("noise mixing parameter p must be in [0,1]");
  if (base.qubits != 3) throw SpecError("colored noise is defined for 3 qubits");
  Eigen::MatrixXcd rho = p * base.rho + (1.0 - p) / 5.0 * colored_noise_block();
  return mixed_state(std::move(rho));
}

namespace {

std::map<std::string, std::string> parse_kv(const std::string& args) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(args);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw SpecError("expected key=value in '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return kv;
}

double get_num(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw SpecError("missing state parameter '" + key + "'");
  return std::stod(it->second);
}

double get_num(const std::map<std::string, std::string>& kv, const std::string& key,
               double fallback) {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : std::stod(it->second);
}

}  // namespace

State parse_state(const std::string& spec) {
  std::string name = spec;
  std::string args;
  if (auto colon = spec.find(':'); colon != std::string::npos) {
    name = spec.substr(0, colon);
    args = spec.substr(colon + 1);
  }
  std::map<std::string, std::string> kv = args.empty() ? decltype(parse_kv("")){} : parse_kv(args);

  if (name.rfind("noisy-", 0) == 0) {
    const State base = parse_state(name.substr(6));
    const double p = get_num(kv, "p");
    auto it = kv.find("noise");
    const std::string noise = it == kv.end() ? "white" : it->second;
    if (noise == "white") return white_noise(base, p);
    if (noise == "colored") return colored_noise(base, p);
    throw SpecError("unknown noise kind '" + noise + "'");
  }
  if (name == "ghz") return ghz(static_cast<int>(get_num(kv, "n", 3)));
  if (name == "gghz")
    return gghz(get_num(kv, "alpha"), static_cast<int>(get_num(kv, "n", 3)));
  if (name == "gghz1") return gghz1();
  if (name == "gghz2") return gghz2();
  if (name == "gghz3") return gghz3();
  if (name == "w") return w_state();
  if (name == "w1") return w1_state();
  if (name == "wclass") return w_class(get_num(kv, "p001"), get_num(kv, "p010"), get_num(kv, "p100"));
  if (name == "gg") return gg_class(get_num(kv, "alpha"), get_num(kv, "beta"));
  if (name == "gw") return gw_class(get_num(kv, "alpha"), get_num(kv, "beta"));
  if (name == "psigs")
    return psi_gs(get_num(kv, "alpha"), get_num(kv, "beta"), get_num(kv, "phi"));
  if (name == "ghzclass") return ghz_class_example();
  if (name == "canonical")
    return sample_canonical_state(static_cast<uint64_t>(get_num(kv, "seed")));
  if (name == "mixed") return maximally_mixed(static_cast<int>(get_num(kv, "n", 3)));
  if (name.rfind("product", 0) == 0) {
    const std::string bits = name.substr(7);
    if (!bits.empty() && bits.find_first_not_of("01") == std::string::npos) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1L << bits.size());
      long idx = 0;
      for (char c : bits) idx = (idx << 1) | (c - '0');
      v(idx) = 1;
      return pure_state(std::move(v));
    }
  }
  if (name == "file") {
    auto it = kv.find("path");
    if (it == kv.end()) throw SpecError("file state needs path=...");
    return load_amplitudes(it->second);
  }
  throw SpecError("unknown state spec '" + spec + "'");
}

void save_amplitudes(const State& s, const std::string& path) {
  if (!s.is_pure()) throw SpecError("amplitude dump supports pure states only");
  std::ofstream out(path);
  if (!out) throw SpecError("cannot open '" + path + "' for writing");
  out.precision(17);
  for (long i = 0; i < s.psi.size(); ++i)
    out << s.psi(i).real() << " " << s.psi(i).imag() << "\n";
}

State load_amplitudes(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open '" + path + "'");
  std::vector<cplx> amps;
  double re, im;
  while (in >> re >> im) amps.emplace_back(re, im);
  Eigen::VectorXcd v(amps.size());
  for (std::size_t i = 0; i < amps.size(); ++i) v(i) = amps[i];
  return pure_state(std::move(v));
}

Eigen::Matrix2cd Observable::matrix() const {
  const Eigen::Vector3d n = bloch();
  Eigen::Matrix2cd m;
  m << n.z(), cplx(n.x(), -n.y()), cplx(n.x(), n.y()), -n.z();
  return m;
}

Eigen::Vector3d Observable::bloch() const {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

Observable Observable::from_bloch(const Eigen::Vector3d& v) {
  const double norm = v.norm();
  if (norm < 1e-15) throw SpecError("zero Bloch vector");
  const Eigen::Vector3d n = v / norm;
  Observable o;
  o.theta = std::acos(std::clamp(n.z(), -1.0, 1.0));
  o.phi = std::atan2(n.y(), n.x());
  return o;
}

SettingsAssignment gghz_settings(const BellScenario& s, double theta) {
  SettingsAssignment sa{s, {}};
  sa.obs.resize(s.parties());
  for (int i = 0; i < s.parties(); ++i) sa.obs[i].resize(s.settings(i));
  const Observable sz{0, 0};
  const Observable sx{kPi / 2, 0};
  if (s.settings(0) >= 2) {
    sa.obs[0][0] = sz;
    sa.obs[0][1] = sx;
  } else {
    sa.obs[0][0] = sx;
  }
  if (s.settings(1) >= 2) {
    sa.obs[1][0] = Observable::from_bloch({std::cos(theta), 0, std::sin(theta)});
    sa.obs[1][1] = Observable::from_bloch({-std::cos(theta), 0, std::sin(theta)});
  } else {
    sa.obs[1][0] = sx;
  }
  for (int i = 2; i < s.parties(); ++i)
    for (int x = 0; x < s.settings(i); ++x) sa.obs[i][x] = sx;
  return sa;
}

SettingsAssignment mermin_ghz_settings() {
  // sx / sy per party reach the algebraic maximum 4 on the GHZ state
  SettingsAssignment sa{BellScenario({2, 2, 2}), {}};
  const Observable sx{kPi / 2, 0};
  const Observable sy{kPi / 2, kPi / 2};
  sa.obs = {{sx, sy}, {sx, sy}, {sx, sy}};
  return sa;
}

namespace {

// contract the leading qubit of rho with each Pauli, recursing on the rest
void tensor_rec(const Eigen::MatrixXcd& rho, int qubits, std::vector<double>& out,
                long base) {
  if (qubits == 0) {
    out[base] = rho(0, 0).real();
    return;
  }
  const long half = 1L << (qubits - 1);
  for (int d = 0; d < 4; ++d) {
    const Eigen::Matrix2cd sigma = pauli(d);
    Eigen::MatrixXcd sub = Eigen::MatrixXcd::Zero(half, half);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const cplx w = sigma(b, a);
        if (w == cplx(0, 0)) continue;
        sub += w * rho.block(a * half, b * half, half, half);
      }
    tensor_rec(sub, qubits - 1, out, base + d * (1L << (2 * (qubits - 1))));
  }
}

// <prod of observables>, each given by its tensor index stride and Bloch vector
double term_expectation(const CorrelationTensor& t,
                        const std::vector<std::pair<long, Eigen::Vector3d>>& factors) {
  double e = 0;
  std::vector<int> comp(factors.size(), 0);
  while (true) {
    long idx = 0;
    double w = 1;
    for (std::size_t j = 0; j < factors.size(); ++j) {
      idx += (comp[j] + 1) * factors[j].first;
      w *= factors[j].second[comp[j]];
    }
    e += w * t.at(idx);
    int j = static_cast<int>(factors.size()) - 1;
    while (j >= 0 && ++comp[j] == 3) comp[j--] = 0;
    if (j < 0) break;
  }
  return e;
}

}  // namespace

CorrelationTensor correlation_tensor(const State& s) {
  CorrelationTensor t;
  t.qubits = s.qubits;
  t.values.assign(1L << (2 * s.qubits), 0.0);
  tensor_rec(s.rho, s.qubits, t.values, 0);
  return t;
}

double bell_expectation(const CorrelatorForm& cf, const CorrelationTensor& t,
                        const SettingsAssignment& settings) {
  if (cf.scenario != settings.scenario)
    throw SpecError("bell_expectation: settings do not match the inequality scenario");
  if (cf.scenario.parties() != t.qubits)
    throw SpecError("bell_expectation: qubit count mismatch");
  const int n = t.qubits;
  double value = cf.constant.get_d();
  for (const auto& [term, gamma] : cf.terms) {
    std::vector<std::pair<long, Eigen::Vector3d>> factors;
    factors.reserve(term.members.size());
    for (const auto& [party, setting] : term.members)
      factors.emplace_back(1L << (2 * (n - 1 - party)),
                           settings.obs[party][setting].bloch());
    value += gamma.get_d() * term_expectation(t, factors);
  }
  return value;
}

double bell_expectation(const CorrelatorForm& cf, const State& s,
                        const SettingsAssignment& settings) {
  return bell_expectation(cf, correlation_tensor(s), settings);
}

Eigen::Vector3d effective_field(const CorrelatorForm& cf, const CorrelationTensor& t,
                                const SettingsAssignment& settings, int party,
                                int setting) {
  const int n = t.qubits;
  const long own_stride = 1L << (2 * (n - 1 - party));
  Eigen::Vector3d field = Eigen::Vector3d::Zero();
  for (const auto& [term, gamma] : cf.terms) {
    bool involved = false;
    std::vector<std::pair<long, Eigen::Vector3d>> others;
    for (const auto& [p, x] : term.members) {
      if (p == party && x == setting) {
        involved = true;
        continue;
      }
      others.emplace_back(1L << (2 * (n - 1 - p)), settings.obs[p][x].bloch());
    }
    if (!involved) continue;
    const double g = gamma.get_d();
    std::vector<int> comp(others.size(), 0);
    while (true) {
      long idx = 0;
      double w = 1;
      for (std::size_t j = 0; j < others.size(); ++j) {
        idx += (comp[j] + 1) * others[j].first;
        w *= others[j].second[comp[j]];
      }
      for (int k = 0; k < 3; ++k) field[k] += g * w * t.at(idx + (k + 1) * own_stride);
      int j = static_cast<int>(others.size()) - 1;
      while (j >= 0 && ++comp[j] == 3) comp[j--] = 0;
      if (j < 0) break;
    }
  }
  return field;
}

RealBehavior behavior_of(const State& s, const SettingsAssignment& settings) {
  const CorrelationTensor t = correlation_tensor(s);
  Parametrization par(settings.scenario);
  RealBehavior b{settings.scenario, std::vector<double>(par.size(), 0.0)};
  const int n = s.qubits;
  for (int i = 0; i < par.size(); ++i) {
    const Term& term = par.terms[i];
    const int k = static_cast<int>(term.members.size());
    // P(0...0|S) = 2^{-|S|} (1 + sum of all sub-correlators of S)
    double sum = 1;
    for (int mask = 1; mask < (1 << k); ++mask) {
      std::vector<std::pair<long, Eigen::Vector3d>> factors;
      for (int j = 0; j < k; ++j)
        if (mask & (1 << j)) {
          const auto [party, setting] = term.members[j];
          factors.emplace_back(1L << (2 * (n - 1 - party)),
                               settings.obs[party][setting].bloch());
        }
      sum += term_expectation(t, factors);
    }
    b.coords[i] = std::ldexp(sum, -k);
  }
  return b;
}

RealFullJoint full_joint_of(const State& s, const SettingsAssignment& settings) {
  const BellScenario& sc = settings.scenario;
  const int n = sc.parties();
  RealFullJoint joint{sc, {}};
  joint.p.assign(sc.setting_tuples(), std::vector<double>(1L << n, 0.0));
  for (long si = 0; si < sc.setting_tuples(); ++si) {
    std::vector<int> choice(n);
    {
      long idx = si;
      for (int party = n - 1; party >= 0; --party) {
        choice[party] = static_cast<int>(idx % sc.settings(party));
        idx /= sc.settings(party);
      }
    }
    // projectors M_{a|x} = (I + (-1)^a O)/2
    for (long bits = 0; bits < (1L << n); ++bits) {
      Eigen::MatrixXcd op = Eigen::MatrixXcd::Ones(1, 1);
      for (int party = 0; party < n; ++party) {
        const int a = static_cast<int>((bits >> (n - 1 - party)) & 1);
        const Eigen::Matrix2cd m =
            0.5 * (pauli(0) + (a ? -1.0 : 1.0) * settings.obs[party][choice[party]].matrix());
        Eigen::MatrixXcd next(op.rows() * 2, op.cols() * 2);
        next << op * m(0, 0), op * m(0, 1), op * m(1, 0), op * m(1, 1);
        op = std::move(next);
      }
      joint.p[si][bits] = (s.rho * op).trace().real();
    }
  }
  return joint;
}

double no_signaling_defect(const RealFullJoint& joint) {
  const BellScenario& sc = joint.scenario;
  const int n = sc.parties();
  double defect = 0;
  auto settings_of = [&](long idx) {
    std::vector<int> out(n);
    for (int party = n - 1; party >= 0; --party) {
      out[party] = static_cast<int>(idx % sc.settings(party));
      idx /= sc.settings(party);
    }
    return out;
  };
  auto index_of = [&](const std::vector<int>& settings) {
    long idx = 0;
    for (int party = 0; party < n; ++party) idx = idx * sc.settings(party) + settings[party];
    return idx;
  };
  for (long si = 0; si < sc.setting_tuples(); ++si) {
    double sum = 0;
    for (double q : joint.p[si]) sum += q;
    defect = std::max(defect, std::abs(sum - 1.0));
  }
  for (int j = 0; j < n; ++j) {
    if (sc.settings(j) < 2) continue;
    for (long si = 0; si < sc.setting_tuples(); ++si) {
      std::vector<int> settings = settings_of(si);
      if (settings[j] != 0) continue;
      for (int alt = 1; alt < sc.settings(j); ++alt) {
        std::vector<int> settings2 = settings;
        settings2[j] = alt;
        const long si2 = index_of(settings2);
        const long jbit = 1L << (n - 1 - j);
        for (long bits = 0; bits < (1L << n); ++bits) {
          if (bits & jbit) continue;
          const double m1 = joint.p[si][bits] + joint.p[si][bits | jbit];
          const double m2 = joint.p[si2][bits] + joint.p[si2][bits | jbit];
          defect = std::max(defect, std::abs(m1 - m2));
        }
      }
    }
  }
  return defect;
}

namespace {

double entropy_bits(double p) {
  double h = 0;
  for (double q : {p, 1.0 - p})
    if (q > 0) h -= q * std::log2(q);
  return h;
}

}  // namespace

double avg_bipartite_entropy(const State& s) {
  if (!s.is_pure()) throw SpecError("avg_bipartite_entropy requires a pure state");
  const int n = s.qubits;
  double total = 0;
  for (int k = 0; k < n; ++k) {
    Eigen::Matrix2cd reduced = Eigen::Matrix2cd::Zero();
    const long kbit = 1L << (n - 1 - k);
    for (long i = 0; i < s.dim(); ++i) {
      const int a = (i & kbit) ? 1 : 0;
      for (int b = 0; b < 2; ++b) {
        const long j = b ? (i | kbit) : (i & ~kbit);
        reduced(a, b) += s.psi(i) * std::conj(s.psi(j));
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(reduced, Eigen::EigenvaluesOnly);
    total += entropy_bits(std::clamp(es.eigenvalues()(0), 0.0, 1.0));
  }
  return total / n;
}

double tangle_gghz(double alpha) {
  if (alpha < 0 || alpha > 1) throw SpecError("tangle_gghz: alpha must be in [0,1]");
  return 4.0 * alpha * alpha * (1.0 - alpha * alpha);
}

State sample_canonical_state(uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (true) {
    // lambda^2 flat on the simplex via normalized exponentials
    std::array<double, 5> lambda{};
    double sum = 0;
    for (double& l : lambda) {
      const double g = -std::log(1.0 - unit(rng));
      l = g;
      sum += g;
    }
    for (double& l : lambda) l = std::sqrt(l / sum);
    const double phi = unit(rng) * kPi;
    if (lambda[0] <= 1e-6) continue;
    if (lambda[2] + lambda[4] <= 1e-6) continue;
    if (lambda[3] + lambda[4] <= 1e-6) continue;
    return acin_canonical(lambda, phi);
  }
}

}  // namespace bell
