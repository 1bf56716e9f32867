#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "bell/facets.hpp"
#include "bell/scenario.hpp"

namespace bell {

using cplx = std::complex<double>;

// n-qubit state; pure states keep their amplitude vector alongside rho
struct State {
  int qubits = 0;
  Eigen::VectorXcd psi;  // size 2^n when pure, empty otherwise
  Eigen::MatrixXcd rho;  // always 2^n x 2^n

  bool is_pure() const { return psi.size() > 0; }
  long dim() const { return 1L << qubits; }
};

State pure_state(Eigen::VectorXcd amplitudes);        // normalizes
State mixed_state(Eigen::MatrixXcd rho);              // validates
State maximally_mixed(int qubits);

// named constructors
State product_zero(int qubits);                        // |0...0>
State gghz(double alpha, int qubits = 3);              // a|0..0> + sqrt(1-a^2)|1..1>
State ghz(int qubits = 3);
State w_state();                                       // sqrt(1/3)(|001>+|010>+|100>)
State w1_state();                                      // sqrt(1/6)|001>+sqrt(2/6)|010>+sqrt(3/6)|100>
State w_class(double p001, double p010, double p100);  // real sqrt amplitudes
State gg_class(double alpha, double beta);
State gw_class(double alpha, double beta);
State psi_gs(double alpha, double beta, double phi);
State acin_canonical(const std::array<double, 5>& lambda, double phi);
State ghz_class_example();                             // 5-amplitude GHZ-class state
State gghz1();                                         // sqrt(8/9)|000>+sqrt(1/9)|111>
State gghz2();                                         // sqrt(25/29)|000>+sqrt(4/29)|111>
State gghz3();                                         // sqrt(21/25)|000>+sqrt(4/25)|111>

State white_noise(const State& base, double p);        // p rho + (1-p)/2^n I
State colored_noise(const State& base, double p);      // p rho + (1-p)/5 col, 3 qubits
Eigen::MatrixXcd colored_noise_block();                // the rank-5 "col" operator

// CLI/state-spec string, e.g. "gghz:alpha=0.8", "noisy-ghz:p=0.7,noise=white"
State parse_state(const std::string& spec);

// dump/load "re im" amplitude lines (pure states only)
void save_amplitudes(const State& s, const std::string& path);
State load_amplitudes(const std::string& path);

// dichotomic +-1 observable n.sigma from Bloch angles
struct Observable {
  double theta = 0;
  double phi = 0;

  Eigen::Matrix2cd matrix() const;
  Eigen::Vector3d bloch() const;
  static Observable from_bloch(const Eigen::Vector3d& v);
};

struct SettingsAssignment {
  BellScenario scenario;
  std::vector<std::vector<Observable>> obs;  // [party][setting]
};

// A1=sz, A2=sx, B1=cos(t)sx+sin(t)sz, B2=-cos(t)sx+sin(t)sz, rest sx
SettingsAssignment gghz_settings(const BellScenario& s, double theta);
SettingsAssignment mermin_ghz_settings();  // equatorial optimum for GHZ

// all Pauli-word expectations <sigma_{d_0} x ... x sigma_{d_{n-1}}>, index
// base 4 with qubit 0 the most significant digit (0 = identity)
struct CorrelationTensor {
  int qubits = 0;
  std::vector<double> values;  // size 4^n

  double at(long index) const { return values[index]; }
};

CorrelationTensor correlation_tensor(const State& s);

double bell_expectation(const CorrelatorForm& cf, const CorrelationTensor& t,
                        const SettingsAssignment& settings);
double bell_expectation(const CorrelatorForm& cf, const State& s,
                        const SettingsAssignment& settings);

// gradient of the expectation w.r.t. one observable's Bloch vector; the
// expectation is v . n + const in that vector
Eigen::Vector3d effective_field(const CorrelatorForm& cf, const CorrelationTensor& t,
                                const SettingsAssignment& settings, int party,
                                int setting);

struct RealBehavior {
  BellScenario scenario;
  std::vector<double> coords;
};

RealBehavior behavior_of(const State& s, const SettingsAssignment& settings);

struct RealFullJoint {
  BellScenario scenario;
  std::vector<std::vector<double>> p;  // [setting tuple][outcome bits]
};

RealFullJoint full_joint_of(const State& s, const SettingsAssignment& settings);
// largest absolute no-signaling / normalization defect
double no_signaling_defect(const RealFullJoint& joint);

double avg_bipartite_entropy(const State& s);  // throws SpecError when mixed
double tangle_gghz(double alpha);

// genuinely entangled 3-qubit pure state in canonical form, seeded
State sample_canonical_state(uint64_t seed);

}  // namespace bell
