#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bell/rational.hpp"

namespace bell {

// A Bell scenario with dichotomic outcomes: one entry per party giving its
// number of measurement settings. The minimal scenario of interest is
// [2,2,1,...,1]: two parties with two settings, the rest with one.
struct BellScenario {
  std::vector<int> settings_per_party;

  BellScenario() = default;
  explicit BellScenario(std::vector<int> settings);
  static BellScenario parse(const std::string& csv);  // "2,2,1"

  int parties() const { return static_cast<int>(settings_per_party.size()); }
  int settings(int party) const { return settings_per_party[party]; }

  // [prod_i (m_i + 1)] - 1, the dimension of the probability space
  long dimension() const;
  // prod_i 2^{m_i} deterministic local strategies
  long vertex_count() const;
  // number of joint setting tuples, prod_i m_i
  long setting_tuples() const;

  bool operator==(const BellScenario&) const = default;
  std::string to_string() const;
};

// One coordinate of the probability-space parametrization: a nonempty set of
// parties with a chosen setting each; the value is Prob(all chosen output 0).
struct Term {
  std::vector<std::pair<int, int>> members;  // (party, setting), sorted by party

  bool operator==(const Term&) const = default;
  std::string to_string() const;  // e.g. "a0b1c0"
};

// canonical coordinate order: subset size, then party tuple, then setting tuple
struct TermLess {
  bool operator()(const Term& lhs, const Term& rhs) const;
};

struct Parametrization {
  BellScenario scenario;
  std::vector<Term> terms;

  explicit Parametrization(BellScenario s);
  int index_of(const Term& t) const;  // -1 if absent
  int size() const { return static_cast<int>(terms.size()); }

 private:
  std::map<Term, int, TermLess> index_;
};

struct Behavior {
  BellScenario scenario;
  RatVec coords;
};

// fixed outcome in {0,1} for every (party, setting) pair
struct DeterministicStrategy {
  BellScenario scenario;
  std::vector<std::vector<uint8_t>> outcome;  // [party][setting]

  // lexicographic encoding: (party 0, setting 0) is the most significant bit
  static DeterministicStrategy from_index(const BellScenario& s, long index);
  long index() const;
};

Behavior behavior_of(const DeterministicStrategy& strat);

// All local deterministic vertices, in strategy-index order.
// Throws CapacityError when the strategy count exceeds the cap.
std::vector<Behavior> enumerate_vertices(const BellScenario& s,
                                         long cap = 1L << 20);

// Full joint distribution p(outcomes | settings), exact.
struct FullJoint {
  BellScenario scenario;
  // [setting tuple index][outcome bits]; party 0 is the most significant
  // digit/bit in both indexings
  std::vector<RatVec> p;

  static FullJoint uniform(const BellScenario& s);
  static FullJoint of_strategy(const DeterministicStrategy& strat);

  long setting_index(const std::vector<int>& settings) const;
  std::vector<int> settings_of_index(long idx) const;
};

struct NoSignalingReport {
  bool ok = true;
  std::vector<std::string> violations;
};

// Throws NormalizationError when some setting tuple does not sum to 1.
NoSignalingReport check_no_signaling(const FullJoint& joint);

// Throws SignalingError for signaling input, NormalizationError as above.
Behavior project_to_parametrization(const FullJoint& joint);

}  // namespace bell
