#pragma once

#include <map>
#include <string>
#include <vector>

#include "bell/polytope.hpp"
#include "bell/scenario.hpp"

namespace bell {

// tight Bell inequality in probability form: prob_form.coeffs . P <= bound,
// coordinates indexed by the scenario's Parametrization
struct BellInequality {
  BellScenario scenario;
  Halfspace prob_form;

  bool operator==(const BellInequality&) const = default;
};

Rat evaluate(const BellInequality& ineq, const Behavior& b);
double evaluate(const BellInequality& ineq, const std::vector<double>& coords);

// same inequality over correlators <prod of +-1 observables>; the constant
// term is kept explicit (serialization folds it into the bound)
struct CorrelatorForm {
  BellScenario scenario;
  std::map<Term, Rat, TermLess> terms;  // nonempty correlator keys
  Rat constant = 0;
  Rat bound = 0;
};

CorrelatorForm to_correlator_form(const BellInequality& ineq);
BellInequality from_correlator_form(const CorrelatorForm& cf);

// exact correlators of a behavior, keyed like the parametrization terms
std::map<Term, Rat, TermLess> correlators_of(const Behavior& b);
Rat evaluate(const CorrelatorForm& cf, const Behavior& b);

// all p(outcomes|settings) >= 0 constraints of the scenario, canonicalized
std::vector<BellInequality> positivity_facets(const BellScenario& s);
bool is_positivity(const BellInequality& ineq);

// relabeling: party permutation + per-party setting permutation + outcome
// flips. A strategy s maps to s' with
//   s'(party_perm[i], setting_perm[i][x]) = s(i, x) XOR flip[i][x].
struct SymmetryOp {
  std::vector<int> party_perm;
  std::vector<std::vector<int>> setting_perm;
  std::vector<std::vector<uint8_t>> flip;

  bool operator==(const SymmetryOp&) const = default;
  bool operator<(const SymmetryOp&) const;
};

SymmetryOp identity_op(const BellScenario& s);
SymmetryOp compose(const SymmetryOp& second, const SymmetryOp& first);
SymmetryOp inverse(const SymmetryOp& op);

DeterministicStrategy apply(const SymmetryOp& op, const DeterministicStrategy& s);
// image inequality: evaluate(apply(op,ineq), behavior_of(apply(op,s))) equals
// evaluate(ineq, behavior_of(s)) for every strategy s
BellInequality apply(const SymmetryOp& op, const BellInequality& ineq);

std::vector<SymmetryOp> symmetry_generators(const BellScenario& s,
                                            bool include_party_perms = true);
long symmetry_group_order(const BellScenario& s,
                          bool include_party_perms = true);
std::vector<SymmetryOp> generate_group(const BellScenario& s,
                                       bool include_party_perms = true,
                                       std::size_t cap = 1 << 20);

struct FacetClass {
  BellInequality representative;  // lexicographically smallest orbit member
  long orbit_size = 0;
  std::vector<int> member_indices;  // into the classified input list
  bool positivity = false;
};

// partition facets of one scenario into relabeling orbits; with
// include_party_perms=false the orbits fix party roles
std::vector<FacetClass> classify(const std::vector<BellInequality>& facets,
                                 bool include_party_perms = true);

// the n-qubit nontrivial facet for the [2,2,1,...,1] scenario:
// (-2 + A1(B1+B2) + A2(B1-B2)) (1+C1)...(1+Z1) <= 0, fully expanded
CorrelatorForm generalized_facet(int n);

// CHSH, I1, I2, I3, Mermin, Svetlichny as usually printed
CorrelatorForm named_inequality(const std::string& name);

}  // namespace bell
