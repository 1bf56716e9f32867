#include "bell/facets.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "bell/errors.hpp"

namespace bell {

namespace {

Rat pow2(int k) {  // 2^k for any sign of k
  Rat q = 1;
  for (int i = 0; i < k; ++i) q *= 2;
  for (int i = 0; i > k; --i) q /= 2;
  return q;
}

std::vector<Term> subsets_of(const Term& t, bool include_empty) {
  const int k = static_cast<int>(t.members.size());
  std::vector<Term> out;
  for (int mask = include_empty ? 0 : 1; mask < (1 << k); ++mask) {
    Term sub;
    for (int i = 0; i < k; ++i)
      if (mask & (1 << i)) sub.members.push_back(t.members[i]);
    out.push_back(std::move(sub));
  }
  return out;
}

}  // namespace

Rat evaluate(const BellInequality& ineq, const Behavior& b) {
  if (ineq.scenario != b.scenario) throw SpecError("evaluate: scenario mismatch");
  if (ineq.prob_form.coeffs.size() != b.coords.size())
    throw SpecError("evaluate: dimension mismatch");
  Rat value = 0;
  for (std::size_t i = 0; i < b.coords.size(); ++i)
    value += Rat(ineq.prob_form.coeffs[i]) * b.coords[i];
  return value;
}

double evaluate(const BellInequality& ineq, const std::vector<double>& coords) {
  if (ineq.prob_form.coeffs.size() != coords.size())
    throw SpecError("evaluate: dimension mismatch");
  double value = 0;
  for (std::size_t i = 0; i < coords.size(); ++i)
    value += ineq.prob_form.coeffs[i].get_d() * coords[i];
  return value;
}

CorrelatorForm to_correlator_form(const BellInequality& ineq) {
  Parametrization par(ineq.scenario);
  CorrelatorForm cf;
  cf.scenario = ineq.scenario;
  cf.bound = Rat(ineq.prob_form.bound);
  // P(0...0 | S) = 2^{-|S|} (1 + sum of all sub-correlators of S)
  for (int i = 0; i < par.size(); ++i) {
    if (ineq.prob_form.coeffs[i] == 0) continue;
    const Rat weight = Rat(ineq.prob_form.coeffs[i]) *
                       pow2(-static_cast<int>(par.terms[i].members.size()));
    cf.constant += weight;
    for (const Term& sub : subsets_of(par.terms[i], false)) cf.terms[sub] += weight;
  }
  std::erase_if(cf.terms, [](const auto& kv) { return kv.second == 0; });
  return cf;
}

BellInequality from_correlator_form(const CorrelatorForm& cf) {
  Parametrization par(cf.scenario);
  RatVec coeffs(par.size(), 0);
  Rat constant = cf.constant;
  // <prod_S O> = sum_{T subseteq S} (-1)^{|S|-|T|} 2^{|T|} P_T, with P_empty = 1
  for (const auto& [term, gamma] : cf.terms) {
    const int s = static_cast<int>(term.members.size());
    for (const Term& sub : subsets_of(term, true)) {
      const int t = static_cast<int>(sub.members.size());
      const Rat w = gamma * ((s - t) % 2 ? -1 : 1) * pow2(t);
      if (t == 0) {
        constant += w;
      } else {
        const int idx = par.index_of(sub);
        if (idx < 0) throw SpecError("correlator term outside scenario");
        coeffs[idx] += w;
      }
    }
  }
  return BellInequality{cf.scenario, canonicalize(coeffs, cf.bound - constant)};
}

std::map<Term, Rat, TermLess> correlators_of(const Behavior& b) {
  Parametrization par(b.scenario);
  std::map<Term, Rat, TermLess> corr;
  for (int i = 0; i < par.size(); ++i) {
    const Term& term = par.terms[i];
    const int s = static_cast<int>(term.members.size());
    Rat value = (s % 2) ? -1 : 1;
    for (const Term& sub : subsets_of(term, false)) {
      const int t = static_cast<int>(sub.members.size());
      value += Rat(((s - t) % 2 ? -1 : 1)) * pow2(t) * b.coords[par.index_of(sub)];
    }
    corr[term] = value;
  }
  return corr;
}

Rat evaluate(const CorrelatorForm& cf, const Behavior& b) {
  if (cf.scenario != b.scenario) throw SpecError("evaluate: scenario mismatch");
  auto corr = correlators_of(b);
  Rat value = cf.constant;
  for (const auto& [term, gamma] : cf.terms) {
    auto it = corr.find(term);
    if (it == corr.end()) throw SpecError("correlator term outside scenario");
    value += gamma * it->second;
  }
  return value;
}

std::vector<BellInequality> positivity_facets(const BellScenario& s) {
  Parametrization par(s);
  const int n = s.parties();
  std::vector<BellInequality> out;
  std::vector<int> settings(n, 0);
  while (true) {
    for (long bits = 0; bits < (1L << n); ++bits) {
      // p(outcomes|settings) = sum_{U subseteq W} (-1)^{|U|} P(Z u U),
      // Z = parties with outcome 0, W = parties with outcome 1
      std::vector<int> w_parties;
      Term z;
      for (int i = 0; i < n; ++i) {
        if (bits & (1L << (n - 1 - i)))
          w_parties.push_back(i);
        else
          z.members.emplace_back(i, settings[i]);
      }
      RatVec coeffs(par.size(), 0);
      Rat constant = 0;
      for (int mask = 0; mask < (1 << w_parties.size()); ++mask) {
        Term key = z;
        int u_size = 0;
        for (std::size_t k = 0; k < w_parties.size(); ++k)
          if (mask & (1 << k)) {
            key.members.emplace_back(w_parties[k], settings[w_parties[k]]);
            ++u_size;
          }
        std::sort(key.members.begin(), key.members.end());
        const Rat sign = (u_size % 2) ? -1 : 1;
        if (key.members.empty())
          constant += sign;
        else
          coeffs[par.index_of(key)] += sign;
      }
      // p >= 0  <=>  -p's linear part <= constant
      for (Rat& c : coeffs) c = -c;
      out.push_back(BellInequality{s, canonicalize(coeffs, constant)});
    }
    int k = n - 1;
    while (k >= 0 && ++settings[k] == s.settings(k)) settings[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

bool is_positivity(const BellInequality& ineq) {
  const Halfspace canon = canonicalize(ineq.prob_form);
  for (const BellInequality& p : positivity_facets(ineq.scenario))
    if (p.prob_form == canon) return true;
  return false;
}

bool SymmetryOp::operator<(const SymmetryOp& other) const {
  if (party_perm != other.party_perm) return party_perm < other.party_perm;
  if (setting_perm != other.setting_perm) return setting_perm < other.setting_perm;
  return flip < other.flip;
}

SymmetryOp identity_op(const BellScenario& s) {
  SymmetryOp op;
  op.party_perm.resize(s.parties());
  op.setting_perm.resize(s.parties());
  op.flip.resize(s.parties());
  for (int i = 0; i < s.parties(); ++i) {
    op.party_perm[i] = i;
    op.setting_perm[i].resize(s.settings(i));
    op.flip[i].assign(s.settings(i), 0);
    for (int x = 0; x < s.settings(i); ++x) op.setting_perm[i][x] = x;
  }
  return op;
}

SymmetryOp compose(const SymmetryOp& second, const SymmetryOp& first) {
  const int n = static_cast<int>(first.party_perm.size());
  SymmetryOp op;
  op.party_perm.resize(n);
  op.setting_perm.resize(n);
  op.flip.resize(n);
  for (int i = 0; i < n; ++i) {
    const int mid = first.party_perm[i];
    op.party_perm[i] = second.party_perm[mid];
    const int m = static_cast<int>(first.setting_perm[i].size());
    op.setting_perm[i].resize(m);
    op.flip[i].resize(m);
    for (int x = 0; x < m; ++x) {
      const int mx = first.setting_perm[i][x];
      op.setting_perm[i][x] = second.setting_perm[mid][mx];
      op.flip[i][x] = first.flip[i][x] ^ second.flip[mid][mx];
    }
  }
  return op;
}

SymmetryOp inverse(const SymmetryOp& op) {
  const int n = static_cast<int>(op.party_perm.size());
  SymmetryOp inv;
  inv.party_perm.resize(n);
  inv.setting_perm.resize(n);
  inv.flip.resize(n);
  for (int i = 0; i < n; ++i) {
    const int j = op.party_perm[i];
    inv.party_perm[j] = i;
    const int m = static_cast<int>(op.setting_perm[i].size());
    inv.setting_perm[j].resize(m);
    inv.flip[j].resize(m);
    for (int x = 0; x < m; ++x) {
      inv.setting_perm[j][op.setting_perm[i][x]] = x;
      inv.flip[j][op.setting_perm[i][x]] = op.flip[i][x];
    }
  }
  return inv;
}

DeterministicStrategy apply(const SymmetryOp& op, const DeterministicStrategy& s) {
  DeterministicStrategy out = s;
  for (int i = 0; i < s.scenario.parties(); ++i)
    for (int x = 0; x < s.scenario.settings(i); ++x)
      out.outcome[op.party_perm[i]][op.setting_perm[i][x]] =
          s.outcome[i][x] ^ op.flip[i][x];
  return out;
}

BellInequality apply(const SymmetryOp& op, const BellInequality& ineq) {
  Parametrization par(ineq.scenario);
  RatVec coeffs(par.size(), 0);
  Rat bound = Rat(ineq.prob_form.bound);
  // substitute each coordinate P(T) of the original by its expansion in the
  // transformed behavior's coordinates
  for (int i = 0; i < par.size(); ++i) {
    const Rat c = Rat(ineq.prob_form.coeffs[i]);
    if (c == 0) continue;
    Term z;  // pairs mapped without flip
    std::vector<std::pair<int, int>> w;  // pairs mapped with flip
    for (auto [party, setting] : par.terms[i].members) {
      const int np = op.party_perm[party];
      const int nx = op.setting_perm[party][setting];
      if (op.flip[party][setting])
        w.emplace_back(np, nx);
      else
        z.members.emplace_back(np, nx);
    }
    for (int mask = 0; mask < (1 << w.size()); ++mask) {
      Term key = z;
      int u_size = 0;
      for (std::size_t k = 0; k < w.size(); ++k)
        if (mask & (1 << k)) {
          key.members.push_back(w[k]);
          ++u_size;
        }
      std::sort(key.members.begin(), key.members.end());
      const Rat sign = (u_size % 2) ? -1 : 1;
      if (key.members.empty())
        bound -= c * sign;  // constant term of the substitution
      else
        coeffs[par.index_of(key)] += c * sign;
    }
  }
  return BellInequality{ineq.scenario, canonicalize(coeffs, bound)};
}

std::vector<SymmetryOp> symmetry_generators(const BellScenario& s,
                                            bool include_party_perms) {
  std::vector<SymmetryOp> gens;
  for (int i = 0; i < s.parties(); ++i)
    for (int x = 0; x < s.settings(i); ++x) {
      SymmetryOp op = identity_op(s);
      op.flip[i][x] = 1;
      gens.push_back(std::move(op));
    }
  for (int i = 0; i < s.parties(); ++i)
    for (int x = 0; x + 1 < s.settings(i); ++x) {
      SymmetryOp op = identity_op(s);
      std::swap(op.setting_perm[i][x], op.setting_perm[i][x + 1]);
      gens.push_back(std::move(op));
    }
  if (include_party_perms) {
    // adjacent transpositions within each block of equal settings counts
    for (int m = 1; m <= *std::max_element(s.settings_per_party.begin(),
                                           s.settings_per_party.end());
         ++m) {
      std::vector<int> block;
      for (int i = 0; i < s.parties(); ++i)
        if (s.settings(i) == m) block.push_back(i);
      for (std::size_t k = 0; k + 1 < block.size(); ++k) {
        SymmetryOp op = identity_op(s);
        std::swap(op.party_perm[block[k]], op.party_perm[block[k + 1]]);
        gens.push_back(std::move(op));
      }
    }
  }
  return gens;
}

long symmetry_group_order(const BellScenario& s, bool include_party_perms) {
  long order = 1;
  for (int m : s.settings_per_party) {
    order <<= m;  // outcome flips
    for (int k = 2; k <= m; ++k) order *= k;  // setting permutations
  }
  if (include_party_perms) {
    std::map<int, int> multiplicity;
    for (int m : s.settings_per_party) ++multiplicity[m];
    for (auto [m, count] : multiplicity)
      for (int k = 2; k <= count; ++k) order *= k;
  }
  return order;
}

std::vector<SymmetryOp> generate_group(const BellScenario& s,
                                       bool include_party_perms,
                                       std::size_t cap) {
  const std::vector<SymmetryOp> gens = symmetry_generators(s, include_party_perms);
  std::set<SymmetryOp> seen;
  std::deque<SymmetryOp> queue;
  seen.insert(identity_op(s));
  queue.push_back(identity_op(s));
  while (!queue.empty()) {
    SymmetryOp cur = std::move(queue.front());
    queue.pop_front();
    for (const SymmetryOp& g : gens) {
      SymmetryOp next = compose(g, cur);
      if (seen.insert(next).second) {
        if (seen.size() > cap) throw CapacityError("symmetry group exceeds cap");
        queue.push_back(std::move(next));
      }
    }
  }
  return {seen.begin(), seen.end()};
}

std::vector<FacetClass> classify(const std::vector<BellInequality>& facets,
                                 bool include_party_perms) {
  if (facets.empty()) return {};
  const BellScenario& s = facets[0].scenario;
  for (const BellInequality& f : facets)
    if (f.scenario != s) throw SpecError("classify: mixed scenarios");
  const std::vector<SymmetryOp> gens = symmetry_generators(s, include_party_perms);

  std::map<Halfspace, std::vector<int>> input_index;
  for (int i = 0; i < static_cast<int>(facets.size()); ++i)
    input_index[canonicalize(facets[i].prob_form)].push_back(i);

  std::vector<BellInequality> pos = positivity_facets(s);
  std::set<Halfspace> pos_set;
  for (const BellInequality& p : pos) pos_set.insert(p.prob_form);

  std::vector<bool> done(facets.size(), false);
  std::vector<FacetClass> classes;
  for (int i = 0; i < static_cast<int>(facets.size()); ++i) {
    if (done[i]) continue;
    // orbit closure under the generators
    std::set<Halfspace> orbit;
    std::deque<BellInequality> queue;
    BellInequality seed{s, canonicalize(facets[i].prob_form)};
    orbit.insert(seed.prob_form);
    queue.push_back(seed);
    while (!queue.empty()) {
      BellInequality cur = std::move(queue.front());
      queue.pop_front();
      for (const SymmetryOp& g : gens) {
        BellInequality img = apply(g, cur);
        if (orbit.insert(img.prob_form).second) queue.push_back(img);
      }
    }
    FacetClass cls;
    cls.orbit_size = static_cast<long>(orbit.size());
    cls.representative = BellInequality{s, *orbit.begin()};
    cls.positivity = pos_set.count(seed.prob_form) > 0;
    for (const Halfspace& h : orbit) {
      auto it = input_index.find(h);
      if (it == input_index.end()) continue;
      for (int idx : it->second) {
        cls.member_indices.push_back(idx);
        done[idx] = true;
      }
    }
    std::sort(cls.member_indices.begin(), cls.member_indices.end());
    classes.push_back(std::move(cls));
  }
  std::sort(classes.begin(), classes.end(),
            [](const FacetClass& a, const FacetClass& b) {
              if (a.positivity != b.positivity) return a.positivity > b.positivity;
              return a.representative.prob_form < b.representative.prob_form;
            });
  return classes;
}

CorrelatorForm generalized_facet(int n) {
  if (n < 3) throw SpecError("generalized_facet requires n >= 3");
  std::vector<int> settings(n, 1);
  settings[0] = settings[1] = 2;
  CorrelatorForm cf;
  cf.scenario = BellScenario(settings);
  cf.bound = 0;
  // (-2 + A1(B1+B2) + A2(B1-B2)) * prod_{k>=2} (1 + C_k)
  const std::vector<std::pair<Term, Rat>> base = {
      {Term{}, -2},
      {Term{{{0, 0}, {1, 0}}}, 1},
      {Term{{{0, 0}, {1, 1}}}, 1},
      {Term{{{0, 1}, {1, 0}}}, 1},
      {Term{{{0, 1}, {1, 1}}}, -1},
  };
  for (int mask = 0; mask < (1 << (n - 2)); ++mask) {
    for (const auto& [term, coeff] : base) {
      Term key = term;
      for (int k = 0; k < n - 2; ++k)
        if (mask & (1 << k)) key.members.emplace_back(k + 2, 0);
      std::sort(key.members.begin(), key.members.end());
      if (key.members.empty())
        cf.constant += coeff;
      else
        cf.terms[key] += coeff;
    }
  }
  // normalize to a zero constant so the n = 3 case prints exactly like I3
  cf.bound -= cf.constant;
  cf.constant = 0;
  return cf;
}

namespace {

CorrelatorForm chsh_lifted(int single_party) {
  // I_CHSH + I_CHSH * S1 - 2 S1 <= 2, CHSH on the two 2-setting parties and
  // S the remaining single-setting party
  std::vector<int> settings = {2, 2, 2};
  settings[single_party] = 1;
  std::vector<int> two_setting;
  for (int i = 0; i < 3; ++i)
    if (i != single_party) two_setting.push_back(i);
  const int a = two_setting[0];
  const int b = two_setting[1];
  CorrelatorForm cf;
  cf.scenario = BellScenario(settings);
  cf.bound = 2;
  const std::vector<std::pair<std::pair<int, int>, Rat>> chsh = {
      {{0, 0}, 1}, {{0, 1}, 1}, {{1, 0}, 1}, {{1, 1}, -1}};
  for (const auto& [xy, coeff] : chsh) {
    Term pair{{{a, xy.first}, {b, xy.second}}};
    std::sort(pair.members.begin(), pair.members.end());
    cf.terms[pair] += coeff;
    Term triple = pair;
    triple.members.emplace_back(single_party, 0);
    std::sort(triple.members.begin(), triple.members.end());
    cf.terms[triple] += coeff;
  }
  cf.terms[Term{{{single_party, 0}}}] += -2;
  return cf;
}

}  // namespace

CorrelatorForm named_inequality(const std::string& name) {
  std::string lower = name;
  std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
  if (lower == "chsh") {
    CorrelatorForm cf;
    cf.scenario = BellScenario({2, 2});
    cf.bound = 2;
    cf.terms[Term{{{0, 0}, {1, 0}}}] = 1;
    cf.terms[Term{{{0, 0}, {1, 1}}}] = 1;
    cf.terms[Term{{{0, 1}, {1, 0}}}] = 1;
    cf.terms[Term{{{0, 1}, {1, 1}}}] = -1;
    return cf;
  }
  if (lower == "i1") return chsh_lifted(0);
  if (lower == "i2") return chsh_lifted(1);
  if (lower == "i3") return chsh_lifted(2);
  if (lower == "mermin") {
    CorrelatorForm cf;
    cf.scenario = BellScenario({2, 2, 2});
    cf.bound = 2;
    cf.terms[Term{{{0, 0}, {1, 0}, {2, 0}}}] = 1;
    cf.terms[Term{{{0, 0}, {1, 1}, {2, 1}}}] = -1;
    cf.terms[Term{{{0, 1}, {1, 0}, {2, 1}}}] = -1;
    cf.terms[Term{{{0, 1}, {1, 1}, {2, 0}}}] = -1;
    return cf;
  }
  if (lower == "svetlichny") {
    CorrelatorForm cf;
    cf.scenario = BellScenario({2, 2, 2});
    cf.bound = 4;
    cf.terms[Term{{{0, 0}, {1, 0}, {2, 0}}}] = 1;
    cf.terms[Term{{{0, 0}, {1, 1}, {2, 0}}}] = 1;
    cf.terms[Term{{{0, 0}, {1, 0}, {2, 1}}}] = 1;
    cf.terms[Term{{{0, 0}, {1, 1}, {2, 1}}}] = -1;
    cf.terms[Term{{{0, 1}, {1, 0}, {2, 0}}}] = 1;
    cf.terms[Term{{{0, 1}, {1, 1}, {2, 0}}}] = -1;
    cf.terms[Term{{{0, 1}, {1, 0}, {2, 1}}}] = -1;
    cf.terms[Term{{{0, 1}, {1, 1}, {2, 1}}}] = -1;
    return cf;
  }
  throw SpecError("unknown inequality name: " + name);
}

}  // namespace bell
